#pragma once

// Slow reference implementations used to check the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <vector>

#include <tmr/sentence.hh>

namespace oracle
{
  using tmr::TokenId;
  using tmr::Tokens;

  struct Costs
  {
    std::int64_t d, a, r;  // integer units
  };

  struct EditOracle
  {
    std::int64_t delta = 0;
    std::size_t max_copies = 0;  // among minimal-cost scripts
  };

  /* Cheapest way to turn a gap of g1 example tokens into g2 query tokens
     without copies: pair up m tokens as replacements, delete/insert the rest.
     The cost is linear in m, so an endpoint is optimal. */
  inline std::int64_t gap_cost(const Costs& c, std::int64_t g1, std::int64_t g2)
  {
    const std::int64_t m = std::min(g1, g2);
    return std::min(c.d * g1 + c.a * g2, c.r * m + c.d * (g1 - m) + c.a * (g2 - m));
  }

  /* Every edit script is a monotone set of copied pairs (equal tokens) with
     the gaps between them edited without copies. Enumerates all such sets
     for up to N cost settings at once. */
  template <std::size_t N>
  class ScriptEnumerator
  {
  public:
    ScriptEnumerator(Tokens x, Tokens q, const std::array<Costs, N>& costs)
      : _x(x), _q(q), _costs(costs)
    {
      _best.fill({std::numeric_limits<std::int64_t>::max(), 0});
      std::array<std::int64_t, N> acc{};
      walk(0, 0, 0, acc);
    }

    const std::array<EditOracle, N>& best() const { return _best; }

  private:
    void walk(std::size_t i, std::size_t j, std::size_t copies, const std::array<std::int64_t, N>& acc)
    {
      for (std::size_t c = 0; c < N; ++c)
      {
        const std::int64_t total = acc[c] + gap_cost(_costs[c], std::int64_t(_x.size() - i),
                                                     std::int64_t(_q.size() - j));
        auto& b = _best[c];
        if (total < b.delta || (total == b.delta && copies > b.max_copies))
          b = {total, copies};
      }
      for (std::size_t i2 = i; i2 < _x.size(); ++i2)
        for (std::size_t j2 = j; j2 < _q.size(); ++j2)
          if (_x[i2] == _q[j2])
          {
            std::array<std::int64_t, N> next;
            for (std::size_t c = 0; c < N; ++c)
              next[c] = acc[c] + gap_cost(_costs[c], std::int64_t(i2 - i), std::int64_t(j2 - j));
            walk(i2 + 1, j2 + 1, copies + 1, next);
          }
    }

    Tokens _x;
    Tokens _q;
    const std::array<Costs, N>& _costs;
    std::array<EditOracle, N> _best;
  };

  inline EditOracle edit(Tokens x, Tokens q, Costs c)
  {
    std::array<Costs, 1> costs{c};
    return ScriptEnumerator<1>(x, q, costs).best()[0];
  }

  /* longest common subsequence by enumerating subsets of the shorter side */
  inline std::size_t lcs(Tokens a, Tokens b)
  {
    if (a.size() > b.size())
      std::swap(a, b);
    std::size_t best = 0;
    for (std::uint32_t mask = 0; mask < (1u << a.size()); ++mask)
    {
      const auto bits = static_cast<std::size_t>(__builtin_popcount(mask));
      if (bits <= best)
        continue;
      std::size_t k = 0;
      bool found = true;
      for (std::size_t i = 0; i < a.size() && found; ++i)
      {
        if (!(mask >> i & 1u))
          continue;
        while (k < b.size() && b[k] != a[i])
          ++k;
        found = k < b.size();
        ++k;
      }
      if (found)
        best = bits;
    }
    return best;
  }

  /* longest contiguous run shared by the query and the sentence, ignoring token 0 */
  inline std::size_t longest_common_ngram(Tokens q, Tokens s)
  {
    std::size_t best = 0;
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t j = 0; j < s.size(); ++j)
      {
        std::size_t n = 0;
        while (i + n < q.size() && j + n < s.size() && q[i + n] == s[j + n] && q[i + n] != 0)
          ++n;
        best = std::max(best, n);
      }
    return best;
  }

  /* BM25 computed from raw counts, document by document */
  struct NaiveBm25
  {
    double k1 = 1.2;
    double b = 0.75;
    double p = 2.0;

    std::vector<double> scores(const std::vector<Tokens>& docs, Tokens query, std::vector<bool>& touched) const
    {
      const double n = double(docs.size());
      double total = 0;
      for (auto d : docs)
        total += double(d.size());
      const double avgdl = docs.empty() ? 0 : total / n;

      std::set<TokenId> terms(query.begin(), query.end());
      std::vector<double> out(docs.size(), 0.0);
      touched.assign(docs.size(), false);
      for (TokenId t : terms)
      {
        if (t == 0)
          continue;
        std::size_t df = 0;
        for (auto d : docs)
          df += std::find(d.begin(), d.end(), t) != d.end();
        if (df == 0 || double(df) * 100.0 > p * n)
          continue;
        const double idf = std::log((n - double(df) + 0.5) / (double(df) + 0.5) + 1.0);
        for (std::size_t i = 0; i < docs.size(); ++i)
        {
          const double tf = double(std::count(docs[i].begin(), docs[i].end(), t));
          if (tf == 0)
            continue;
          touched[i] = true;
          const double dl = double(docs[i].size());
          out[i] += idf * (tf * (k1 + 1)) / (tf + k1 * (1 - b + b * dl / avgdl));
        }
      }
      return out;
    }
  };

  /* multiset intersection size of two token lists */
  inline std::size_t clipped_overlap(Tokens a, Tokens b)
  {
    std::map<TokenId, long> count;
    for (auto t : b)
      ++count[t];
    std::size_t n = 0;
    for (auto t : a)
      if (count[t]-- > 0)
        ++n;
    return n;
  }
}
