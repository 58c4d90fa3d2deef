#include <tmr/bleu.hh>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

namespace tmr
{
  namespace
  {
    using NgramCounts = std::map<std::vector<TokenId>, std::size_t>;

    NgramCounts ngrams(Tokens tokens, std::size_t n)
    {
      NgramCounts counts;
      for (std::size_t i = 0; i + n <= tokens.size(); ++i)
        ++counts[std::vector<TokenId>(tokens.begin() + i, tokens.begin() + i + n)];
      return counts;
    }
  }

  BleuStats bleu_stats(Tokens hypothesis, const std::vector<Tokens>& references)
  {
    BleuStats stats;
    stats.hypothesis_length = hypothesis.size();

    bool first = true;
    for (const auto& ref : references)
    {
      const auto diff = std::abs(static_cast<long>(ref.size()) - static_cast<long>(hypothesis.size()));
      const auto best = std::abs(static_cast<long>(stats.reference_length) - static_cast<long>(hypothesis.size()));
      if (first || diff < best || (diff == best && ref.size() < stats.reference_length))
        stats.reference_length = ref.size();
      first = false;
    }

    for (std::size_t n = 1; n <= kBleuOrder; ++n)
    {
      const auto hyp = ngrams(hypothesis, n);
      NgramCounts max_ref;
      for (const auto& ref : references)
        for (const auto& [gram, count] : ngrams(ref, n))
        {
          auto& m = max_ref[gram];
          m = std::max(m, count);
        }
      for (const auto& [gram, count] : hyp)
      {
        stats.total[n - 1] += count;
        auto it = max_ref.find(gram);
        if (it != max_ref.end())
          stats.correct[n - 1] += std::min(count, it->second);
      }
    }
    return stats;
  }

  double sentence_bleu(Tokens hypothesis, const std::vector<Tokens>& references, bool brevity_penalty)
  {
    if (hypothesis.empty() || references.empty())
      return 0;
    const auto stats = bleu_stats(hypothesis, references);
    if (stats.correct[0] == 0)
      return 0;

    double log_sum = 0;
    std::size_t order = 0;
    double smooth = 1;
    for (std::size_t n = 0; n < kBleuOrder; ++n)
    {
      if (stats.total[n] == 0)
        break;
      order = n + 1;
      double precision;
      if (stats.correct[n] == 0)
      {
        smooth *= 2;
        precision = 1.0 / (smooth * static_cast<double>(stats.total[n]));
      }
      else
        precision = static_cast<double>(stats.correct[n]) / static_cast<double>(stats.total[n]);
      log_sum += std::log(precision);
    }
    if (order == 0)
      return 0;

    double bp = 1;
    if (brevity_penalty && stats.hypothesis_length < stats.reference_length)
      bp = std::exp(1.0 - static_cast<double>(stats.reference_length) / static_cast<double>(stats.hypothesis_length));
    return 100.0 * bp * std::exp(log_sum / static_cast<double>(order));
  }
}
