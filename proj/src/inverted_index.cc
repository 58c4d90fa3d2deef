#include <tmr/inverted_index.hh>

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include <tmr/corpus.hh>
#include <tmr/errors.hh>

namespace tmr
{
  double bm25_idf(std::size_t num_segments, std::uint32_t df)
  {
    const double n = static_cast<double>(num_segments);
    const double f = static_cast<double>(df);
    return std::log((n - f + 0.5) / (f + 0.5) + 1.0);
  }

  double bm25_term_weight(const Bm25Params& params, double idf, std::uint32_t tf,
                          std::uint32_t doc_length, double avgdl)
  {
    const double t = static_cast<double>(tf);
    const double norm = params.k1 * (1.0 - params.b + params.b * static_cast<double>(doc_length) / avgdl);
    return idf * (t * (params.k1 + 1.0)) / (t + norm);
  }

  InvertedIndex InvertedIndex::build(const TranslationMemory& memory, double p, Bm25Params params)
  {
    std::vector<Tokens> sentences;
    sentences.reserve(memory.size());
    for (const auto& unit : memory.units())
      sentences.emplace_back(unit.source.tokens);
    return build(sentences, p, params);
  }

  InvertedIndex InvertedIndex::build(const std::vector<Tokens>& sentences, double p, Bm25Params params)
  {
    if (!(p > 0 && p <= 100))
      throw ConfigError(fmt::format("pruning percent must be in (0, 100], got {}", p));

    InvertedIndex index;
    index._p = p;
    index._params = params;

    TokenId max_token = 0;
    std::uint64_t total_length = 0;
    index._doc_length.reserve(sentences.size());
    for (const auto& s : sentences)
    {
      for (TokenId t : s)
        max_token = std::max(max_token, t);
      index._doc_length.push_back(static_cast<std::uint32_t>(s.size()));
      total_length += s.size();
    }
    const std::size_t n_terms = sentences.empty() ? 0 : static_cast<std::size_t>(max_token) + 1;
    index._avgdl = sentences.empty() ? 0 : static_cast<double>(total_length) / static_cast<double>(sentences.size());

    // term frequencies per segment, gathered in uid order so postings come out sorted
    std::vector<std::vector<Posting>> postings(n_terms);
    std::vector<TokenId> sorted;
    for (std::size_t i = 0; i < sentences.size(); ++i)
    {
      sorted.assign(sentences[i].begin(), sentences[i].end());
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t k = 0; k < sorted.size();)
      {
        std::size_t e = k;
        while (e < sorted.size() && sorted[e] == sorted[k])
          ++e;
        if (sorted[k] != kUnknownToken)
          postings[sorted[k]].push_back({static_cast<Uid>(i), static_cast<std::uint32_t>(e - k)});
        k = e;
      }
    }

    index._df.resize(n_terms);
    index._pruned.assign(n_terms, 0);
    const double n_segments = static_cast<double>(sentences.size());
    for (std::size_t t = 0; t < n_terms; ++t)
    {
      index._df[t] = static_cast<std::uint32_t>(postings[t].size());
      // common iff df > p% of the segments
      if (static_cast<double>(index._df[t]) * 100.0 > p * n_segments)
      {
        index._pruned[t] = 1;
        postings[t].clear();
        postings[t].shrink_to_fit();
      }
    }
    index._postings = std::move(postings);
    return index;
  }

  bool InvertedIndex::is_indexed(TokenId term) const
  {
    return term != kUnknownToken && term < _postings.size() && !_pruned[term] && !_postings[term].empty();
  }

  const std::vector<Posting>& InvertedIndex::postings(TokenId term) const
  {
    static const std::vector<Posting> empty;
    return term < _postings.size() ? _postings[term] : empty;
  }

  std::vector<TokenId> InvertedIndex::pruned_terms() const
  {
    std::vector<TokenId> terms;
    for (std::size_t t = 0; t < _pruned.size(); ++t)
      if (_pruned[t])
        terms.push_back(static_cast<TokenId>(t));
    return terms;
  }

  std::vector<TokenId> InvertedIndex::indexed_terms(Tokens query) const
  {
    std::vector<TokenId> terms;
    for (TokenId t : query)
      if (is_indexed(t))
        terms.push_back(t);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    return terms;
  }

  double InvertedIndex::idf(TokenId term) const
  {
    return bm25_idf(num_segments(), document_frequency(term));
  }

  double InvertedIndex::term_weight(double idf, std::uint32_t tf, std::uint32_t doc_length) const
  {
    return bm25_term_weight(_params, idf, tf, doc_length, _avgdl);
  }

  std::vector<ScoredUid> InvertedIndex::score_all(Tokens query, const std::function<bool(Uid)>& accept) const
  {
    const auto terms = indexed_terms(query);
    // gather postings in (uid, term) order so each score is summed in term order
    struct Entry
    {
      Uid uid;
      std::uint32_t term;  // position in `terms`
      std::uint32_t tf;
    };
    std::vector<Entry> entries;
    std::size_t total = 0;
    for (TokenId t : terms)
      total += _postings[t].size();
    entries.reserve(total);
    for (std::uint32_t k = 0; k < terms.size(); ++k)
      for (const auto& posting : _postings[terms[k]])
        if (!accept || accept(posting.uid))
          entries.push_back({posting.uid, k, posting.tf});
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      return a.uid < b.uid || (a.uid == b.uid && a.term < b.term);
    });

    std::vector<double> idfs;
    idfs.reserve(terms.size());
    for (TokenId t : terms)
      idfs.push_back(idf(t));

    std::vector<ScoredUid> scores;
    for (std::size_t i = 0; i < entries.size();)
    {
      const Uid uid = entries[i].uid;
      double score = 0;
      for (; i < entries.size() && entries[i].uid == uid; ++i)
        score += term_weight(idfs[entries[i].term], entries[i].tf, _doc_length[uid]);
      scores.push_back({uid, score});
    }
    return scores;
  }

  std::vector<double> InvertedIndex::score_docs(Tokens query, const std::vector<Uid>& uids) const
  {
    const auto terms = indexed_terms(query);
    std::vector<double> idfs;
    for (TokenId t : terms)
      idfs.push_back(idf(t));
    std::vector<double> scores;
    scores.reserve(uids.size());
    for (Uid uid : uids)
    {
      double score = 0;
      for (std::size_t k = 0; k < terms.size(); ++k)
      {
        const auto& plist = _postings[terms[k]];
        const auto it = std::lower_bound(plist.begin(), plist.end(), uid,
                                         [](const Posting& p, Uid u) { return p.uid < u; });
        if (it != plist.end() && it->uid == uid)
          score += term_weight(idfs[k], it->tf, _doc_length[uid]);
      }
      scores.push_back(score);
    }
    return scores;
  }

  std::vector<ScoredUid> InvertedIndex::bm25_candidates(Tokens query, std::size_t limit,
                                                        const std::function<bool(Uid)>& accept) const
  {
    if (limit == 0)
      throw ConfigError("BM25 candidate cap must be >= 1");
    auto scores = score_all(query, accept);
    auto order = [](const ScoredUid& a, const ScoredUid& b) {
      return a.score > b.score || (a.score == b.score && a.uid < b.uid);
    };
    if (scores.size() > limit)
    {
      std::partial_sort(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(limit), scores.end(), order);
      scores.resize(limit);
    }
    else
      std::sort(scores.begin(), scores.end(), order);
    return scores;
  }
}
