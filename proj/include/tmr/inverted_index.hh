#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <tmr/sentence.hh>

namespace tmr
{
  class TranslationMemory;

  struct Bm25Params
  {
    double k1 = 1.2;
    double b = 0.75;

    friend bool operator==(const Bm25Params&, const Bm25Params&) = default;
  };

  struct Posting
  {
    Uid uid;
    std::uint32_t tf;

    friend bool operator==(const Posting&, const Posting&) = default;
  };

  struct ScoredUid
  {
    Uid uid;
    double score;

    friend bool operator==(const ScoredUid&, const ScoredUid&) = default;
  };

  /* Okapi BM25 over source segments. A term is "common" and left out of the
     index when it occurs in more than p percent of the segments. Query terms
     are used as a set; only indexed terms contribute to scores. */
  class InvertedIndex
  {
  public:
    InvertedIndex() = default;

    /* 0 < p <= 100, throws ConfigError otherwise */
    static InvertedIndex build(const TranslationMemory& memory, double p = 2.0, Bm25Params params = {});
    /* sentence i gets uid i */
    static InvertedIndex build(const std::vector<Tokens>& sentences, double p = 2.0, Bm25Params params = {});

    bool is_pruned(TokenId term) const { return term < _pruned.size() && _pruned[term]; }
    bool is_indexed(TokenId term) const;
    const std::vector<Posting>& postings(TokenId term) const;
    std::vector<TokenId> pruned_terms() const;

    /* sorted distinct query terms that have a posting list */
    std::vector<TokenId> indexed_terms(Tokens query) const;

    double idf(TokenId term) const;
    /* term-at-a-time scoring of every segment containing an indexed query
       term, restricted to `accept` when given; ordered by uid */
    std::vector<ScoredUid> score_all(Tokens query, const std::function<bool(Uid)>& accept = {}) const;
    /* scores of the given segments (0 when no indexed query term occurs) */
    std::vector<double> score_docs(Tokens query, const std::vector<Uid>& uids) const;

    /* top-L of score_all by (score desc, uid asc) */
    std::vector<ScoredUid> bm25_candidates(Tokens query, std::size_t limit,
                                           const std::function<bool(Uid)>& accept = {}) const;

    double prune_percent() const { return _p; }
    const Bm25Params& params() const { return _params; }
    std::size_t num_segments() const { return _doc_length.size(); }
    std::uint32_t doc_length(Uid uid) const { return _doc_length[uid]; }
    double average_length() const { return _avgdl; }
    std::uint32_t document_frequency(TokenId term) const
    {
      return term < _df.size() ? _df[term] : 0;
    }

    friend bool operator==(const InvertedIndex&, const InvertedIndex&) = default;

  private:
    double term_weight(double idf, std::uint32_t tf, std::uint32_t doc_length) const;

    double _p = 2.0;
    Bm25Params _params;
    std::vector<std::vector<Posting>> _postings;  // by term id; empty when pruned
    std::vector<std::uint8_t> _pruned;
    std::vector<std::uint32_t> _df;
    std::vector<std::uint32_t> _doc_length;
    double _avgdl = 0;

    friend class BinaryAccess;
  };

  /* The BM25 formula shared by the index and its tests. */
  double bm25_idf(std::size_t num_segments, std::uint32_t df);
  double bm25_term_weight(const Bm25Params& params, double idf, std::uint32_t tf,
                          std::uint32_t doc_length, double avgdl);
}
