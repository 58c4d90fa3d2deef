#pragma once

#include <cstdint>
#include <vector>

#include <tmr/sentence.hh>

namespace tmr
{
  class TranslationMemory;

  struct NgramHit
  {
    Uid uid;
    std::uint32_t length;  // longest contiguous n-gram shared with the query

    friend bool operator==(const NgramHit&, const NgramHit&) = default;
  };

  /* Suffix array over the concatenated source sentences. Each sentence is
     followed by a boundary token (id 0) that sorts lowest; boundaries of
     different sentences are ordered by position, so no match ever crosses a
     sentence. Only token positions are indexed. */
  class SuffixArrayIndex
  {
  public:
    SuffixArrayIndex() = default;

    static SuffixArrayIndex build(const TranslationMemory& memory);
    /* sentence i gets uid i */
    static SuffixArrayIndex build(const std::vector<Tokens>& sentences);

    /* For every sentence sharing a contiguous n-gram of length >= min_length
       with the query, its longest such length. Sorted by uid. Unknown query
       tokens never match. */
    std::vector<NgramHit> longest_common_ngram(Tokens query, std::size_t min_length = 1) const;

    std::size_t num_sentences() const { return _sentence_start.size(); }
    std::size_t num_suffixes() const { return _suffixes.size(); }
    const std::vector<std::uint32_t>& suffixes() const { return _suffixes; }
    const std::vector<TokenId>& stream() const { return _stream; }
    Uid sentence_of(std::uint32_t position) const { return _sentence_of[position]; }

    friend bool operator==(const SuffixArrayIndex&, const SuffixArrayIndex&) = default;

  private:
    void build_from_stream();

    std::vector<TokenId> _stream;
    std::vector<std::uint32_t> _suffixes;
    std::vector<Uid> _sentence_of;             // per stream position
    std::vector<std::uint32_t> _sentence_start;
    std::vector<std::uint32_t> _bucket;        // suffix range of each first token

    friend class BinaryAccess;
  };
}
