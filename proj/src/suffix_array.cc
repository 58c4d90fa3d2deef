#include <tmr/suffix_array.hh>

#include <algorithm>
#include <ranges>

#include <tmr/corpus.hh>

namespace tmr
{
  SuffixArrayIndex SuffixArrayIndex::build(const TranslationMemory& memory)
  {
    std::vector<Tokens> sentences;
    sentences.reserve(memory.size());
    for (const auto& unit : memory.units())
      sentences.emplace_back(unit.source.tokens);
    return build(sentences);
  }

  SuffixArrayIndex SuffixArrayIndex::build(const std::vector<Tokens>& sentences)
  {
    SuffixArrayIndex index;
    std::size_t total = 0;
    for (const auto& s : sentences)
      total += s.size() + 1;
    index._stream.reserve(total);
    index._sentence_of.reserve(total);
    index._sentence_start.reserve(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i)
    {
      index._sentence_start.push_back(static_cast<std::uint32_t>(index._stream.size()));
      for (TokenId t : sentences[i])
      {
        index._stream.push_back(t);
        index._sentence_of.push_back(static_cast<Uid>(i));
      }
      index._stream.push_back(kUnknownToken);
      index._sentence_of.push_back(static_cast<Uid>(i));
    }
    index.build_from_stream();
    return index;
  }

  void SuffixArrayIndex::build_from_stream()
  {
    TokenId max_token = 0;
    for (TokenId t : _stream)
      max_token = std::max(max_token, t);

    // counting sort on the first token, then comparison sort inside buckets
    _bucket.assign(static_cast<std::size_t>(max_token) + 2, 0);
    std::size_t n_positions = 0;
    for (TokenId t : _stream)
      if (t != kUnknownToken)
      {
        ++_bucket[t + 1];
        ++n_positions;
      }
    for (std::size_t t = 1; t < _bucket.size(); ++t)
      _bucket[t] += _bucket[t - 1];

    _suffixes.assign(n_positions, 0);
    std::vector<std::uint32_t> fill(_bucket.begin(), _bucket.end() - 1);
    for (std::uint32_t p = 0; p < _stream.size(); ++p)
      if (_stream[p] != kUnknownToken)
        _suffixes[fill[_stream[p]]++] = p;

    const TokenId* stream = _stream.data();
    auto less = [stream](std::uint32_t p, std::uint32_t q) {
      for (std::uint32_t k = 1;; ++k)
      {
        const TokenId a = stream[p + k];
        const TokenId b = stream[q + k];
        if (a != b)
          return a < b;
        if (a == kUnknownToken)
          return p < q;
      }
    };
    for (std::size_t t = 1; t + 1 < _bucket.size(); ++t)
    {
      auto first = _suffixes.begin() + _bucket[t];
      auto last = _suffixes.begin() + _bucket[t + 1];
      if (last - first > 1)
        std::sort(first, last, less);
    }
  }

  std::vector<NgramHit> SuffixArrayIndex::longest_common_ngram(Tokens query, std::size_t min_length) const
  {
    std::vector<NgramHit> hits;
    if (min_length == 0)
      min_length = 1;
    if (_suffixes.empty() || query.size() < min_length)
      return hits;

    using Iter = std::vector<std::uint32_t>::const_iterator;
    struct Range
    {
      Iter lo, hi;
    };
    std::vector<Range> ranges;
    const TokenId* stream = _stream.data();

    for (std::size_t i = 0; i + min_length <= query.size(); ++i)
    {
      const TokenId first = query[i];
      if (first == kUnknownToken || first + 1 >= _bucket.size())
        continue;
      Range range{_suffixes.begin() + _bucket[first], _suffixes.begin() + _bucket[first + 1]};
      if (range.lo == range.hi)
        continue;

      // narrow to the suffixes starting with query[i .. i+len)
      ranges.clear();
      std::size_t len = 1;
      if (len >= min_length)
        ranges.push_back(range);
      for (; i + len < query.size(); ++len)
      {
        const TokenId next = query[i + len];
        if (next == kUnknownToken)
          break;
        auto [lo, hi] = std::ranges::equal_range(
          range.lo, range.hi, next, std::less<>{},
          [stream, len](std::uint32_t p) { return stream[p + len]; });
        if (lo == hi)
          break;
        range = {lo, hi};
        if (len + 1 >= min_length)
          ranges.push_back(range);
      }
      if (ranges.empty())
        continue;

      // ranges are nested; each suffix gets the depth of the deepest range holding it
      const std::size_t deepest = ranges.size() - 1;
      const auto base = static_cast<std::uint32_t>(len - deepest);
      for (Iter it = ranges[deepest].lo; it != ranges[deepest].hi; ++it)
        hits.push_back({_sentence_of[*it], base + static_cast<std::uint32_t>(deepest)});
      for (std::size_t d = deepest; d-- > 0;)
      {
        const auto l = base + static_cast<std::uint32_t>(d);
        for (Iter it = ranges[d].lo; it != ranges[d + 1].lo; ++it)
          hits.push_back({_sentence_of[*it], l});
        for (Iter it = ranges[d + 1].hi; it != ranges[d].hi; ++it)
          hits.push_back({_sentence_of[*it], l});
      }
    }

    std::sort(hits.begin(), hits.end(), [](const NgramHit& a, const NgramHit& b) {
      return a.uid < b.uid || (a.uid == b.uid && a.length > b.length);
    });
    auto last = std::unique(hits.begin(), hits.end(),
                            [](const NgramHit& a, const NgramHit& b) { return a.uid == b.uid; });
    hits.erase(last, hits.end());
    return hits;
  }
}
