#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <tmr/sentence.hh>

namespace tmr
{
  /* Bidirectional surface <-> id map. Id 0 is the reserved unknown token.
     Segment frequencies are only meaningful for the side they were counted
     on (the memory counts source segments). */
  class Vocabulary
  {
  public:
    static constexpr std::string_view unknown_surface = "<unk>";

    Vocabulary();

    /* build phase: returns the id of `word`, registering it if needed */
    TokenId intern(std::string_view word);
    /* query phase: unknown words map to kUnknownToken */
    TokenId lookup(std::string_view word) const;

    const std::string& surface(TokenId id) const { return _surfaces.at(id); }
    std::size_t size() const { return _surfaces.size(); }

    Sentence encode(const std::vector<std::string>& words);
    Sentence encode_frozen(const std::vector<std::string>& words) const;
    std::string decode(Tokens tokens) const;

    /* counts each distinct id of the segment once */
    void count_segment(Tokens tokens);
    std::uint32_t segment_frequency(TokenId id) const
    {
      return id < _segment_freq.size() ? _segment_freq[id] : 0;
    }
    const std::vector<std::uint32_t>& segment_frequencies() const { return _segment_freq; }
    void reset_segment_frequencies() { _segment_freq.assign(_surfaces.size(), 0); }

    friend bool operator==(const Vocabulary& a, const Vocabulary& b)
    {
      return a._surfaces == b._surfaces && a._segment_freq == b._segment_freq;
    }

  private:
    struct StringHash
    {
      using is_transparent = void;
      std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
    };

    std::vector<std::string> _surfaces;
    std::unordered_map<std::string, TokenId, StringHash, std::equal_to<>> _ids;
    std::vector<std::uint32_t> _segment_freq;
    std::vector<std::uint32_t> _last_seen;  // scratch for count_segment
    std::uint32_t _segment_counter = 0;

    friend class BinaryAccess;
  };
}
