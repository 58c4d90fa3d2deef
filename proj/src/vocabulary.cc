#include <tmr/vocabulary.hh>

namespace tmr
{
  Vocabulary::Vocabulary()
  {
    _surfaces.emplace_back(unknown_surface);
    _ids.emplace(std::string(unknown_surface), kUnknownToken);
    _segment_freq.push_back(0);
  }

  TokenId Vocabulary::intern(std::string_view word)
  {
    auto it = _ids.find(word);
    if (it != _ids.end())
      return it->second;
    const auto id = static_cast<TokenId>(_surfaces.size());
    _surfaces.emplace_back(word);
    _ids.emplace(std::string(word), id);
    _segment_freq.push_back(0);
    return id;
  }

  TokenId Vocabulary::lookup(std::string_view word) const
  {
    auto it = _ids.find(word);
    return it == _ids.end() ? kUnknownToken : it->second;
  }

  Sentence Vocabulary::encode(const std::vector<std::string>& words)
  {
    std::vector<TokenId> ids;
    ids.reserve(words.size());
    for (const auto& w : words)
      ids.push_back(intern(w));
    return Sentence(std::move(ids));
  }

  Sentence Vocabulary::encode_frozen(const std::vector<std::string>& words) const
  {
    std::vector<TokenId> ids;
    ids.reserve(words.size());
    for (const auto& w : words)
      ids.push_back(lookup(w));
    return Sentence(std::move(ids));
  }

  std::string Vocabulary::decode(Tokens tokens) const
  {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i)
    {
      if (i)
        out.push_back(' ');
      out += surface(tokens[i]);
    }
    return out;
  }

  void Vocabulary::count_segment(Tokens tokens)
  {
    if (_segment_freq.size() < _surfaces.size())
      _segment_freq.resize(_surfaces.size(), 0);
    if (_last_seen.size() < _surfaces.size())
      _last_seen.resize(_surfaces.size(), 0);
    ++_segment_counter;
    for (TokenId id : tokens)
    {
      if (_last_seen[id] != _segment_counter)
      {
        _last_seen[id] = _segment_counter;
        ++_segment_freq[id];
      }
    }
  }
}
