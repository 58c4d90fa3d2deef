#include <tmr/tokenizer.hh>

#include <tmr/errors.hh>

namespace tmr
{
  bool is_valid_utf8(std::string_view text)
  {
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n)
    {
      const auto c = static_cast<unsigned char>(text[i]);
      std::size_t extra;
      std::uint32_t cp;
      if (c < 0x80)
      {
        ++i;
        continue;
      }
      else if ((c & 0xE0) == 0xC0)
      {
        extra = 1;
        cp = c & 0x1F;
      }
      else if ((c & 0xF0) == 0xE0)
      {
        extra = 2;
        cp = c & 0x0F;
      }
      else if ((c & 0xF8) == 0xF0)
      {
        extra = 3;
        cp = c & 0x07;
      }
      else
        return false;
      if (i + extra >= n)
        return false;
      for (std::size_t k = 1; k <= extra; ++k)
      {
        const auto cc = static_cast<unsigned char>(text[i + k]);
        if ((cc & 0xC0) != 0x80)
          return false;
        cp = (cp << 6) | (cc & 0x3F);
      }
      // overlong forms, surrogates, out of range
      if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) || (extra == 3 && cp < 0x10000))
        return false;
      if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
        return false;
      i += extra + 1;
    }
    return true;
  }

  static bool is_space(char c)
  {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  }

  static bool is_ascii_punct(char c)
  {
    const auto u = static_cast<unsigned char>(c);
    return u < 0x80 && ((u >= 0x21 && u <= 0x2F) || (u >= 0x3A && u <= 0x40)
                        || (u >= 0x5B && u <= 0x60) || (u >= 0x7B && u <= 0x7E));
  }

  std::vector<std::string> tokenize(std::string_view text, const TokenizerOptions& options)
  {
    if (!is_valid_utf8(text))
      throw IngestionError("invalid UTF-8 sequence");

    std::vector<std::string> words;
    std::string current;
    auto flush = [&] {
      if (!current.empty())
      {
        words.push_back(std::move(current));
        current.clear();
      }
    };

    for (char c : text)
    {
      if (is_space(c))
      {
        flush();
        continue;
      }
      if (options.lowercase && c >= 'A' && c <= 'Z')
        c = static_cast<char>(c - 'A' + 'a');
      if (options.mode == TokenizerMode::punct && is_ascii_punct(c))
      {
        flush();
        words.emplace_back(1, c);
        continue;
      }
      current.push_back(c);
    }
    flush();
    return words;
  }

  std::string detokenize(const std::vector<std::string>& words)
  {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i)
    {
      if (i)
        out.push_back(' ');
      out += words[i];
    }
    return out;
  }

  TokenizerMode parse_tokenizer_mode(std::string_view name)
  {
    if (name == "whitespace")
      return TokenizerMode::whitespace;
    if (name == "punct")
      return TokenizerMode::punct;
    throw ConfigError("unknown tokenizer mode '" + std::string(name) + "'");
  }

  std::string_view to_string(TokenizerMode mode)
  {
    return mode == TokenizerMode::punct ? "punct" : "whitespace";
  }
}
