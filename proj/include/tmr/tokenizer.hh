#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tmr
{
  enum class TokenizerMode : std::uint8_t
  {
    whitespace = 0,  // text is already tokenized
    punct = 1,       // additionally split ASCII punctuation off words
  };

  struct TokenizerOptions
  {
    TokenizerMode mode = TokenizerMode::whitespace;
    bool lowercase = false;  // ASCII only

    friend bool operator==(const TokenizerOptions&, const TokenizerOptions&) = default;
  };

  bool is_valid_utf8(std::string_view text);

  /* Splits text into surface tokens. Throws IngestionError on invalid UTF-8. */
  std::vector<std::string> tokenize(std::string_view text, const TokenizerOptions& options = {});

  std::string detokenize(const std::vector<std::string>& words);

  TokenizerMode parse_tokenizer_mode(std::string_view name);
  std::string_view to_string(TokenizerMode mode);
}
