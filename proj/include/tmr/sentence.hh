#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tmr
{
  using TokenId = std::uint32_t;
  using Uid = std::uint32_t;

  /* Reserved id for terms missing from a frozen vocabulary. It never occurs
     in indexed text, so it never matches anything. */
  inline constexpr TokenId kUnknownToken = 0;

  using Tokens = std::span<const TokenId>;

  struct Sentence
  {
    std::vector<TokenId> tokens;

    Sentence() = default;
    explicit Sentence(std::vector<TokenId> ids) : tokens(std::move(ids)) {}

    std::size_t length() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }
    operator Tokens() const { return tokens; }

    friend bool operator==(const Sentence&, const Sentence&) = default;
  };

  struct TranslationUnit
  {
    Uid uid = 0;
    Sentence source;
    Sentence target;
    std::uint32_t domain = 0;  // index into the memory's domain table
  };
}
