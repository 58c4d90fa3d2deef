#pragma once

#include <array>
#include <vector>

#include <tmr/sentence.hh>

namespace tmr
{
  inline constexpr std::size_t kBleuOrder = 4;

  struct BleuStats
  {
    std::array<std::size_t, kBleuOrder> correct{};  // clipped against the max count over references
    std::array<std::size_t, kBleuOrder> total{};
    std::size_t hypothesis_length = 0;
    std::size_t reference_length = 0;  // closest reference length, shorter on ties
  };

  BleuStats bleu_stats(Tokens hypothesis, const std::vector<Tokens>& references);

  /* Sentence-level BLEU-4 in [0, 100] with exponential smoothing of zero
     n-gram counts. Orders the hypothesis is too short for are left out
     (effective order). 0 for an empty hypothesis and when not a single
     unigram matches. */
  double sentence_bleu(Tokens hypothesis, const std::vector<Tokens>& references, bool brevity_penalty = true);

  /* Multi-reference sentence BLEU without brevity penalty: how much of the
     hypothesis recopies material from the references. */
  inline double copy_rate(Tokens hypothesis, const std::vector<Tokens>& references)
  {
    return sentence_bleu(hypothesis, references, false);
  }
}
