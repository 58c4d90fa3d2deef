#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <tmr/sentence.hh>

namespace tmr
{
  /* Delete/insert/replace costs of the generalized edit distance, copies are
     free. Costs are stored as integers over a common denominator `scale` so
     that every comparison in the dynamic program is exact. */
  struct EditCosts
  {
    std::int64_t deletion = 1;
    std::int64_t insertion = 1;
    std::int64_t replacement = 1;
    std::int64_t scale = 1;

    static EditCosts led() { return {1, 1, 1, 1}; }
    static EditCosts lcs() { return {0, 1, 1, 1}; }
    /* deletion cost delta, insertion and replacement 1 */
    static EditCosts delta_lcs(double delta = 0.1);
    /* Decimal costs with at most 6 fractional digits. Throws ConfigError
       for negative or unrepresentable values. */
    static EditCosts from_decimal(double deletion, double insertion, double replacement);

    double deletion_cost() const { return double(deletion) / double(scale); }
    double insertion_cost() const { return double(insertion) / double(scale); }
    double replacement_cost() const { return double(replacement) / double(scale); }

    /* throws ConfigError unless all costs >= 0 and insertion or replacement > 0 */
    void validate() const;
    std::string to_string() const;

    friend bool operator==(const EditCosts& a, const EditCosts& b)
    {
      return a.deletion * b.scale == b.deletion * a.scale
        && a.insertion * b.scale == b.insertion * a.scale
        && a.replacement * b.scale == b.replacement * a.scale;
    }
  };

  struct EditResult
  {
    std::int64_t delta = 0;       // scaled by EditCosts::scale
    std::int64_t normalizer = 0;  // scaled by EditCosts::scale
    double similarity = 1;
    std::size_t ecs_length = 0;   // copies along an optimal script, maximal among ties
  };

  /* N(|example|, |query|): upper bound of the cost of editing example into query. */
  std::int64_t edit_normalizer(const EditCosts& costs, std::size_t example_length, std::size_t query_length);

  /* Minimal cost of editing `example` into `query`, full O(|example| |query|) table. */
  EditResult edit_distance(Tokens example, Tokens query, const EditCosts& costs);

  /* Same, but gives up (nullopt) once the cost provably exceeds `max_delta`
     (scaled units). */
  std::optional<EditResult> edit_distance_within(Tokens example,
                                                 Tokens query,
                                                 const EditCosts& costs,
                                                 std::int64_t max_delta);

  std::size_t lcs_length(Tokens a, Tokens b);

  /* 1 - Δ/max(|example|, |query|) with unit costs. */
  double led_similarity(Tokens example, Tokens query);
}
