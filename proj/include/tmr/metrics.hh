#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <tmr/sentence.hh>

namespace tmr
{
  /* How query and example tokens are matched.
     bag_of_words: a token counts when its term occurs on the other side.
     modified: multiset clipping, each token occurrence is used at most once.
     (The alignment-based variant is not implemented.) */
  enum class OverlapVariant
  {
    bag_of_words,
    modified,
  };

  /* Fraction of query tokens covered by the examples. 0 for no examples or
     an empty query. */
  double coverage(Tokens query, const std::vector<Tokens>& examples, OverlapVariant variant);

  /* Mean over examples of the fraction of example tokens that contribute to
     covering the query. 0 for no examples; empty examples count as 0. */
  double relevance(Tokens query, const std::vector<Tokens>& examples, OverlapVariant variant);

  /* Mean number of tokens over all examples; 0 when there are none. */
  double mean_length(const std::vector<std::vector<Tokens>>& examples_per_query);

  struct VariantScores
  {
    double bag_of_words = 0;
    double modified = 0;
  };

  struct QueryQuality
  {
    VariantScores coverage;
    VariantScores relevance;
    std::size_t n_examples = 0;
    std::size_t example_tokens = 0;
    std::optional<double> copy_rate;
  };

  struct QualityReport
  {
    VariantScores coverage;
    VariantScores relevance;
    double mean_example_length = 0;
    std::size_t n_queries = 0;
    std::optional<double> copy_rate;
    std::vector<QueryQuality> per_query;
  };

  QueryQuality evaluate_query(Tokens query, const std::vector<Tokens>& examples);

  /* Averages over queries (and over all examples for length). */
  QualityReport summarize(std::vector<QueryQuality> per_query);

  /* Macro-average of per-domain reports; per_query is concatenated in
     domain order. */
  QualityReport macro_average(const std::map<std::string, QualityReport>& by_domain);
}
