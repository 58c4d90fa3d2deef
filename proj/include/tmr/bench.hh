#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <tmr/corpus.hh>
#include <tmr/metrics.hh>
#include <tmr/pipeline.hh>

namespace tmr::bench
{
  /* Seeded synthetic parallel corpus. Sentence i is either fresh (uniform
     tokens over the vocabulary) or, with probability `repetition`, a copy of
     a uniformly chosen earlier sentence; with probability `variation` a copy
     gets a few token substitutions (at most a quarter of its length, so it
     stays linked to its parent in the density graph). Generation is
     prefix-stable: the first m sentences do not depend on `size`. Targets
     are the sources with every word spelled backwards. */
  struct SyntheticSpec
  {
    std::size_t size = 1000;
    std::size_t vocabulary = 5000;
    double mean_length = 15;
    double repetition = 0.3;
    double variation = 0.5;
    std::size_t domains = 1;
    std::uint64_t seed = 1;

    void validate() const;
  };

  TranslationMemory generate_corpus(const SyntheticSpec& spec);

  std::string reverse_word(std::string_view word);

  struct QueryText
  {
    std::string text;
    std::string domain;
  };

  /* Queries are fuzzy variants (1-3 substitutions) of sentences drawn from
     the first `pool` units of the memory, with their unit's domain. */
  std::vector<BatchQuery> generate_queries(const TranslationMemory& memory,
                                           std::size_t count,
                                           std::uint64_t seed,
                                           std::size_t pool = 0);
  std::vector<QueryText> generate_query_texts(const TranslationMemory& memory,
                                              std::size_t count,
                                              std::uint64_t seed,
                                              std::size_t pool = 0);

  struct NamedConfig
  {
    std::string name;
    RetrievalConfig config;
  };

  /* "<filter>+<ranker>[+c]" with filter in {ngm, bm25, none} and ranker in
     {led, lcs, dlcs, bm25}; "+c" turns on contrast with `alpha`. */
  NamedConfig parse_strategy(std::string_view name,
                             std::size_t k = 3,
                             double tau = 0.3,
                             std::size_t ml = 3,
                             std::size_t limit = 100,
                             double delta = 0.1,
                             double alpha = 0.3);

  struct Quartiles
  {
    double tau = 0;
    std::size_t q1 = 0;
    std::size_t q2 = 0;
    std::size_t q3 = 0;
  };

  struct StrategyRow
  {
    std::string name;
    QualityReport report;
  };

  struct Comparison
  {
    std::vector<StrategyRow> rows;
    std::vector<Quartiles> ngm_quartiles;
  };

  /* nearest-rank quartiles of the number of NGM survivors per query */
  std::vector<Quartiles> ngm_survivor_quartiles(const TranslationIndex& index,
                                                const std::vector<BatchQuery>& queries,
                                                const std::vector<double>& taus,
                                                std::size_t ml = 3);

  Comparison compare_strategies(const TranslationIndex& index,
                                const std::vector<BatchQuery>& queries,
                                const std::vector<NamedConfig>& configs,
                                const std::vector<double>& taus = {0.2, 0.3, 0.4, 0.5});

  std::string to_table(const Comparison& comparison);
  std::string to_json(const Comparison& comparison);

  struct StageTiming
  {
    std::string stage;                 // "ngm", "bm25", "ed"
    std::vector<double> median_us;     // per corpus size
    double exponent = 0;               // least-squares slope of log(latency) vs log(size)
  };

  struct TimingReport
  {
    std::vector<std::size_t> sizes;
    std::vector<StageTiming> stages;
    double ed_query_doubling_ratio = 0;  // ED time with doubled queries / plain, largest size
    double total_seconds = 0;
  };

  struct TimingOptions
  {
    std::size_t queries = 5;
    std::size_t ngm_repeats = 50;
    std::size_t bm25_repeats = 5;
    std::size_t ed_queries = 3;
  };

  TimingReport timing_sweep(const std::vector<std::size_t>& sizes,
                            SyntheticSpec spec,
                            const TimingOptions& options = {});

  double loglog_slope(const std::vector<std::size_t>& sizes, const std::vector<double>& values);

  std::string to_table(const TimingReport& report);
  std::string to_json(const TimingReport& report);

  /* key = value lines, '#' comments */
  std::map<std::string, std::string> parse_config(std::string_view text);
}
