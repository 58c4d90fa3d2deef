#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <tmr/edit_distance.hh>
#include <tmr/index.hh>

namespace tmr
{
  enum class DomainPolicy
  {
    in_domain,
    all_domains,
    out_of_domain,
  };

  DomainPolicy parse_domain_policy(std::string_view name);
  std::string_view to_string(DomainPolicy policy);

  /* The set of uids a query may retrieve from. Membership is O(1); the set
     is only materialized on demand. */
  class Universe
  {
  public:
    Universe(const TranslationMemory& memory, DomainPolicy policy, std::uint32_t domain = 0)
      : _memory(&memory), _policy(policy), _domain(domain) {}

    bool contains(Uid uid) const
    {
      switch (_policy)
      {
      case DomainPolicy::in_domain:
        return _memory->unit(uid).domain == _domain;
      case DomainPolicy::out_of_domain:
        return _memory->unit(uid).domain != _domain;
      default:
        return uid < _memory->size();
      }
    }
    bool is_everything() const { return _policy == DomainPolicy::all_domains; }
    std::vector<Uid> uids() const;
    std::size_t size() const { return uids().size(); }

  private:
    const TranslationMemory* _memory;
    DomainPolicy _policy;
    std::uint32_t _domain;
  };

  /* Throws ConfigError when the policy needs a domain that the memory does not know. */
  Universe select_domain(const TranslationMemory& memory,
                         DomainPolicy policy,
                         const std::optional<std::string>& query_domain);

  struct NoFilter
  {
  };

  struct NgmFilter
  {
    double tau = 0.3;             // relative threshold, resolved to 1e-6
    std::size_t min_length = 3;   // ML
  };

  struct Bm25Filter
  {
    std::size_t limit = 100;      // L
  };

  using Filter = std::variant<NoFilter, NgmFilter, Bm25Filter>;

  struct EditRanker
  {
    EditCosts costs = EditCosts::led();
  };

  struct Bm25Ranker
  {
  };

  using Ranker = std::variant<EditRanker, Bm25Ranker>;

  struct RetrievalConfig
  {
    DomainPolicy domain_policy = DomainPolicy::all_domains;
    std::optional<std::string> query_domain;
    Filter filter = NgmFilter{};
    Ranker ranker = EditRanker{};
    std::optional<double> contrast;  // alpha
    std::size_t k = 3;

    /* throws ConfigError */
    void validate() const;
  };

  struct Candidate
  {
    Uid uid;
    double base_score;
    double adjusted_score;

    friend bool operator==(const Candidate&, const Candidate&) = default;
  };

  struct RetrievedSet
  {
    Sentence query;
    std::vector<Candidate> matches;
    bool exhausted = false;  // fewer than k matches
  };

  /* Survivors of the n-gram filter: longest shared n-gram g with
     |g| >= ML and |g| >= tau |q|, restricted to `universe`. Sorted by uid. */
  std::vector<NgramHit> ngm_filter(const SuffixArrayIndex& index,
                                   Tokens query,
                                   double tau,
                                   std::size_t min_length,
                                   const Universe& universe);

  /* Smallest n-gram length passing both NGM thresholds for a query of this length. */
  std::size_t ngm_required_length(std::size_t query_length, double tau, std::size_t min_length);

  /* Scores every candidate, sorted by (score desc, uid asc). */
  std::vector<Candidate> rank(const TranslationIndex& index,
                              const std::vector<Uid>& candidates,
                              Tokens query,
                              const Ranker& ranker);

  /* Greedy contrastive selection: after each pick, every remaining
     candidate's score is its base score minus alpha/|M| times the summed LED
     similarity of its source to the selected sources. */
  RetrievedSet contrastive_select(const std::vector<Candidate>& ranked,
                                  double alpha,
                                  std::size_t k,
                                  const TranslationMemory& memory);

  /* Candidate pool size for contrastive selection. */
  inline std::size_t contrast_pool_size(std::size_t k) { return 2 * std::max<std::size_t>(k, 20); }

  struct StageTimings
  {
    double domain_us = 0;
    double filter_us = 0;
    double rank_us = 0;
    double select_us = 0;

    StageTimings& operator+=(const StageTimings& o)
    {
      domain_us += o.domain_us;
      filter_us += o.filter_us;
      rank_us += o.rank_us;
      select_us += o.select_us;
      return *this;
    }
  };

  /* The full pipeline for one query. `exclude` drops one uid (leave-one-out
     retrieval over the memory itself). Never fails on an empty result. */
  RetrievedSet retrieve(const TranslationIndex& index,
                        const Sentence& query,
                        const RetrievalConfig& config,
                        std::optional<Uid> exclude = std::nullopt,
                        StageTimings* timings = nullptr);

  struct BatchQuery
  {
    Sentence query;
    std::optional<std::string> domain;  // overrides config.query_domain
    std::optional<Uid> exclude;
  };

  /* Runs queries on up to `threads` workers; results are in input order. */
  std::vector<RetrievedSet> retrieve_batch(const TranslationIndex& index,
                                           const std::vector<BatchQuery>& queries,
                                           const RetrievalConfig& config,
                                           std::size_t threads = 1,
                                           StageTimings* timings = nullptr);
}
