#include <tmr/pipeline.hh>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include <tmr/errors.hh>

namespace tmr
{
  DomainPolicy parse_domain_policy(std::string_view name)
  {
    if (name == "in" || name == "in_domain")
      return DomainPolicy::in_domain;
    if (name == "all" || name == "all_domains")
      return DomainPolicy::all_domains;
    if (name == "out" || name == "out_of_domain")
      return DomainPolicy::out_of_domain;
    throw ConfigError(fmt::format("unknown domain policy '{}'", name));
  }

  std::string_view to_string(DomainPolicy policy)
  {
    switch (policy)
    {
    case DomainPolicy::in_domain:
      return "in";
    case DomainPolicy::out_of_domain:
      return "out";
    default:
      return "all";
    }
  }

  std::vector<Uid> Universe::uids() const
  {
    std::vector<Uid> out;
    const auto n = static_cast<Uid>(_memory->size());
    if (is_everything())
    {
      out.resize(n);
      for (Uid u = 0; u < n; ++u)
        out[u] = u;
      return out;
    }
    for (Uid u = 0; u < n; ++u)
      if (contains(u))
        out.push_back(u);
    return out;
  }

  Universe select_domain(const TranslationMemory& memory,
                         DomainPolicy policy,
                         const std::optional<std::string>& query_domain)
  {
    if (policy == DomainPolicy::all_domains)
      return Universe(memory, policy);
    if (!query_domain)
      throw ConfigError(fmt::format("domain policy '{}' needs a query domain", to_string(policy)));
    const auto id = memory.find_domain(*query_domain);
    if (!id)
      throw ConfigError(fmt::format("unknown domain '{}'", *query_domain));
    return Universe(memory, policy, *id);
  }

  void RetrievalConfig::validate() const
  {
    if (k < 1)
      throw ConfigError("k must be >= 1");
    if (contrast && !(*contrast >= 0 && std::isfinite(*contrast)))
      throw ConfigError("contrast strength must be >= 0");
    if (const auto* ngm = std::get_if<NgmFilter>(&filter))
    {
      if (!(ngm->tau > 0 && ngm->tau <= 1))
        throw ConfigError(fmt::format("tau must be in (0, 1], got {}", ngm->tau));
      if (ngm->min_length < 1)
        throw ConfigError("ML must be >= 1");
    }
    if (const auto* bm25 = std::get_if<Bm25Filter>(&filter); bm25 && bm25->limit < 1)
      throw ConfigError("L must be >= 1");
    if (const auto* edit = std::get_if<EditRanker>(&ranker))
      edit->costs.validate();
    if (domain_policy != DomainPolicy::all_domains && !query_domain)
      throw ConfigError(fmt::format("domain policy '{}' needs a query domain", to_string(domain_policy)));
  }

  namespace
  {
    constexpr std::int64_t kTauResolution = 1000000;

    std::int64_t tau_units(double tau)
    {
      return static_cast<std::int64_t>(std::llround(tau * double(kTauResolution)));
    }

    bool candidate_order(const Candidate& a, const Candidate& b)
    {
      return a.base_score > b.base_score || (a.base_score == b.base_score && a.uid < b.uid);
    }

    using Clock = std::chrono::steady_clock;

    double elapsed_us(Clock::time_point since)
    {
      return std::chrono::duration<double, std::micro>(Clock::now() - since).count();
    }
  }

  std::size_t ngm_required_length(std::size_t query_length, double tau, std::size_t min_length)
  {
    // ceil(tau * |q|) with tau as an exact fraction of kTauResolution
    const auto num = tau_units(tau) * static_cast<std::int64_t>(query_length);
    const auto relative = static_cast<std::size_t>((num + kTauResolution - 1) / kTauResolution);
    return std::max(min_length, relative);
  }

  std::vector<NgramHit> ngm_filter(const SuffixArrayIndex& index,
                                   Tokens query,
                                   double tau,
                                   std::size_t min_length,
                                   const Universe& universe)
  {
    if (query.empty())
      return {};
    const auto required = ngm_required_length(query.size(), tau, min_length);
    auto hits = index.longest_common_ngram(query, required);
    if (!universe.is_everything())
      std::erase_if(hits, [&](const NgramHit& h) { return !universe.contains(h.uid); });
    return hits;
  }

  std::vector<Candidate> rank(const TranslationIndex& index,
                              const std::vector<Uid>& candidates,
                              Tokens query,
                              const Ranker& ranker)
  {
    std::vector<Candidate> ranked;
    ranked.reserve(candidates.size());
    if (const auto* edit = std::get_if<EditRanker>(&ranker))
    {
      for (Uid uid : candidates)
      {
        const double s = edit_distance(index.memory.unit(uid).source, query, edit->costs).similarity;
        ranked.push_back({uid, s, s});
      }
    }
    else
    {
      const auto scores = index.inverted.score_docs(query, candidates);
      for (std::size_t i = 0; i < candidates.size(); ++i)
        ranked.push_back({candidates[i], scores[i], scores[i]});
    }
    std::sort(ranked.begin(), ranked.end(), candidate_order);
    return ranked;
  }

  RetrievedSet contrastive_select(const std::vector<Candidate>& ranked,
                                  double alpha,
                                  std::size_t k,
                                  const TranslationMemory& memory)
  {
    RetrievedSet result;
    std::vector<Candidate> remaining = ranked;
    for (auto& c : remaining)
      c.adjusted_score = c.base_score;
    std::vector<double> penalty_sum(remaining.size(), 0.0);
    std::vector<bool> taken(remaining.size(), false);

    while (result.matches.size() < k)
    {
      std::size_t best = remaining.size();
      for (std::size_t i = 0; i < remaining.size(); ++i)
      {
        if (taken[i])
          continue;
        if (best == remaining.size()
            || remaining[i].adjusted_score > remaining[best].adjusted_score
            || (remaining[i].adjusted_score == remaining[best].adjusted_score
                && remaining[i].uid < remaining[best].uid))
          best = i;
      }
      if (best == remaining.size())
        break;
      taken[best] = true;
      result.matches.push_back(remaining[best]);
      if (result.matches.size() == k)
        break;

      const auto& selected = memory.unit(remaining[best].uid).source;
      const double selected_count = static_cast<double>(result.matches.size());
      for (std::size_t i = 0; i < remaining.size(); ++i)
      {
        if (taken[i])
          continue;
        if (alpha != 0)
          penalty_sum[i] += led_similarity(memory.unit(remaining[i].uid).source, selected);
        remaining[i].adjusted_score = remaining[i].base_score - alpha / selected_count * penalty_sum[i];
      }
    }
    result.exhausted = result.matches.size() < k;
    return result;
  }

  RetrievedSet retrieve(const TranslationIndex& index,
                        const Sentence& query,
                        const RetrievalConfig& config,
                        std::optional<Uid> exclude,
                        StageTimings* timings)
  {
    config.validate();
    StageTimings local;
    auto t0 = Clock::now();
    const Universe universe = select_domain(index.memory, config.domain_policy, config.query_domain);
    local.domain_us = elapsed_us(t0);

    t0 = Clock::now();
    std::vector<Uid> candidates;
    if (!query.empty())
    {
      if (const auto* ngm = std::get_if<NgmFilter>(&config.filter))
      {
        for (const auto& hit : ngm_filter(index.suffix_array, query, ngm->tau, ngm->min_length, universe))
          candidates.push_back(hit.uid);
      }
      else if (const auto* bm25 = std::get_if<Bm25Filter>(&config.filter))
      {
        std::function<bool(Uid)> accept;
        if (!universe.is_everything())
          accept = [&universe](Uid uid) { return universe.contains(uid); };
        for (const auto& s : index.inverted.bm25_candidates(query, bm25->limit, accept))
          candidates.push_back(s.uid);
        std::sort(candidates.begin(), candidates.end());
      }
      else
        candidates = universe.uids();
      if (exclude)
        std::erase(candidates, *exclude);
    }
    local.filter_us = elapsed_us(t0);

    t0 = Clock::now();
    auto ranked = rank(index, candidates, query, config.ranker);
    std::erase_if(ranked, [](const Candidate& c) { return !(c.base_score > 0); });
    local.rank_us = elapsed_us(t0);

    t0 = Clock::now();
    RetrievedSet result;
    if (config.contrast && *config.contrast > 0)
    {
      if (ranked.size() > contrast_pool_size(config.k))
        ranked.resize(contrast_pool_size(config.k));
      if (std::holds_alternative<Bm25Ranker>(config.ranker) && !ranked.empty())
      {
        // BM25 is unbounded; bring the pool to (0, 1] before mixing in LED penalties
        const double top = ranked.front().base_score;
        for (auto& c : ranked)
          c.base_score = c.adjusted_score = c.base_score / top;
      }
      result = contrastive_select(ranked, *config.contrast, config.k, index.memory);
    }
    else
    {
      if (ranked.size() > config.k)
        ranked.resize(config.k);
      result.matches = std::move(ranked);
      result.exhausted = result.matches.size() < config.k;
    }
    result.query = query;
    local.select_us = elapsed_us(t0);
    if (timings)
      *timings += local;
    return result;
  }

  std::vector<RetrievedSet> retrieve_batch(const TranslationIndex& index,
                                           const std::vector<BatchQuery>& queries,
                                           const RetrievalConfig& config,
                                           std::size_t threads,
                                           StageTimings* timings)
  {
    std::vector<RetrievalConfig> configs;
    configs.reserve(queries.size());
    for (const auto& q : queries)
    {
      RetrievalConfig c = config;
      if (q.domain)
        c.query_domain = q.domain;
      c.validate();
      select_domain(index.memory, c.domain_policy, c.query_domain);  // report config errors up front
      configs.push_back(std::move(c));
    }

    std::vector<RetrievedSet> results(queries.size());
    std::vector<StageTimings> stage(queries.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < queries.size();)
      {
        try
        {
          results[i] = retrieve(index, queries[i].query, configs[i], queries[i].exclude, &stage[i]);
        }
        catch (...)
        {
          std::lock_guard lock(failure_mutex);
          if (!failure)
            failure = std::current_exception();
        }
      }
    };

    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, queries.size()));
    if (threads == 1)
      work();
    else
    {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back(work);
    }
    if (failure)
      std::rethrow_exception(failure);
    if (timings)
      for (const auto& s : stage)
        *timings += s;
    return results;
  }
}
