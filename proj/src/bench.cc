#include <tmr/bench.hh>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

#include <tmr/errors.hh>

namespace tmr::bench
{
  void SyntheticSpec::validate() const
  {
    if (vocabulary < 2)
      throw ConfigError("vocabulary must hold at least 2 words");
    if (!(mean_length >= 4))
      throw ConfigError("mean length must be >= 4");
    if (!(repetition >= 0 && repetition <= 1))
      throw ConfigError("repetition must be in [0, 1]");
    if (!(variation >= 0 && variation <= 1))
      throw ConfigError("variation must be in [0, 1]");
    if (domains < 1)
      throw ConfigError("need at least one domain");
  }

  std::string reverse_word(std::string_view word)
  {
    return std::string(word.rbegin(), word.rend());
  }

  TranslationMemory generate_corpus(const SyntheticSpec& spec)
  {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::uint32_t> word(0, static_cast<std::uint32_t>(spec.vocabulary - 1));
    std::uniform_int_distribution<std::size_t> domain(0, spec.domains - 1);
    const auto min_len = std::max<std::size_t>(4, static_cast<std::size_t>(std::lround(spec.mean_length * 0.5)));
    const auto max_len = std::max<std::size_t>(min_len, static_cast<std::size_t>(std::lround(spec.mean_length * 1.5)));
    std::uniform_int_distribution<std::size_t> length(min_len, max_len);

    std::vector<std::string> surfaces(spec.vocabulary);
    std::vector<std::string> reversed(spec.vocabulary);
    for (std::size_t w = 0; w < spec.vocabulary; ++w)
    {
      surfaces[w] = fmt::format("w{}", w);
      reversed[w] = reverse_word(surfaces[w]);
    }
    std::vector<std::string> domain_names;
    for (std::size_t d = 0; d < spec.domains; ++d)
      domain_names.push_back(fmt::format("d{}", d));

    TranslationMemory memory;
    std::vector<std::vector<std::uint32_t>> generated;
    std::vector<std::size_t> generated_domain;
    generated.reserve(spec.size);
    generated_domain.reserve(spec.size);
    std::vector<std::string> source, target;

    for (std::size_t i = 0; i < spec.size; ++i)
    {
      std::vector<std::uint32_t> tokens;
      std::size_t dom;
      if (i > 0 && coin(rng) < spec.repetition)
      {
        const auto parent = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
        tokens = generated[parent];
        dom = generated_domain[parent];
        if (coin(rng) < spec.variation)
        {
          const auto max_edits = std::max<std::size_t>(1, tokens.size() / 4);
          const auto edits = std::uniform_int_distribution<std::size_t>(1, max_edits)(rng);
          for (std::size_t e = 0; e < edits; ++e)
          {
            const auto pos = std::uniform_int_distribution<std::size_t>(0, tokens.size() - 1)(rng);
            tokens[pos] = word(rng);
          }
        }
      }
      else
      {
        tokens.resize(length(rng));
        for (auto& t : tokens)
          t = word(rng);
        dom = domain(rng);
      }

      source.clear();
      target.clear();
      for (auto t : tokens)
      {
        source.push_back(surfaces[t]);
        target.push_back(reversed[t]);
      }
      memory.add_tokens(source, target, domain_names[dom]);
      generated.push_back(std::move(tokens));
      generated_domain.push_back(dom);
    }
    memory.freeze();
    return memory;
  }

  std::vector<QueryText> generate_query_texts(const TranslationMemory& memory,
                                              std::size_t count,
                                              std::uint64_t seed,
                                              std::size_t pool)
  {
    std::vector<QueryText> queries;
    if (memory.size() == 0)
      return queries;
    if (pool == 0 || pool > memory.size())
      pool = memory.size();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, pool - 1);
    const auto& vocab = memory.source_vocab();
    std::uniform_int_distribution<TokenId> word(1, static_cast<TokenId>(std::max<std::size_t>(2, vocab.size()) - 1));
    for (std::size_t q = 0; q < count; ++q)
    {
      const auto& unit = memory.unit(static_cast<Uid>(pick(rng)));
      std::vector<TokenId> tokens = unit.source.tokens;
      const auto max_edits = std::min<std::size_t>(3, std::max<std::size_t>(1, tokens.size() / 4));
      const auto edits = std::uniform_int_distribution<std::size_t>(1, max_edits)(rng);
      for (std::size_t e = 0; e < edits; ++e)
      {
        const auto pos = std::uniform_int_distribution<std::size_t>(0, tokens.size() - 1)(rng);
        tokens[pos] = word(rng);
      }
      queries.push_back({vocab.decode(tokens), memory.domain_name(unit)});
    }
    return queries;
  }

  std::vector<BatchQuery> generate_queries(const TranslationMemory& memory,
                                           std::size_t count,
                                           std::uint64_t seed,
                                           std::size_t pool)
  {
    std::vector<BatchQuery> queries;
    for (auto& q : generate_query_texts(memory, count, seed, pool))
      queries.push_back({memory.encode_query(q.text), q.domain, std::nullopt});
    return queries;
  }

  NamedConfig parse_strategy(std::string_view name,
                             std::size_t k,
                             double tau,
                             std::size_t ml,
                             std::size_t limit,
                             double delta,
                             double alpha)
  {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= name.size())
    {
      const auto plus = name.find('+', start);
      const auto end = plus == std::string_view::npos ? name.size() : plus;
      parts.emplace_back(name.substr(start, end - start));
      start = end + 1;
    }
    if (parts.size() < 2 || parts.size() > 3 || (parts.size() == 3 && parts[2] != "c"))
      throw ConfigError(fmt::format("bad strategy '{}' (expected <filter>+<ranker>[+c])", name));

    NamedConfig named;
    named.name = std::string(name);
    auto& config = named.config;
    config.k = k;
    if (parts[0] == "ngm")
      config.filter = NgmFilter{tau, ml};
    else if (parts[0] == "bm25")
      config.filter = Bm25Filter{limit};
    else if (parts[0] == "none")
      config.filter = NoFilter{};
    else
      throw ConfigError(fmt::format("unknown filter '{}'", parts[0]));

    if (parts[1] == "led")
      config.ranker = EditRanker{EditCosts::led()};
    else if (parts[1] == "lcs")
      config.ranker = EditRanker{EditCosts::lcs()};
    else if (parts[1] == "dlcs")
      config.ranker = EditRanker{EditCosts::delta_lcs(delta)};
    else if (parts[1] == "bm25")
      config.ranker = Bm25Ranker{};
    else
      throw ConfigError(fmt::format("unknown ranker '{}'", parts[1]));

    if (parts.size() == 3)
      config.contrast = alpha;
    config.validate();
    return named;
  }

  static std::size_t nearest_rank(const std::vector<std::size_t>& sorted, double q)
  {
    if (sorted.empty())
      return 0;
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
  }

  std::vector<Quartiles> ngm_survivor_quartiles(const TranslationIndex& index,
                                                const std::vector<BatchQuery>& queries,
                                                const std::vector<double>& taus,
                                                std::size_t ml)
  {
    const Universe everything(index.memory, DomainPolicy::all_domains);
    std::vector<Quartiles> out;
    for (double tau : taus)
    {
      std::vector<std::size_t> counts;
      for (const auto& q : queries)
        counts.push_back(ngm_filter(index.suffix_array, q.query, tau, ml, everything).size());
      std::sort(counts.begin(), counts.end());
      out.push_back({tau, nearest_rank(counts, 0.25), nearest_rank(counts, 0.5), nearest_rank(counts, 0.75)});
    }
    return out;
  }

  Comparison compare_strategies(const TranslationIndex& index,
                                const std::vector<BatchQuery>& queries,
                                const std::vector<NamedConfig>& configs,
                                const std::vector<double>& taus)
  {
    Comparison comparison;
    for (const auto& named : configs)
    {
      const auto results = retrieve_batch(index, queries, named.config, 1);
      std::map<std::string, std::vector<QueryQuality>> by_domain;
      for (std::size_t i = 0; i < queries.size(); ++i)
      {
        std::vector<Tokens> examples;
        for (const auto& m : results[i].matches)
          examples.emplace_back(index.memory.unit(m.uid).source.tokens);
        by_domain[queries[i].domain.value_or("")].push_back(evaluate_query(queries[i].query, examples));
      }
      std::map<std::string, QualityReport> reports;
      for (auto& [domain, per_query] : by_domain)
        reports[domain] = summarize(std::move(per_query));
      comparison.rows.push_back({named.name, macro_average(reports)});
    }
    comparison.ngm_quartiles = ngm_survivor_quartiles(index, queries, taus);
    return comparison;
  }

  std::string to_table(const Comparison& comparison)
  {
    std::string out = fmt::format("{:<16} {:>9} {:>9} {:>9} {:>9} {:>8}\n",
                                  "strategy", "cov.bow", "cov.mod", "rel.bow", "rel.mod", "length");
    for (const auto& row : comparison.rows)
      out += fmt::format("{:<16} {:>9.1f} {:>9.1f} {:>9.1f} {:>9.1f} {:>8.1f}\n", row.name,
                         100 * row.report.coverage.bag_of_words, 100 * row.report.coverage.modified,
                         100 * row.report.relevance.bag_of_words, 100 * row.report.relevance.modified,
                         row.report.mean_example_length);
    out += fmt::format("\n{:<8} {:>8} {:>8} {:>8}\n", "tau", "Q1", "Q2", "Q3");
    for (const auto& q : comparison.ngm_quartiles)
      out += fmt::format("{:<8.2f} {:>8} {:>8} {:>8}\n", q.tau, q.q1, q.q2, q.q3);
    return out;
  }

  std::string to_json(const Comparison& comparison)
  {
    nlohmann::ordered_json j;
    j["strategies"] = nlohmann::ordered_json::array();
    for (const auto& row : comparison.rows)
      j["strategies"].push_back({{"name", row.name},
                                 {"coverage_bow", row.report.coverage.bag_of_words},
                                 {"coverage_modified", row.report.coverage.modified},
                                 {"relevance_bow", row.report.relevance.bag_of_words},
                                 {"relevance_modified", row.report.relevance.modified},
                                 {"mean_length", row.report.mean_example_length},
                                 {"n_queries", row.report.n_queries}});
    j["ngm_quartiles"] = nlohmann::ordered_json::array();
    for (const auto& q : comparison.ngm_quartiles)
      j["ngm_quartiles"].push_back({{"tau", q.tau}, {"q1", q.q1}, {"q2", q.q2}, {"q3", q.q3}});
    return j.dump(2);
  }

  double loglog_slope(const std::vector<std::size_t>& sizes, const std::vector<double>& values)
  {
    const std::size_t n = std::min(sizes.size(), values.size());
    if (n < 2)
      return 0;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
      mx += std::log(static_cast<double>(sizes[i]));
      my += std::log(std::max(values[i], 1e-3));
    }
    mx /= double(n);
    my /= double(n);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
      const double dx = std::log(static_cast<double>(sizes[i])) - mx;
      sxy += dx * (std::log(std::max(values[i], 1e-3)) - my);
      sxx += dx * dx;
    }
    return sxx == 0 ? 0 : sxy / sxx;
  }

  namespace
  {
    using Clock = std::chrono::steady_clock;

    double median(std::vector<double> v)
    {
      if (v.empty())
        return 0;
      std::sort(v.begin(), v.end());
      const auto mid = v.size() / 2;
      return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
    }

    template <typename F>
    double time_us(F&& f, std::size_t repeats)
    {
      const auto start = Clock::now();
      for (std::size_t r = 0; r < repeats; ++r)
        f();
      return std::chrono::duration<double, std::micro>(Clock::now() - start).count() / double(repeats);
    }

    // keeps results observable so the timed work is not optimized away
    volatile std::size_t sink = 0;
  }

  TimingReport timing_sweep(const std::vector<std::size_t>& sizes,
                            SyntheticSpec spec,
                            const TimingOptions& options)
  {
    const auto sweep_start = Clock::now();
    TimingReport report;
    report.sizes = sizes;
    StageTiming ngm{"ngm", {}, 0}, bm25{"bm25", {}, 0}, ed{"ed", {}, 0};
    std::vector<QueryText> texts;

    for (std::size_t s = 0; s < sizes.size(); ++s)
    {
      spec.size = sizes[s];
      auto index = TranslationIndex::build(generate_corpus(spec));
      // generation is prefix-stable, so queries drawn from the smallest corpus exist in all of them
      if (texts.empty())
        texts = generate_query_texts(index.memory, options.queries, spec.seed + 7, sizes.front());
      std::vector<Sentence> queries;
      for (const auto& t : texts)
        queries.push_back(index.memory.encode_query(t.text));

      const Universe everything(index.memory, DomainPolicy::all_domains);
      const auto all_uids = everything.uids();

      std::vector<double> ngm_us, bm25_us, ed_us;
      for (const auto& q : queries)
      {
        ngm_us.push_back(time_us([&] { sink = sink + ngm_filter(index.suffix_array, q, 0.3, 3, everything).size(); },
                                 options.ngm_repeats));
        bm25_us.push_back(time_us([&] { sink = sink + index.inverted.bm25_candidates(q, 100).size(); },
                                  options.bm25_repeats));
      }
      for (std::size_t i = 0; i < std::min(options.ed_queries, queries.size()); ++i)
        ed_us.push_back(time_us([&] { sink = sink + rank(index, all_uids, queries[i], EditRanker{}).size(); }, 1));
      ngm.median_us.push_back(median(ngm_us));
      bm25.median_us.push_back(median(bm25_us));
      ed.median_us.push_back(median(ed_us));

      if (s + 1 == sizes.size())
      {
        std::vector<double> doubled_us;
        for (std::size_t i = 0; i < std::min(options.ed_queries, queries.size()); ++i)
        {
          Sentence doubled = queries[i];
          const auto& other = queries[(i + 1) % queries.size()];
          doubled.tokens.insert(doubled.tokens.end(), other.tokens.begin(), other.tokens.end());
          doubled_us.push_back(time_us([&] { sink = sink + rank(index, all_uids, doubled, EditRanker{}).size(); }, 1));
        }
        // compare against the plain queries that were doubled, each paired with its own base time
        std::vector<double> ratios;
        for (std::size_t i = 0; i < doubled_us.size(); ++i)
          ratios.push_back(doubled_us[i] / ed_us[i]);
        report.ed_query_doubling_ratio = median(ratios);
      }
    }

    for (auto* stage : {&ngm, &bm25, &ed})
    {
      stage->exponent = loglog_slope(sizes, stage->median_us);
      report.stages.push_back(*stage);
    }
    report.total_seconds = std::chrono::duration<double>(Clock::now() - sweep_start).count();
    return report;
  }

  std::string to_table(const TimingReport& report)
  {
    std::string out = fmt::format("{:<8}", "stage");
    for (auto n : report.sizes)
      out += fmt::format(" {:>14}", fmt::format("n={}", n));
    out += fmt::format(" {:>9}\n", "exponent");
    for (const auto& stage : report.stages)
    {
      out += fmt::format("{:<8}", stage.stage);
      for (double us : stage.median_us)
        out += fmt::format(" {:>12.1f}us", us);
      out += fmt::format(" {:>9.3f}\n", stage.exponent);
    }
    out += fmt::format("ED time ratio for doubled query length: {:.2f}\n", report.ed_query_doubling_ratio);
    return out;
  }

  std::string to_json(const TimingReport& report)
  {
    nlohmann::ordered_json j;
    j["sizes"] = report.sizes;
    j["stages"] = nlohmann::ordered_json::array();
    for (const auto& stage : report.stages)
      j["stages"].push_back({{"stage", stage.stage}, {"median_us", stage.median_us}, {"exponent", stage.exponent}});
    j["ed_query_doubling_ratio"] = report.ed_query_doubling_ratio;
    j["total_seconds"] = report.total_seconds;
    return j.dump(2);
  }

  std::map<std::string, std::string> parse_config(std::string_view text)
  {
    std::map<std::string, std::string> values;
    std::size_t line_no = 0;
    std::size_t start = 0;
    auto trim = [](std::string_view s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string_view::npos)
        return std::string_view{};
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    while (start <= text.size())
    {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos)
        end = text.size();
      ++line_no;
      auto line = text.substr(start, end - start);
      start = end + 1;
      if (const auto hash = line.find('#'); hash != std::string_view::npos)
        line = line.substr(0, hash);
      line = trim(line);
      if (line.empty())
        continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw ConfigError(fmt::format("config line {}: expected key = value", line_no));
      values[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
    }
    return values;
  }
}
