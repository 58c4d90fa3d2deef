#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <tmr/bleu.hh>
#include <tmr/density.hh>
#include <tmr/errors.hh>
#include <tmr/index.hh>
#include <tmr/match_io.hh>
#include <tmr/metrics.hh>
#include <tmr/pipeline.hh>
#include <tmr/prompts.hh>

namespace
{
  using namespace tmr;

  constexpr int kExitInput = 2;
  constexpr int kExitFormat = 3;

  std::size_t thread_budget()
  {
    std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TMR_THREADS"))
    {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || v < 1)
        throw ConfigError(fmt::format("TMR_THREADS must be a positive integer, got '{}'", env));
      return std::size_t(v);
    }
    return hw;
  }

  struct TokenizerFlags
  {
    std::string mode = "whitespace";
    bool lowercase = false;

    TokenizerOptions options() const { return {parse_tokenizer_mode(mode), lowercase}; }
  };

  void add_tokenizer_flags(CLI::App* cmd, TokenizerFlags& flags)
  {
    cmd->add_option("--tokenizer", flags.mode, "whitespace | punct")->capture_default_str();
    cmd->add_flag("--lowercase", flags.lowercase, "ASCII-lowercase all text");
  }

  std::vector<std::string> split_tab(const std::string& line)
  {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1)
      fields.push_back(line.substr(start, tab - start));
    fields.push_back(line.substr(start));
    return fields;
  }

  // ---- build

  struct BuildArgs
  {
    std::vector<std::string> sources;
    std::vector<std::string> targets;
    std::vector<std::string> domains;
    std::vector<std::string> tsvs;
    std::vector<std::string> tsv_domains;
    std::string output;
    double p = 2.0;
    TokenizerFlags tokenizer;
  };

  int run_build(const BuildArgs& args)
  {
    if (args.sources.size() != args.targets.size())
      throw ConfigError("--source and --target must be given the same number of times");
    if (!args.domains.empty() && args.domains.size() != args.sources.size())
      throw ConfigError("--domain must be given once per --source, or not at all");
    if (!args.tsv_domains.empty() && args.tsv_domains.size() != args.tsvs.size())
      throw ConfigError("--tsv-domain must be given once per --tsv, or not at all");
    if (args.sources.empty() && args.tsvs.empty())
      throw ConfigError("no corpus given");

    TranslationMemory memory(args.tokenizer.options());
    LoadReport total;
    auto add = [&](const LoadReport& r) {
      total.added += r.added;
      total.skipped += r.skipped;
      total.lines += r.lines;
    };
    for (std::size_t i = 0; i < args.sources.size(); ++i)
      add(load_corpus(memory, args.sources[i], args.targets[i],
                      args.domains.empty() ? "default" : args.domains[i]));
    for (std::size_t i = 0; i < args.tsvs.size(); ++i)
      add(load_tsv(memory, args.tsvs[i], args.tsv_domains.empty() ? "default" : args.tsv_domains[i]));

    auto index = TranslationIndex::build(std::move(memory), args.p);
    save_index(index, args.output);

    const auto& m = index.memory;
    fmt::print("size\t{}\n", m.size());
    fmt::print("skipped\t{}\n", total.skipped);
    fmt::print("domains\t{}\n", m.domains().size());
    fmt::print("mean_source_length\t{:.2f}\n", m.mean_source_length());
    fmt::print("mean_target_length\t{:.2f}\n", m.mean_target_length());
    fmt::print("pruned_terms\t{}\n", index.inverted.pruned_terms().size());
    return 0;
  }

  // ---- retrieve

  struct RetrieveArgs
  {
    std::string index;
    std::string queries;
    std::optional<std::string> query_domain;
    std::string domain_policy = "all";
    std::string filter = "ngm";
    double tau = 0.3;
    std::size_t ml = 3;
    std::size_t limit = 100;
    std::string ranker = "led";
    double delta = 0.1;
    std::optional<double> contrast;
    std::size_t k = 3;
    std::string format = "jsonl";
    bool exclude_self = false;
    bool timing = false;
  };

  RetrievalConfig make_config(const RetrieveArgs& args)
  {
    RetrievalConfig config;
    config.domain_policy = parse_domain_policy(args.domain_policy);
    config.query_domain = args.query_domain;
    if (args.filter == "none")
      config.filter = NoFilter{};
    else if (args.filter == "ngm")
      config.filter = NgmFilter{args.tau, args.ml};
    else if (args.filter == "bm25")
      config.filter = Bm25Filter{args.limit};
    else
      throw ConfigError(fmt::format("unknown filter '{}'", args.filter));

    if (args.ranker == "led")
      config.ranker = EditRanker{EditCosts::led()};
    else if (args.ranker == "lcs")
      config.ranker = EditRanker{EditCosts::lcs()};
    else if (args.ranker == "dlcs")
      config.ranker = EditRanker{EditCosts::delta_lcs(args.delta)};
    else if (args.ranker == "bm25")
      config.ranker = Bm25Ranker{};
    else
      throw ConfigError(fmt::format("unknown ranker '{}'", args.ranker));

    config.contrast = args.contrast;
    config.k = args.k;
    // the query domain may come per line; retrieve_batch checks it per query
    auto probe = config;
    probe.domain_policy = DomainPolicy::all_domains;
    probe.validate();
    return config;
  }

  int run_retrieve(const RetrieveArgs& args)
  {
    if (args.format != "jsonl" && args.format != "tsv")
      throw ConfigError(fmt::format("unknown format '{}'", args.format));
    auto config = make_config(args);
    auto index = load_index(args.index);

    std::vector<BatchQuery> batch;
    std::vector<std::string> texts;
    std::vector<std::optional<std::string>> domains;
    auto lines = read_lines(args.queries);
    for (std::size_t i = 0; i < lines.size(); ++i)
    {
      auto fields = split_tab(lines[i]);
      if (fields.size() > 2)
        throw IngestionError(fmt::format("{}:{}: expected 'query' or 'query<TAB>domain'", args.queries, i + 1));
      std::optional<std::string> domain = args.query_domain;
      if (fields.size() == 2)
        domain = fields[1];
      Sentence query;
      try
      {
        query = index.memory.encode_query(fields[0]);
      }
      catch (const IngestionError& e)
      {
        throw IngestionError(fmt::format("{}:{}: {}", args.queries, i + 1, e.what()));
      }
      std::optional<Uid> exclude;
      if (args.exclude_self)
        exclude = static_cast<Uid>(i);
      batch.push_back({std::move(query), domain, exclude});
      texts.push_back(std::move(fields[0]));
      domains.push_back(std::move(domain));
    }

    StageTimings timings;
    auto results = retrieve_batch(index, batch, config, thread_budget(), &timings);

    std::string out;
    if (args.format == "tsv")
      out += std::string(kTsvHeader) + "\n";
    for (std::size_t i = 0; i < results.size(); ++i)
    {
      auto record = make_record(index, results[i], texts[i], domains[i]);
      if (args.format == "jsonl")
        out += to_jsonl(record) + "\n";
      else
        out += to_tsv(record, i);
    }
    std::cout << out << std::flush;

    if (args.timing)
    {
      double n = std::max<std::size_t>(1, results.size());
      fmt::print(stderr, "timing queries={} domain_us={:.1f} filter_us={:.1f} rank_us={:.1f} select_us={:.1f}\n",
                 results.size(), timings.domain_us / n, timings.filter_us / n,
                 timings.rank_us / n, timings.select_us / n);
    }
    return 0;
  }

  // ---- metrics

  struct MetricsArgs
  {
    std::string matches;
    std::optional<std::string> queries;
    std::optional<std::string> hyps;
    std::string format = "table";
    TokenizerFlags tokenizer;
  };

  std::vector<MatchRecord> load_records(const std::string& path)
  {
    std::ifstream in(path);
    if (!in)
      throw IngestionError(fmt::format("cannot open '{}'", path));
    try
    {
      return read_records(in);
    }
    catch (const IngestionError& e)
    {
      throw IngestionError(fmt::format("{}:{}", path, e.what()));
    }
  }

  nlohmann::ordered_json report_json(const QualityReport& r)
  {
    nlohmann::ordered_json j;
    j["n_queries"] = r.n_queries;
    j["coverage"] = {{"bag_of_words", r.coverage.bag_of_words}, {"modified", r.coverage.modified}};
    j["relevance"] = {{"bag_of_words", r.relevance.bag_of_words}, {"modified", r.relevance.modified}};
    j["mean_example_length"] = r.mean_example_length;
    j["copy_rate"] = r.copy_rate ? nlohmann::ordered_json(*r.copy_rate) : nlohmann::ordered_json();
    return j;
  }

  std::string report_row(std::string_view name, const QualityReport& r)
  {
    return fmt::format("{:<16} {:>8} {:>9.2f} {:>9.2f} {:>9.2f} {:>9.2f} {:>8.2f} {:>9}\n",
                       name, r.n_queries,
                       100 * r.coverage.bag_of_words, 100 * r.coverage.modified,
                       100 * r.relevance.bag_of_words, 100 * r.relevance.modified,
                       r.mean_example_length,
                       r.copy_rate ? fmt::format("{:.2f}", *r.copy_rate) : "-");
  }

  int run_metrics(const MetricsArgs& args)
  {
    if (args.format != "table" && args.format != "json")
      throw ConfigError(fmt::format("unknown format '{}'", args.format));
    auto records = load_records(args.matches);
    auto options = args.tokenizer.options();

    if (args.queries)
    {
      auto lines = read_lines(*args.queries);
      if (lines.size() != records.size())
        throw IngestionError(fmt::format("'{}' has {} queries but '{}' has {} records",
                                         *args.queries, lines.size(), args.matches, records.size()));
      for (std::size_t i = 0; i < lines.size(); ++i)
        if (split_tab(lines[i])[0] != records[i].query)
          throw IngestionError(fmt::format("record {} is for a different query than line {} of '{}'",
                                           i + 1, i + 1, *args.queries));
    }
    std::vector<std::string> hyps;
    if (args.hyps)
    {
      hyps = read_lines(*args.hyps);
      if (hyps.size() != records.size())
        throw IngestionError(fmt::format("'{}' has {} lines but '{}' has {} records",
                                         *args.hyps, hyps.size(), args.matches, records.size()));
    }

    Vocabulary vocab;
    auto encode = [&](const std::string& text) { return vocab.encode(tokenize(text, options)); };

    std::map<std::string, std::vector<QueryQuality>> by_domain;
    std::vector<QueryQuality> all;
    bool any_domain = false;
    for (std::size_t i = 0; i < records.size(); ++i)
    {
      const auto& record = records[i];
      Sentence query = encode(record.query);
      std::vector<Sentence> sources;
      std::vector<Sentence> targets;
      for (const auto& m : record.matches)
      {
        sources.push_back(encode(m.source));
        targets.push_back(encode(m.target));
      }
      auto quality = evaluate_query(query, std::vector<Tokens>(sources.begin(), sources.end()));
      if (args.hyps)
        quality.copy_rate = copy_rate(encode(hyps[i]), std::vector<Tokens>(targets.begin(), targets.end()));
      any_domain = any_domain || record.domain.has_value();
      by_domain[record.domain.value_or("")].push_back(quality);
      all.push_back(std::move(quality));
    }

    std::map<std::string, QualityReport> reports;
    for (auto& [domain, queries] : by_domain)
      reports[domain] = summarize(queries);
    QualityReport overall = any_domain ? macro_average(reports) : summarize(all);

    if (args.format == "json")
    {
      nlohmann::ordered_json j = report_json(overall);
      if (any_domain)
        for (const auto& [domain, report] : reports)
          j["domains"][domain] = report_json(report);
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    std::string out = fmt::format("{:<16} {:>8} {:>9} {:>9} {:>9} {:>9} {:>8} {:>9}\n",
                                  "domain", "queries", "cov.bow", "cov.mod", "rel.bow", "rel.mod",
                                  "length", "copy");
    if (any_domain)
      for (const auto& [domain, report] : reports)
        out += report_row(domain.empty() ? "(none)" : domain, report);
    out += report_row(any_domain ? "macro-average" : "all", overall);
    std::cout << out;
    return 0;
  }

  // ---- prompts

  struct PromptArgs
  {
    std::string matches;
    std::size_t shots = 1;
    PromptTags tags;
    std::string format = "text";
  };

  int run_prompts(const PromptArgs& args)
  {
    if (args.format != "text" && args.format != "jsonl")
      throw ConfigError(fmt::format("unknown format '{}'", args.format));
    auto records = load_records(args.matches);

    std::string out;
    for (std::size_t i = 0; i < records.size(); ++i)
    {
      std::vector<std::pair<std::string, std::string>> examples;
      for (const auto& m : records[i].matches)
        examples.emplace_back(m.source, m.target);
      auto prompt = render_prompt(examples, records[i].query, args.shots, args.tags);
      if (args.format == "jsonl")
      {
        nlohmann::ordered_json j;
        j["query"] = records[i].query;
        j["prompt"] = prompt.text;
        j["shots"] = prompt.shots;
        j["complete"] = prompt.complete;
        out += j.dump() + "\n";
      }
      else
      {
        if (!prompt.complete)
          fmt::print(stderr, "record {}: {} of {} examples available\n", i + 1, prompt.shots, args.shots);
        out += prompt.text + "\n\n";
      }
    }
    std::cout << out;
    return 0;
  }

  // ---- density

  struct DensityArgs
  {
    std::optional<std::string> index;
    std::optional<std::string> source;
    double threshold = 0.4;
    std::string mode = "auto";
    std::size_t ml = 3;
    TokenizerFlags tokenizer;
  };

  int run_density(const DensityArgs& args)
  {
    if (args.index.has_value() == args.source.has_value())
      throw ConfigError("give exactly one of --index and --source");
    auto mode = parse_density_mode(args.mode);

    std::vector<Sentence> owned;
    std::optional<TranslationIndex> index;
    std::vector<Tokens> sentences;
    if (args.index)
    {
      index = load_index(*args.index);
      for (const auto& unit : index->memory.units())
        sentences.push_back(unit.source);
    }
    else
    {
      Vocabulary vocab;
      auto lines = read_lines(*args.source);
      auto options = args.tokenizer.options();
      for (std::size_t i = 0; i < lines.size(); ++i)
      {
        try
        {
          Sentence s = vocab.encode(tokenize(lines[i], options));
          if (!s.empty())
            owned.push_back(std::move(s));
        }
        catch (const IngestionError& e)
        {
          throw IngestionError(fmt::format("{}:{}: {}", *args.source, i + 1, e.what()));
        }
      }
      sentences.assign(owned.begin(), owned.end());
    }

    auto r = density(sentences, args.threshold, mode, args.ml);
    fmt::print("ncc\t{}\n", r.ncc);
    fmt::print("size\t{}\n", r.corpus_size);
    fmt::print("density\t{:.2f}\n", 100 * r.density);
    fmt::print("threshold\t{}\n", r.threshold);
    fmt::print("mode\t{}\n", r.approximate ? "ngm-prefiltered" : "exact");
    if (r.degenerate)
      fmt::print("note\tfewer than 2 sentences, density defined as 1\n");
    return 0;
  }
}

int main(int argc, char** argv)
{
  CLI::App app{"Translation memory fuzzy-match retrieval"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Index a parallel corpus");
  b->add_option("--source", build.sources, "source side, one sentence per line (repeatable)");
  b->add_option("--target", build.targets, "target side aligned with --source (repeatable)");
  b->add_option("--domain", build.domains, "domain label per --source pair (repeatable)");
  b->add_option("--tsv", build.tsvs, "source<TAB>target file (repeatable)");
  b->add_option("--tsv-domain", build.tsv_domains, "domain label per --tsv file (repeatable)");
  b->add_option("-o,--output", build.output, "index file")->required();
  b->add_option("--p", build.p, "prune terms occurring in more than p% of segments")->capture_default_str();
  add_tokenizer_flags(b, build.tokenizer);

  RetrieveArgs retrieve;
  auto* r = app.add_subcommand("retrieve", "Retrieve fuzzy matches for a batch of queries");
  r->add_option("--index", retrieve.index, "index file")->required();
  r->add_option("--queries", retrieve.queries, "one query per line, optionally query<TAB>domain")->required();
  r->add_option("--query-domain", retrieve.query_domain, "domain of every query without its own label");
  r->add_option("--domain-policy", retrieve.domain_policy, "in | all | out")->capture_default_str();
  r->add_option("--filter", retrieve.filter, "none | ngm | bm25")->capture_default_str();
  r->add_option("--tau", retrieve.tau, "NGM relative threshold")->capture_default_str();
  r->add_option("--ml", retrieve.ml, "NGM minimal n-gram length")->capture_default_str();
  r->add_option("--L", retrieve.limit, "BM25 filter size")->capture_default_str();
  r->add_option("--ranker", retrieve.ranker, "led | lcs | dlcs | bm25")->capture_default_str();
  r->add_option("--delta", retrieve.delta, "deletion cost of dlcs")->capture_default_str();
  r->add_option("--contrast", retrieve.contrast, "contrastive selection strength alpha (0.3 in the usual setting)");
  r->add_option("--k", retrieve.k, "matches per query")->capture_default_str();
  r->add_option("--format", retrieve.format, "jsonl | tsv")->capture_default_str();
  r->add_flag("--exclude-self", retrieve.exclude_self,
              "query line i never retrieves uid i (leave-one-out over the memory's own sources)");
  r->add_flag("--timing", retrieve.timing, "print mean per-stage microseconds to stderr");

  MetricsArgs metrics;
  auto* m = app.add_subcommand("metrics", "Coverage, relevance and length of retrieved matches");
  m->add_option("--matches", metrics.matches, "retrieve output (jsonl)")->required();
  m->add_option("--queries", metrics.queries, "query file the matches were retrieved for");
  m->add_option("--hyps", metrics.hyps, "hypotheses, one per query, for copy rate");
  m->add_option("--format", metrics.format, "table | json")->capture_default_str();
  add_tokenizer_flags(m, metrics.tokenizer);

  PromptArgs prompts;
  auto* p = app.add_subcommand("prompts", "Few-shot prompts from retrieved matches");
  p->add_option("--matches", prompts.matches, "retrieve output (jsonl)")->required();
  p->add_option("--shots", prompts.shots, "examples per prompt")->capture_default_str();
  p->add_option("--src-tag", prompts.tags.source, "source language tag")->capture_default_str();
  p->add_option("--trg-tag", prompts.tags.target, "target language tag")->capture_default_str();
  p->add_option("--format", prompts.format, "text | jsonl")->capture_default_str();

  DensityArgs dens;
  auto* d = app.add_subcommand("density", "Repetitiveness of a corpus");
  d->add_option("--index", dens.index, "index file");
  d->add_option("--source", dens.source, "one sentence per line");
  d->add_option("--threshold", dens.threshold, "LED similarity above which sentences are linked")->capture_default_str();
  d->add_option("--mode", dens.mode, "exact | ngm | auto")->capture_default_str();
  d->add_option("--ml", dens.ml, "n-gram length of the prefilter")->capture_default_str();
  add_tokenizer_flags(d, dens.tokenizer);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try
  {
    if (*b)
      return run_build(build);
    if (*r)
      return run_retrieve(retrieve);
    if (*m)
      return run_metrics(metrics);
    if (*p)
      return run_prompts(prompts);
    return run_density(dens);
  }
  catch (const IndexFormatError& e)
  {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitFormat;
  }
  catch (const IngestionError& e)
  {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitInput;
  }
  catch (const ConfigError& e)
  {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitInput;
  }
  catch (const std::exception& e)
  {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
