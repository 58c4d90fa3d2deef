#include <tmr/metrics.hh>

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace tmr
{
  namespace
  {
    std::unordered_map<TokenId, std::size_t> counts(Tokens tokens)
    {
      std::unordered_map<TokenId, std::size_t> c;
      for (TokenId t : tokens)
        ++c[t];
      return c;
    }
  }

  double coverage(Tokens query, const std::vector<Tokens>& examples, OverlapVariant variant)
  {
    if (query.empty() || examples.empty())
      return 0;
    std::size_t covered = 0;
    if (variant == OverlapVariant::bag_of_words)
    {
      std::unordered_set<TokenId> terms;
      for (const auto& ex : examples)
        terms.insert(ex.begin(), ex.end());
      for (TokenId t : query)
        covered += terms.count(t);
    }
    else
    {
      std::unordered_map<TokenId, std::size_t> available;
      for (const auto& ex : examples)
        for (TokenId t : ex)
          ++available[t];
      for (const auto& [t, n] : counts(query))
      {
        auto it = available.find(t);
        if (it != available.end())
          covered += std::min(n, it->second);
      }
    }
    return static_cast<double>(covered) / static_cast<double>(query.size());
  }

  double relevance(Tokens query, const std::vector<Tokens>& examples, OverlapVariant variant)
  {
    if (examples.empty())
      return 0;
    const auto query_counts = counts(query);
    double total = 0;
    for (const auto& ex : examples)
    {
      if (ex.empty())
        continue;
      std::size_t contributing = 0;
      if (variant == OverlapVariant::bag_of_words)
      {
        for (TokenId t : ex)
          contributing += query_counts.count(t);
      }
      else
      {
        for (const auto& [t, n] : counts(ex))
        {
          auto it = query_counts.find(t);
          if (it != query_counts.end())
            contributing += std::min(n, it->second);
        }
      }
      total += static_cast<double>(contributing) / static_cast<double>(ex.size());
    }
    return total / static_cast<double>(examples.size());
  }

  double mean_length(const std::vector<std::vector<Tokens>>& examples_per_query)
  {
    std::size_t n = 0;
    std::size_t tokens = 0;
    for (const auto& examples : examples_per_query)
      for (const auto& ex : examples)
      {
        ++n;
        tokens += ex.size();
      }
    return n == 0 ? 0.0 : static_cast<double>(tokens) / static_cast<double>(n);
  }

  QueryQuality evaluate_query(Tokens query, const std::vector<Tokens>& examples)
  {
    QueryQuality q;
    q.coverage.bag_of_words = coverage(query, examples, OverlapVariant::bag_of_words);
    q.coverage.modified = coverage(query, examples, OverlapVariant::modified);
    q.relevance.bag_of_words = relevance(query, examples, OverlapVariant::bag_of_words);
    q.relevance.modified = relevance(query, examples, OverlapVariant::modified);
    q.n_examples = examples.size();
    for (const auto& ex : examples)
      q.example_tokens += ex.size();
    return q;
  }

  QualityReport summarize(std::vector<QueryQuality> per_query)
  {
    QualityReport report;
    report.n_queries = per_query.size();
    std::size_t examples = 0;
    std::size_t tokens = 0;
    std::size_t with_copy = 0;
    double copy = 0;
    for (const auto& q : per_query)
    {
      report.coverage.bag_of_words += q.coverage.bag_of_words;
      report.coverage.modified += q.coverage.modified;
      report.relevance.bag_of_words += q.relevance.bag_of_words;
      report.relevance.modified += q.relevance.modified;
      examples += q.n_examples;
      tokens += q.example_tokens;
      if (q.copy_rate)
      {
        copy += *q.copy_rate;
        ++with_copy;
      }
    }
    if (report.n_queries)
    {
      const double n = static_cast<double>(report.n_queries);
      report.coverage.bag_of_words /= n;
      report.coverage.modified /= n;
      report.relevance.bag_of_words /= n;
      report.relevance.modified /= n;
    }
    report.mean_example_length = examples ? static_cast<double>(tokens) / static_cast<double>(examples) : 0.0;
    if (with_copy)
      report.copy_rate = copy / static_cast<double>(with_copy);
    report.per_query = std::move(per_query);
    return report;
  }

  QualityReport macro_average(const std::map<std::string, QualityReport>& by_domain)
  {
    QualityReport report;
    if (by_domain.empty())
      return report;
    std::size_t with_copy = 0;
    double copy = 0;
    for (const auto& [name, r] : by_domain)
    {
      report.coverage.bag_of_words += r.coverage.bag_of_words;
      report.coverage.modified += r.coverage.modified;
      report.relevance.bag_of_words += r.relevance.bag_of_words;
      report.relevance.modified += r.relevance.modified;
      report.mean_example_length += r.mean_example_length;
      report.n_queries += r.n_queries;
      if (r.copy_rate)
      {
        copy += *r.copy_rate;
        ++with_copy;
      }
      report.per_query.insert(report.per_query.end(), r.per_query.begin(), r.per_query.end());
    }
    const double n = static_cast<double>(by_domain.size());
    report.coverage.bag_of_words /= n;
    report.coverage.modified /= n;
    report.relevance.bag_of_words /= n;
    report.relevance.modified /= n;
    report.mean_example_length /= n;
    if (with_copy)
      report.copy_rate = copy / static_cast<double>(with_copy);
    return report;
  }
}
