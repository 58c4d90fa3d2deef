#include <tmr/edit_distance.hh>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <fmt/format.h>

#include <tmr/errors.hh>

namespace tmr
{
  EditCosts EditCosts::delta_lcs(double delta)
  {
    return from_decimal(delta, 1, 1);
  }

  EditCosts EditCosts::from_decimal(double deletion, double insertion, double replacement)
  {
    const double values[3] = {deletion, insertion, replacement};
    for (double v : values)
      if (!std::isfinite(v) || v < 0)
        throw ConfigError(fmt::format("edit costs must be finite and non-negative, got {}", v));

    for (std::int64_t scale = 1; scale <= 1000000; scale *= 10)
    {
      bool exact = true;
      std::int64_t scaled[3];
      for (int i = 0; i < 3; ++i)
      {
        const double s = values[i] * double(scale);
        const double r = std::round(s);
        if (std::abs(s - r) > 1e-9 * std::max(1.0, s))
        {
          exact = false;
          break;
        }
        scaled[i] = static_cast<std::int64_t>(r);
      }
      if (!exact)
        continue;
      std::int64_t g = std::gcd(std::gcd(scaled[0], scaled[1]), std::gcd(scaled[2], scale));
      if (g == 0)
        g = 1;
      EditCosts costs{scaled[0] / g, scaled[1] / g, scaled[2] / g, scale / g};
      costs.validate();
      return costs;
    }
    throw ConfigError("edit costs need at most 6 decimal digits");
  }

  void EditCosts::validate() const
  {
    if (scale <= 0)
      throw ConfigError("edit cost scale must be positive");
    if (deletion < 0 || insertion < 0 || replacement < 0)
      throw ConfigError("edit costs must be non-negative");
    if (insertion == 0 && replacement == 0)
      throw ConfigError("insertion or replacement cost must be positive");
  }

  std::string EditCosts::to_string() const
  {
    return fmt::format("({:g},{:g},{:g})", deletion_cost(), insertion_cost(), replacement_cost());
  }

  std::int64_t edit_normalizer(const EditCosts& costs, std::size_t example_length, std::size_t query_length)
  {
    const auto d = costs.deletion;
    const auto a = costs.insertion;
    const auto r = costs.replacement;
    const auto ex = static_cast<std::int64_t>(example_length);
    const auto q = static_cast<std::int64_t>(query_length);
    if (a + d <= r)
      return a * q + d * ex;
    if (q <= ex)
      return (r - d) * q + d * ex;
    return (r - a) * ex + a * q;
  }

  namespace
  {
    struct Cell
    {
      std::int64_t cost;
      std::int32_t copies;
    };

    inline bool better(const Cell& x, const Cell& y)
    {
      return x.cost < y.cost || (x.cost == y.cost && x.copies > y.copies);
    }

    std::optional<EditResult> run_dp(Tokens example, Tokens query, const EditCosts& costs,
                                     std::int64_t max_delta)
    {
      const std::size_t n = example.size();
      const std::size_t m = query.size();

      thread_local std::vector<Cell> prev;
      thread_local std::vector<Cell> cur;
      prev.resize(m + 1);
      cur.resize(m + 1);

      for (std::size_t j = 0; j <= m; ++j)
        prev[j] = {static_cast<std::int64_t>(j) * costs.insertion, 0};

      for (std::size_t i = 1; i <= n; ++i)
      {
        cur[0] = {static_cast<std::int64_t>(i) * costs.deletion, 0};
        std::int64_t row_min = cur[0].cost;
        const TokenId token = example[i - 1];
        for (std::size_t j = 1; j <= m; ++j)
        {
          Cell best{prev[j].cost + costs.deletion, prev[j].copies};
          const Cell ins{cur[j - 1].cost + costs.insertion, cur[j - 1].copies};
          if (better(ins, best))
            best = ins;
          const Cell diag = token == query[j - 1]
            ? Cell{prev[j - 1].cost, prev[j - 1].copies + 1}
            : Cell{prev[j - 1].cost + costs.replacement, prev[j - 1].copies};
          if (better(diag, best))
            best = diag;
          cur[j] = best;
          row_min = std::min(row_min, best.cost);
        }
        if (row_min > max_delta)
          return std::nullopt;
        std::swap(prev, cur);
      }

      EditResult result;
      result.delta = prev[m].cost;
      if (result.delta > max_delta)
        return std::nullopt;
      result.ecs_length = static_cast<std::size_t>(prev[m].copies);
      result.normalizer = edit_normalizer(costs, n, m);
      if (n == 0 && m == 0)
      {
        result.normalizer = costs.scale;
        result.similarity = 1;
      }
      else if (result.normalizer == 0)
        result.similarity = 0;
      else
        result.similarity = double(result.normalizer - result.delta) / double(result.normalizer);
      return result;
    }
  }

  EditResult edit_distance(Tokens example, Tokens query, const EditCosts& costs)
  {
    return *run_dp(example, query, costs, std::numeric_limits<std::int64_t>::max());
  }

  std::optional<EditResult> edit_distance_within(Tokens example,
                                                 Tokens query,
                                                 const EditCosts& costs,
                                                 std::int64_t max_delta)
  {
    return run_dp(example, query, costs, max_delta);
  }

  std::size_t lcs_length(Tokens a, Tokens b)
  {
    if (a.size() < b.size())
      std::swap(a, b);
    std::vector<std::size_t> row(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i)
    {
      std::size_t diag = 0;
      for (std::size_t j = 1; j <= b.size(); ++j)
      {
        const std::size_t up = row[j];
        row[j] = a[i - 1] == b[j - 1] ? diag + 1 : std::max(up, row[j - 1]);
        diag = up;
      }
    }
    return row[b.size()];
  }

  double led_similarity(Tokens example, Tokens query)
  {
    return edit_distance(example, query, EditCosts::led()).similarity;
  }
}
