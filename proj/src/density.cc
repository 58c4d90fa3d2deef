#include <tmr/density.hh>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <tmr/edit_distance.hh>
#include <tmr/errors.hh>
#include <tmr/suffix_array.hh>

namespace tmr
{
  UnionFind::UnionFind(std::size_t n)
    : _parent(n), _size(n, 1), _components(n)
  {
    std::iota(_parent.begin(), _parent.end(), std::size_t{0});
  }

  std::size_t UnionFind::find(std::size_t x)
  {
    std::size_t root = x;
    while (_parent[root] != root)
      root = _parent[root];
    while (_parent[x] != root)
    {
      const std::size_t next = _parent[x];
      _parent[x] = root;
      x = next;
    }
    return root;
  }

  bool UnionFind::unite(std::size_t x, std::size_t y)
  {
    x = find(x);
    y = find(y);
    if (x == y)
      return false;
    if (_size[x] < _size[y])
      std::swap(x, y);
    _parent[y] = x;
    _size[x] += _size[y];
    --_components;
    return true;
  }

  DensityMode parse_density_mode(std::string_view name)
  {
    if (name == "exact")
      return DensityMode::exact;
    if (name == "ngm" || name == "ngm-prefiltered")
      return DensityMode::ngm_prefiltered;
    if (name == "auto")
      return DensityMode::automatic;
    throw ConfigError("unknown density mode '" + std::string(name) + "'");
  }

  bool linked(Tokens a, Tokens b, double threshold)
  {
    const std::size_t lo = std::min(a.size(), b.size());
    const std::size_t hi = std::max(a.size(), b.size());
    if (hi == 0)
      return 1.0 > threshold;
    // LED similarity never exceeds min/max
    if (static_cast<double>(lo) / static_cast<double>(hi) <= threshold)
      return false;
    // similarity > t requires delta < (1 - t) * max
    const auto bound = static_cast<std::int64_t>(std::floor((1.0 - threshold) * static_cast<double>(hi))) + 1;
    const auto result = edit_distance_within(a, b, EditCosts::led(), bound);
    return result && result->similarity > threshold;
  }

  DensityResult density(const std::vector<Tokens>& sentences,
                        double threshold,
                        DensityMode mode,
                        std::size_t min_length)
  {
    DensityResult result;
    result.corpus_size = sentences.size();
    result.threshold = threshold;
    if (mode == DensityMode::automatic)
      mode = sentences.size() < kDensityExactLimit ? DensityMode::exact : DensityMode::ngm_prefiltered;
    result.approximate = mode == DensityMode::ngm_prefiltered;

    UnionFind components(sentences.size());
    if (mode == DensityMode::exact)
    {
      for (std::size_t i = 0; i < sentences.size(); ++i)
        for (std::size_t j = i + 1; j < sentences.size(); ++j)
        {
          if (components.find(i) == components.find(j))
            continue;
          ++result.compared_pairs;
          if (linked(sentences[i], sentences[j], threshold))
            components.unite(i, j);
        }
    }
    else
    {
      const auto index = SuffixArrayIndex::build(sentences);
      for (std::size_t i = 0; i < sentences.size(); ++i)
        for (const auto& hit : index.longest_common_ngram(sentences[i], min_length))
        {
          const std::size_t j = hit.uid;
          if (j <= i || components.find(i) == components.find(j))
            continue;
          ++result.compared_pairs;
          if (linked(sentences[i], sentences[j], threshold))
            components.unite(i, j);
        }
    }

    result.ncc = components.components();
    if (sentences.size() < 2)
    {
      result.degenerate = true;
      result.density = 1.0;
    }
    else
      result.density = 1.0 - static_cast<double>(result.ncc - 1) / static_cast<double>(sentences.size() - 1);
    return result;
  }
}
