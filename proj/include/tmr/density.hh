#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <tmr/sentence.hh>

namespace tmr
{
  class UnionFind
  {
  public:
    explicit UnionFind(std::size_t n);

    std::size_t find(std::size_t x);
    /* true when x and y were in different sets */
    bool unite(std::size_t x, std::size_t y);
    std::size_t components() const { return _components; }

  private:
    std::vector<std::size_t> _parent;
    std::vector<std::uint32_t> _size;
    std::size_t _components;
  };

  enum class DensityMode
  {
    exact,            // every pair is compared
    ngm_prefiltered,  // only pairs sharing an n-gram of length >= ML (approximate)
    automatic,        // exact below kDensityExactLimit sentences
  };

  inline constexpr std::size_t kDensityExactLimit = 50000;

  DensityMode parse_density_mode(std::string_view name);

  struct DensityResult
  {
    std::size_t ncc = 0;
    std::size_t corpus_size = 0;
    double density = 1;
    double threshold = 0.4;
    bool approximate = false;  // computed with the n-gram prefilter
    bool degenerate = false;   // fewer than 2 sentences
    std::size_t compared_pairs = 0;
  };

  /* The similarity-graph edge predicate: LED similarity > threshold. */
  bool linked(Tokens a, Tokens b, double threshold);

  /* 1 - (NCC - 1) / (|D| - 1) over the graph linking sentences whose LED
     similarity exceeds `threshold`. */
  DensityResult density(const std::vector<Tokens>& sentences,
                        double threshold = 0.4,
                        DensityMode mode = DensityMode::automatic,
                        std::size_t min_length = 3);
}
