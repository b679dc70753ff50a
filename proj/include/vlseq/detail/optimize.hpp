#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "vlseq/detail/parallel.hpp"
#include "vlseq/detail/random.hpp"

namespace vlseq::detail {

struct SearchOptions {
  int starts = 32;
  double initial_step = 0.5;
  double shrink = 0.5;
  double min_step = 1e-9;
  long max_evaluations = 20000;  // per start
  int random_directions = -1;    // per poll; -1 means the dimension
};

struct SearchResult {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
};

using Point = std::vector<double>;

/// Derivative-free descent: polls +-coordinate and random directions, accepts
/// the first improving move, halves the step when a full poll fails.
/// `project` maps trial points back onto the feasible set (e.g. a sphere).
template <class F, class Project>
SearchResult pattern_search(F&& f, Point x, const SearchOptions& opt, std::mt19937_64& rng, Project&& project) {
  project(x);
  double fx = f(x);
  const std::size_t dim = x.size();
  const int extra = opt.random_directions < 0 ? static_cast<int>(dim) : opt.random_directions;
  double step = opt.initial_step;
  long evals = 1;
  Point y(dim), dir(dim);

  while (step >= opt.min_step && evals < opt.max_evaluations) {
    bool improved = false;
    const std::size_t polls = 2 * dim + 2 * static_cast<std::size_t>(extra);
    for (std::size_t k = 0; k < polls && !improved; ++k) {
      if (k < 2 * dim) {
        std::fill(dir.begin(), dir.end(), 0.0);
        dir[k / 2] = (k % 2 == 0) ? 1.0 : -1.0;
      } else if ((k - 2 * dim) % 2 == 0) {
        double norm = 0.0;
        for (auto& d : dir) {
          d = gaussian(rng);
          norm += d * d;
        }
        norm = std::sqrt(norm);
        for (auto& d : dir) d /= norm;
      } else {
        for (auto& d : dir) d = -d;
      }
      for (std::size_t i = 0; i < dim; ++i) y[i] = x[i] + step * dir[i];
      project(y);
      const double fy = f(y);
      ++evals;
      if (fy < fx) {
        x = y;
        fx = fy;
        improved = true;
      }
    }
    if (!improved) step *= opt.shrink;
  }
  return {std::move(x), fx};
}

/// Best pattern-search result over opt.starts starting points drawn by
/// `start(rng)`. Deterministic for a given seed.
template <class F, class Start, class Project>
SearchResult multistart_minimize(F&& f, Start&& start, Project&& project, const SearchOptions& opt,
                                 std::uint64_t seed) {
  auto runs = parallel_map(static_cast<std::size_t>(opt.starts), [&](std::size_t i) {
    auto rng = stream_rng(seed, i);
    return pattern_search(f, start(rng), opt, rng, project);
  });
  SearchResult best;
  for (auto& r : runs)
    if (r.value < best.value) best = std::move(r);
  return best;
}

inline void normalize_euclidean(Point& x) {
  double n = 0.0;
  for (double v : x) n += v * v;
  n = std::sqrt(n);
  if (n > 0.0)
    for (double& v : x) v /= n;
}

inline Point random_unit_point(std::mt19937_64& rng, std::size_t dim) {
  Point x(dim);
  for (auto& v : x) v = gaussian(rng);
  normalize_euclidean(x);
  return x;
}

}  // namespace vlseq::detail
