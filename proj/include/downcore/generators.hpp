#pragma once

/// \file
/// Random desk-scale instances for property suites. Integer-valued draws are
/// mixed in on purpose so that ties (equal slopes, repeated chain integrals,
/// zero atoms) show up regularly.

#include <algorithm>
#include <numeric>

#include "downcore/instance.hpp"
#include "downcore/random.hpp"

namespace downcore::gen {

struct Shape {
  std::size_t min_points = 1;
  std::size_t max_points = 8;
  std::size_t max_atoms = 5;
};

/// Random space and chain; no functions yet.
inline Instance instance(SplitMix64& rng, const Shape& shape = {}) {
  const std::size_t n = rng.between(shape.min_points, shape.max_points);
  const std::size_t k = rng.between(1, std::min(n, shape.max_atoms));

  std::vector<double> weights(n);
  const bool integer_weights = rng.chance(0.3);
  for (double& w : weights) {
    w = integer_weights ? static_cast<double>(rng.between(1, 3)) : rng.uniform(0.1, 3.0);
  }

  std::vector<PointIndex> order(n);
  std::iota(order.begin(), order.end(), PointIndex{0});
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  // k-1 distinct cut positions in 1..n-1
  std::vector<std::size_t> cuts(n - 1);
  std::iota(cuts.begin(), cuts.end(), std::size_t{1});
  for (std::size_t i = cuts.size(); i > 1; --i) std::swap(cuts[i - 1], cuts[rng.below(i)]);
  cuts.resize(k - 1);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(n);

  OrderedCoreSpec spec;
  spec.chain.push_back({});
  for (std::size_t c : cuts) {
    PointSet s(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(c));
    std::sort(s.begin(), s.end());
    spec.chain.push_back(std::move(s));
  }
  return Instance{MeasureSpace(std::move(weights)), std::move(spec), {}};
}

/// Signed values; a quarter of draws are small integers (including zero).
inline FunctionOnU function(SplitMix64& rng, std::size_t n, bool nonnegative = false) {
  auto f = FunctionOnU(std::vector<double>(n));
  const bool integers = rng.chance(0.25);
  for (double& v : f.values) {
    v = integers ? static_cast<double>(static_cast<int>(rng.between(0, 8)) - 3) : rng.uniform(-5.0, 5.0);
    if (nonnegative) v = std::fabs(v);
  }
  return f;
}

/// Random nonincreasing nonnegative atom values.
inline StepFunction decreasing_step(SplitMix64& rng, std::size_t k) {
  auto s = StepFunction(std::vector<double>(k));
  for (double& v : s.values) v = rng.chance(0.15) ? 0.0 : rng.uniform(0.0, 3.0);
  std::sort(s.values.begin(), s.values.end(), std::greater<>());
  return s;
}

inline StepFunction step(SplitMix64& rng, std::size_t k, bool nonnegative = false) {
  auto s = StepFunction(std::vector<double>(k));
  for (double& v : s.values) {
    v = rng.uniform(-4.0, 4.0);
    if (nonnegative) v = std::fabs(v);
  }
  return s;
}

}  // namespace downcore::gen
