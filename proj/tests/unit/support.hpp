#pragma once

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "downcore/downcore.hpp"
#include "downcore/generators.hpp"

namespace downcore::testing {

struct Built {
  Instance inst;
  CoreAtoms atoms;
  FunctionOnU f;
};

inline Built random_built(SplitMix64& rng, gen::Shape shape = {}, bool nonnegative = false) {
  Instance inst = gen::instance(rng, shape);
  CoreAtoms atoms = validate_core(inst.space, inst.spec);
  FunctionOnU f = gen::function(rng, inst.space.size(), nonnegative);
  return Built{std::move(inst), std::move(atoms), std::move(f)};
}

/// Weights (1,2,1), chain {} < {u1} < {u1,u2} < U.
inline MeasureSpace worked_space() { return MeasureSpace({"u1", "u2", "u3"}, {1.0, 2.0, 1.0}); }
inline OrderedCoreSpec worked_spec() { return OrderedCoreSpec{{{}, {0}, {0, 1}, {0, 1, 2}}}; }

inline void expect_near_all(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "index " << i;
}

inline double scale_of(const std::vector<double>& v) {
  double s = 1.0;
  for (double x : v) s = std::max(s, std::fabs(x));
  return s;
}

template <class F>
void expect_error(ErrorCode code, F&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace downcore::testing
