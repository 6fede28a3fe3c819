#pragma once

/// \file
/// Atomic measures on [0, inf) supported on a finite set Gamma, and the
/// classical machinery for weighted sequences on them: decreasing
/// rearrangement, least concave majorant, level function and least
/// decreasing majorant.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <iterator>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "downcore/error.hpp"

namespace downcore {

/// One value per lambda-atom, i.e. the value at gamma_j.
struct StepFunction {
  std::vector<double> values;

  StepFunction() = default;
  explicit StepFunction(std::vector<double> v) : values(std::move(v)) {}
  StepFunction(std::initializer_list<double> v) : values(v) {}

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  bool operator==(const StepFunction&) const = default;
};

/// Atomic measure with mass gamma_j - gamma_{j-1} at gamma_j, so that
/// lambda([0, x]) = a(x) = sup([0, x] cap Gamma).
class TailoredMeasure {
 public:
  std::size_t k() const noexcept { return masses_.size(); }
  std::span<const double> gamma() const noexcept { return gamma_; }
  std::span<const double> positions() const noexcept {
    return std::span<const double>(gamma_).subspan(1);
  }
  std::span<const double> masses() const noexcept { return masses_; }
  double total_mass() const noexcept { return gamma_.back(); }

  /// a(x) = sup([0, x] cap Gamma).
  double lower(double x) const {
    auto it = std::upper_bound(gamma_.begin(), gamma_.end(), x);
    return it == gamma_.begin() ? 0.0 : *std::prev(it);
  }

  /// b(x) = inf([x, inf) cap Gamma), +inf beyond the last point.
  double upper(double x) const {
    auto it = std::lower_bound(gamma_.begin(), gamma_.end(), x);
    return it == gamma_.end() ? std::numeric_limits<double>::infinity() : *it;
  }

  /// lambda([0, x]) by summing the atoms at or below x.
  double mass_up_to(double x) const {
    double m = 0.0;
    for (std::size_t j = 0; j < k(); ++j) {
      if (gamma_[j + 1] <= x) m += masses_[j];
    }
    return m;
  }

  /// Index of the atom whose position is b(x), or k() when x > gamma_k.
  std::size_t atom_at_or_after(double x) const {
    auto it = std::lower_bound(gamma_.begin() + 1, gamma_.end(), x);
    return static_cast<std::size_t>(it - gamma_.begin() - 1);
  }

 private:
  friend TailoredMeasure tailored_measure(std::span<const double> gamma);
  TailoredMeasure() = default;

  std::vector<double> gamma_;
  std::vector<double> masses_;
};

inline TailoredMeasure tailored_measure(std::span<const double> gamma) {
  if (gamma.empty()) throw Error(ErrorCode::NotSorted, "gamma must start at 0");
  for (double g : gamma) {
    if (!std::isfinite(g)) throw Error(ErrorCode::NonFiniteValue);
    if (g < 0.0) throw Error(ErrorCode::NegativeEntry);
  }
  if (gamma.front() != 0.0) throw Error(ErrorCode::NotSorted, "gamma must start at 0");
  TailoredMeasure m;
  m.gamma_.assign(gamma.begin(), gamma.end());
  for (std::size_t j = 1; j < gamma.size(); ++j) {
    if (!(gamma[j] > gamma[j - 1])) {
      throw Error(ErrorCode::NotSorted, "gamma not strictly increasing at " + std::to_string(j));
    }
    m.masses_.push_back(gamma[j] - gamma[j - 1]);
  }
  return m;
}

/// Integral of phi over [0, x] with respect to lambda.
inline double integrate_lambda(const TailoredMeasure& m, const StepFunction& phi, double x) {
  if (phi.size() != m.k()) throw Error(ErrorCode::LengthMismatch);
  const double ax = m.lower(x);
  double sum = 0.0;
  for (std::size_t j = 0; j < m.k(); ++j) {
    if (m.positions()[j] <= ax) sum += m.masses()[j] * phi[j];
  }
  return sum;
}

/// Decreasing rearrangement of an atomic function as a list of
/// (length, value) pieces with strictly decreasing values.
struct RearrangedFunction {
  struct Piece {
    double length;
    double value;
  };
  std::vector<Piece> pieces;

  double total_length() const {
    double s = 0.0;
    for (const auto& p : pieces) s += p.length;
    return s;
  }

  /// f*(t), right-continuous; zero past the total length.
  double value_at(double t) const {
    double start = 0.0;
    for (const auto& p : pieces) {
      if (t < start + p.length) return p.value;
      start += p.length;
    }
    return 0.0;
  }

  /// Integral of f* over [0, t].
  double integral_up_to(double t) const {
    if (!(t > 0.0)) return 0.0;
    double acc = 0.0;
    double remaining = t;
    for (const auto& p : pieces) {
      if (remaining <= p.length) return acc + remaining * p.value;
      acc += p.length * p.value;
      remaining -= p.length;
    }
    return acc;
  }
};

namespace detail {

inline void require_finite_nonnegative(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue);
    if (v < 0.0) throw Error(ErrorCode::NegativeValue);
  }
}

inline void require_positive_masses(std::span<const double> masses) {
  for (double m : masses) {
    if (!std::isfinite(m) || !(m > 0.0)) throw Error(ErrorCode::NotIncreasingMass, "mass must be > 0");
  }
}

}  // namespace detail

inline RearrangedFunction rearrange(std::span<const double> values, std::span<const double> masses) {
  if (values.size() != masses.size()) throw Error(ErrorCode::LengthMismatch);
  detail::require_finite_nonnegative(values);
  detail::require_positive_masses(masses);

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

  RearrangedFunction out;
  for (std::size_t i : order) {
    if (!out.pieces.empty() && out.pieces.back().value == values[i]) {
      out.pieces.back().length += masses[i];
    } else {
      out.pieces.push_back({masses[i], values[i]});
    }
  }
  return out;
}

/// Upper concave hull of (0,0), (W_1,V_1), ..., (W_k,V_k).
struct ConcaveMajorant {
  struct Block {
    std::size_t first;  // inclusive atom index
    std::size_t last;   // inclusive atom index
  };

  std::vector<double> knot_abscissae;  // W at the right end of each block
  std::vector<double> knot_values;     // V at the right end of each block
  std::vector<double> slopes;          // one per block, strictly decreasing
  std::vector<Block> blocks;

  /// Slope of the hull over atom j.
  double slope_of_atom(std::size_t j) const {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (j >= blocks[b].first && j <= blocks[b].last) return slopes[b];
    }
    throw Error(ErrorCode::IndexOutOfRange, "atom " + std::to_string(j));
  }

  /// Hull value at abscissa x in [0, W_k]; constant beyond W_k.
  double value_at(double x) const {
    double x0 = 0.0, y0 = 0.0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (x <= knot_abscissae[b]) return y0 + slopes[b] * (x - x0);
      x0 = knot_abscissae[b];
      y0 = knot_values[b];
    }
    return y0;
  }
};

namespace detail {

/// Relative 1e-12 with an absolute floor of 1e-15.
inline double slope_tolerance(double a, double b) {
  return std::max(1e-15, 1e-12 * std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace detail

/// Single left-to-right monotone stack. Equal slopes collapse into one block.
inline ConcaveMajorant least_concave_majorant(std::span<const double> cum_mass,
                                              std::span<const double> cum_value) {
  if (cum_mass.size() != cum_value.size()) throw Error(ErrorCode::LengthMismatch);
  double prev = 0.0;
  for (double w : cum_mass) {
    if (!std::isfinite(w) || !(w > prev)) throw Error(ErrorCode::NotIncreasingMass);
    prev = w;
  }
  for (double v : cum_value) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue);
  }

  const std::size_t k = cum_mass.size();
  auto W = [&](std::size_t i) { return i == 0 ? 0.0 : cum_mass[i - 1]; };
  auto V = [&](std::size_t i) { return i == 0 ? 0.0 : cum_value[i - 1]; };
  auto slope = [&](std::size_t a, std::size_t b) { return (V(b) - V(a)) / (W(b) - W(a)); };

  // Hull vertices as indices into the point list 0..k (0 is the origin).
  std::vector<std::size_t> hull{0};
  for (std::size_t i = 1; i <= k; ++i) {
    while (hull.size() >= 2) {
      const std::size_t top = hull.back();
      const std::size_t below = hull[hull.size() - 2];
      const double s_old = slope(below, top);
      const double s_new = slope(top, i);
      if (s_new >= s_old - detail::slope_tolerance(s_old, s_new)) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }

  ConcaveMajorant out;
  for (std::size_t h = 1; h < hull.size(); ++h) {
    out.blocks.push_back({hull[h - 1], hull[h] - 1});
    out.slopes.push_back(slope(hull[h - 1], hull[h]));
    out.knot_abscissae.push_back(W(hull[h]));
    out.knot_values.push_back(V(hull[h]));
  }
  return out;
}

struct HalfLineLevel {
  StepFunction level;
  ConcaveMajorant hull;
};

namespace detail {

/// Level function from the lambda-integrals of phi over each atom.
inline HalfLineLevel level_from_atom_integrals(std::span<const double> masses,
                                               std::span<const double> integrals) {
  std::vector<double> W(masses.size()), V(masses.size());
  std::partial_sum(masses.begin(), masses.end(), W.begin());
  std::partial_sum(integrals.begin(), integrals.end(), V.begin());
  HalfLineLevel out;
  out.hull = least_concave_majorant(W, V);
  out.level.values.resize(masses.size());
  for (std::size_t b = 0; b < out.hull.blocks.size(); ++b) {
    for (std::size_t j = out.hull.blocks[b].first; j <= out.hull.blocks[b].last; ++j) {
      out.level.values[j] = out.hull.slopes[b];
    }
  }
  return out;
}

}  // namespace detail

/// Classical level function: the slopes of the least concave majorant of the
/// cumulative lambda-integrals of phi.
inline HalfLineLevel classical_level(std::span<const double> values, std::span<const double> masses) {
  if (values.size() != masses.size()) throw Error(ErrorCode::LengthMismatch);
  detail::require_finite_nonnegative(values);
  detail::require_positive_masses(masses);
  std::vector<double> integrals(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) integrals[j] = values[j] * masses[j];
  return detail::level_from_atom_integrals(masses, integrals);
}

/// Classical least decreasing majorant: suffix running maximum.
inline StepFunction classical_ldm(std::span<const double> values, std::span<const double> masses) {
  if (values.size() != masses.size()) throw Error(ErrorCode::LengthMismatch);
  detail::require_finite_nonnegative(values);
  detail::require_positive_masses(masses);
  StepFunction out(std::vector<double>(values.begin(), values.end()));
  for (std::size_t j = out.size(); j-- > 1;) {
    out[j - 1] = std::max(out[j - 1], out[j]);
  }
  return out;
}

}  // namespace downcore
