#pragma once

/// \file
/// Exact K-functionals for (L1, Linf), (L1, Linf-down) and (L1-tilde, Linf),
/// their half-line counterparts, and the evaluation of K(f, t; L1, Linf-down)
/// through the decomposition family D_f(gamma).

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "downcore/constructions.hpp"
#include "downcore/norms.hpp"

namespace downcore {

enum class Couple { L1Linf, L1Dinf, TL1Linf };

constexpr std::string_view to_string(Couple c) {
  switch (c) {
    case Couple::L1Linf: return "l1-linf";
    case Couple::L1Dinf: return "l1-dinf";
    case Couple::TL1Linf: return "tl1-linf";
  }
  return "?";
}

inline Couple parse_couple(std::string_view text) {
  if (text == "l1-linf") return Couple::L1Linf;
  if (text == "l1-dinf") return Couple::L1Dinf;
  if (text == "tl1-linf") return Couple::TL1Linf;
  throw Error(ErrorCode::MalformedInstance, "unknown couple '" + std::string(text) + "'");
}

namespace detail {

inline void require_t(double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::NegativeT);
}

inline double integral_of_rearrangement(const MeasureSpace& space, const FunctionOnU& f, double t) {
  if (t == 0.0) return 0.0;
  return rearrange(absolute(f).values, space.weights()).integral_up_to(t);
}

}  // namespace detail

/// Integral of f* over [0, t].
inline double k_l1_linf(const MeasureSpace& space, const FunctionOnU& f, double t) {
  detail::require_t(t);
  detail::require_finite(f);
  if (f.size() != space.size()) throw Error(ErrorCode::LengthMismatch);
  return detail::integral_of_rearrangement(space, f, t);
}

/// Integral of (f^o)* over [0, t].
inline double k_l1_dinf(const MeasureSpace& space, const CoreAtoms& atoms, const FunctionOnU& f,
                        double t) {
  detail::require_t(t);
  return detail::integral_of_rearrangement(space, level_function(space, atoms, f).level, t);
}

/// Integral of (g~)* over [0, t].
inline double k_tl1_linf(const MeasureSpace& space, const CoreAtoms& atoms, const FunctionOnU& g,
                         double t) {
  detail::require_t(t);
  return detail::integral_of_rearrangement(space, least_core_decreasing_majorant(space, atoms, g), t);
}

inline double k_value(Couple couple, const MeasureSpace& space, const CoreAtoms& atoms,
                      const FunctionOnU& f, double t) {
  switch (couple) {
    case Couple::L1Linf: return k_l1_linf(space, f, t);
    case Couple::L1Dinf: return k_l1_dinf(space, atoms, f, t);
    case Couple::TL1Linf: return k_tl1_linf(space, atoms, f, t);
  }
  return 0.0;
}

/// K(phi, t; L1_lambda, Linf_lambda-down) via the classical level function.
inline double k_halfline_l1_dinf(const TailoredMeasure& m, const StepFunction& phi, double t) {
  detail::require_t(t);
  if (t == 0.0) return 0.0;
  std::vector<double> a(phi.values);
  for (double& v : a) v = std::fabs(v);
  const auto lev = classical_level(a, m.masses());
  return rearrange(lev.level.values, m.masses()).integral_up_to(t);
}

/// K(psi, t; L1_lambda-tilde, Linf_lambda) via the least decreasing majorant.
inline double k_halfline_tl1_linf(const TailoredMeasure& m, const StepFunction& psi, double t) {
  detail::require_t(t);
  if (t == 0.0) return 0.0;
  std::vector<double> a(psi.values);
  for (double& v : a) v = std::fabs(v);
  return rearrange(classical_ldm(a, m.masses()).values, m.masses()).integral_up_to(t);
}

/// gamma -> ||D(gamma)|f| ||_1 + t ||(1 - D(gamma))|f| ||_{Linf-down}.
inline double decomposition_objective(const MeasureSpace& space, const CoreAtoms& atoms,
                                      const FunctionOnU& abs_f, double t, double gamma) {
  const auto piece = decompose_D(space, atoms, abs_f, gamma);
  double l1 = 0.0;
  FunctionOnU rest = abs_f;
  for (std::size_t u = 0; u < space.size(); ++u) {
    l1 += piece.d[u] * abs_f[u] * space.weight(u);
    rest[u] = (1.0 - piece.d[u]) * abs_f[u];
  }
  return l1 + t * down_norm_inf(space, atoms, rest).norm;
}

/// Every distinct chain integral of |f|, nine equispaced points inside each
/// gap, and the crossings of the chain-mean lines inside each gap.
///
/// On a gap (a, b) of consecutive chain integrals D(gamma) is affine in
/// gamma, so each chain mean of (1 - D)|f| is affine and the objective is
/// gamma plus t times a max of lines. Its minimum sits at a gap end or at a
/// crossing of two lines, which the grid therefore contains.
inline std::vector<double> decomposition_gamma_grid(const MeasureSpace& space,
                                                    const CoreAtoms& atoms,
                                                    const FunctionOnU& f) {
  const FunctionOnU abs_f = absolute(f);
  auto theta = chain_integrals(space, atoms, abs_f);
  theta.erase(std::unique(theta.begin(), theta.end()), theta.end());

  auto chain_means = [&](double gamma) {
    const auto piece = decompose_D(space, atoms, abs_f, gamma);
    FunctionOnU rest = abs_f;
    for (std::size_t u = 0; u < space.size(); ++u) rest[u] = (1.0 - piece.d[u]) * abs_f[u];
    auto ints = chain_integrals(space, atoms, rest);
    std::vector<double> means;
    for (std::size_t j = 1; j < ints.size(); ++j) {
      means.push_back(ints[j] / atoms.cumulative_measures()[j - 1]);
    }
    return means;
  };

  std::vector<double> grid(theta.begin(), theta.end());
  for (std::size_t g = 0; g + 1 < theta.size(); ++g) {
    const double a = theta[g];
    const double b = theta[g + 1];
    for (int i = 1; i <= 9; ++i) grid.push_back(a + (b - a) * i / 10.0);
    const auto at_a = chain_means(a);
    const auto at_b = chain_means(b);
    for (std::size_t i = 0; i < at_a.size(); ++i) {
      for (std::size_t j = i + 1; j < at_a.size(); ++j) {
        // lines m_i(s) = at_a[i] + s (at_b[i] - at_a[i]), s in (0, 1)
        const double di = at_b[i] - at_a[i];
        const double dj = at_b[j] - at_a[j];
        if (di == dj) continue;
        const double s = (at_a[j] - at_a[i]) / (di - dj);
        if (s > 0.0 && s < 1.0) grid.push_back(a + s * (b - a));
      }
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

/// Minimum of the decomposition objective over the supplied gamma grid.
inline double k_via_decomposition(const MeasureSpace& space, const CoreAtoms& atoms,
                                  const FunctionOnU& f, double t,
                                  const std::vector<double>& gamma_grid) {
  detail::require_t(t);
  if (gamma_grid.empty()) throw Error(ErrorCode::EmptyGrid);
  if (t == 0.0) return 0.0;
  const FunctionOnU abs_f = absolute(f);
  double best = std::numeric_limits<double>::infinity();
  for (double gamma : gamma_grid) {
    best = std::min(best, decomposition_objective(space, atoms, abs_f, t, gamma));
  }
  return best;
}

inline double k_via_decomposition(const MeasureSpace& space, const CoreAtoms& atoms,
                                  const FunctionOnU& f, double t) {
  return k_via_decomposition(space, atoms, f, t, decomposition_gamma_grid(space, atoms, f));
}

struct KCurve {
  std::vector<double> t_grid;
  std::vector<double> values;
};

/// Evaluates the couple's K-functional on the grid and verifies the result
/// is nondecreasing and concave (chord slopes nonincreasing).
inline KCurve k_curve(Couple couple, const MeasureSpace& space, const CoreAtoms& atoms,
                      const FunctionOnU& f, const std::vector<double>& t_grid) {
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    detail::require_t(t_grid[i]);
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) {
      throw Error(ErrorCode::NotSorted, "t grid must be strictly increasing");
    }
  }
  KCurve out{t_grid, {}};
  out.values.reserve(t_grid.size());
  for (double t : t_grid) out.values.push_back(k_value(couple, space, atoms, f, t));

  double scale = 1.0;
  for (double v : out.values) scale = std::max(scale, std::fabs(v));
  const double tol = 1e-12 * scale;
  for (std::size_t i = 1; i < out.values.size(); ++i) {
    if (out.values[i] < out.values[i - 1] - tol) {
      throw Error(ErrorCode::CurveNotMonotone, "at t=" + std::to_string(t_grid[i]));
    }
  }
  for (std::size_t i = 2; i < out.values.size(); ++i) {
    const double s1 = (out.values[i - 1] - out.values[i - 2]) / (t_grid[i - 1] - t_grid[i - 2]);
    const double s2 = (out.values[i] - out.values[i - 1]) / (t_grid[i] - t_grid[i - 1]);
    const double slack = tol / std::min(t_grid[i] - t_grid[i - 1], t_grid[i - 1] - t_grid[i - 2]);
    if (s2 > s1 + slack) {
      throw Error(ErrorCode::CurveNotConcave, "at t=" + std::to_string(t_grid[i - 1]));
    }
  }
  return out;
}

}  // namespace downcore
