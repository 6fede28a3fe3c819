#pragma once

/// \file
/// Level function, least core decreasing majorant, and the decomposition
/// family D_f(gamma) on a cored space.

#include <cmath>
#include <limits>

#include "downcore/core_space.hpp"
#include "downcore/halfline.hpp"
#include "downcore/transfer.hpp"

namespace downcore {

namespace detail {

inline void require_finite(const FunctionOnU& f) {
  for (double v : f.values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue);
  }
}

}  // namespace detail

struct LevelResult {
  FunctionOnU level;
  /// Leveling intervals as inclusive atom-index ranges.
  std::vector<ConcaveMajorant::Block> blocks;
  ConcaveMajorant hull;
};

/// f^o = Q((R|f|)^o). Depends on |f| only; blocks are the hull facets.
inline LevelResult level_function(const MeasureSpace& space, const CoreAtoms& atoms,
                                  const FunctionOnU& f) {
  if (f.size() != space.size()) throw Error(ErrorCode::LengthMismatch);
  detail::require_finite(f);
  const auto integrals = atom_integrals(space, atoms, absolute(f));
  auto half = detail::level_from_atom_integrals(atoms.atom_weights(), integrals);
  LevelResult out;
  out.level = q_map(space, atoms, half.level);
  out.blocks = half.hull.blocks;
  out.hull = std::move(half.hull);
  return out;
}

/// Smallest core decreasing function dominating |g|.
inline FunctionOnU least_core_decreasing_majorant(const MeasureSpace& space,
                                                  const CoreAtoms& atoms,
                                                  const FunctionOnU& g) {
  if (g.size() != space.size()) throw Error(ErrorCode::LengthMismatch);
  detail::require_finite(g);
  StepFunction atom_max(std::vector<double>(atoms.k(), 0.0));
  for (AtomIndex j = 0; j < atoms.k(); ++j) {
    for (PointIndex u : atoms.points_in_atom(j)) {
      atom_max[j] = std::max(atom_max[j], std::fabs(g[u]));
    }
  }
  for (std::size_t j = atoms.k(); j-- > 1;) atom_max[j - 1] = std::max(atom_max[j - 1], atom_max[j]);
  return q_map(space, atoms, atom_max);
}

struct DecompositionPiece {
  FunctionOnU d;
  double gamma = 0.0;
  double a_gamma = 0.0;
  /// +inf when gamma exceeds every chain integral.
  double b_gamma = 0.0;
  /// Chain indices of N_{a_gamma} and N_{b_gamma} (the latter equals the
  /// former when D is a single indicator).
  std::size_t lower_set = 0;
  std::size_t upper_set = 0;
};

/// D_f(gamma) for f >= 0. N_x is the smallest chain set whose integral is x.
inline DecompositionPiece decompose_D(const MeasureSpace& space, const CoreAtoms& atoms,
                                      const FunctionOnU& f, double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw Error(ErrorCode::NegativeGamma);
  if (f.size() != space.size()) throw Error(ErrorCode::LengthMismatch);
  detail::require_finite(f);
  for (double v : f.values) {
    if (v < 0.0) throw Error(ErrorCode::NegativeFunction);
  }
  const auto theta = chain_integrals(space, atoms, f);
  const std::size_t k = atoms.k();

  // Largest chain index with theta <= gamma, then back to the smallest set
  // attaining the same value.
  std::size_t top = 0;
  while (top < k && theta[top + 1] <= gamma) ++top;
  std::size_t ia = top;
  while (ia > 0 && theta[ia - 1] == theta[top]) --ia;

  DecompositionPiece out;
  out.gamma = gamma;
  out.a_gamma = theta[top];
  out.lower_set = ia;
  out.upper_set = ia;
  out.d.values.assign(space.size(), 0.0);

  if (top == k) {
    out.b_gamma = (theta[k] == gamma) ? gamma : std::numeric_limits<double>::infinity();
  } else if (theta[top] == gamma) {
    out.b_gamma = gamma;
  } else {
    const std::size_t ib = top + 1;
    const double a = theta[top];
    const double b = theta[ib];
    out.b_gamma = b;
    out.upper_set = ib;
    // (b-gamma)/(b-a) on N_a plus (gamma-a)/(b-a) on N_b; the two weights
    // sum to one on N_a.
    const double wb = (gamma - a) / (b - a);
    for (PointIndex u = 0; u < space.size(); ++u) {
      const AtomIndex j = atoms.atom_of_point(u);
      out.d[u] = j < ia ? 1.0 : (j < ib ? wb : 0.0);
    }
    return out;
  }
  for (PointIndex u = 0; u < space.size(); ++u) {
    out.d[u] = atoms.atom_of_point(u) < ia ? 1.0 : 0.0;
  }
  return out;
}

}  // namespace downcore
