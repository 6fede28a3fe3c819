#pragma once

/// \file
/// The two measure-preserving maps between a cored space U and the half line
/// carrying its tailored measure: R averages over atoms, Q extends
/// atom-constantly.

#include "downcore/core_space.hpp"
#include "downcore/halfline.hpp"

namespace downcore {

inline TailoredMeasure tailored_measure(const CoreAtoms& atoms) {
  const auto g = gamma_set(atoms);
  return tailored_measure(std::span<const double>(g));
}

/// Integral of f over each atom, in atom order.
inline std::vector<double> atom_integrals(const MeasureSpace& space, const CoreAtoms& atoms,
                                          const FunctionOnU& f) {
  if (f.size() != space.size()) throw Error(ErrorCode::LengthMismatch);
  std::vector<double> out(atoms.k(), 0.0);
  for (AtomIndex j = 0; j < atoms.k(); ++j) {
    for (PointIndex u : atoms.points_in_atom(j)) out[j] += f[u] * space.weight(u);
  }
  return out;
}

inline StepFunction r_map(const MeasureSpace& space, const CoreAtoms& atoms, const FunctionOnU& f) {
  auto integrals = atom_integrals(space, atoms, f);
  for (AtomIndex j = 0; j < atoms.k(); ++j) integrals[j] /= atoms.atom_weights()[j];
  return StepFunction(std::move(integrals));
}

inline FunctionOnU q_map(const MeasureSpace& space, const CoreAtoms& atoms, const StepFunction& phi) {
  if (phi.size() != atoms.k()) throw Error(ErrorCode::LengthMismatch);
  FunctionOnU out(std::vector<double>(space.size(), 0.0));
  for (PointIndex u = 0; u < space.size(); ++u) out[u] = phi[atoms.atom_of_point(u)];
  return out;
}

}  // namespace downcore
