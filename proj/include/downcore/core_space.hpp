#pragma once

/// \file
/// Finite measure spaces carrying an ordered core (a chain of nested sets
/// starting at the empty set), the atoms the chain induces, and the order
/// relation and monotonicity predicate defined through it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <iterator>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "downcore/error.hpp"

namespace downcore {

using PointIndex = std::size_t;
using AtomIndex = std::size_t;
using PointSet = std::vector<PointIndex>;

/// Finite point set with strictly positive weights.
class MeasureSpace {
 public:
  MeasureSpace(std::vector<std::string> ids, std::vector<double> weights)
      : ids_(std::move(ids)), weights_(std::move(weights)) {
    if (ids_.size() != weights_.size()) {
      throw Error(ErrorCode::LengthMismatch, "ids and weights differ in length");
    }
    if (ids_.empty()) throw Error(ErrorCode::EmptySpace);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (!seen.insert(ids_[i]).second) {
        throw Error(ErrorCode::DuplicatePointId, ids_[i]);
      }
      if (!std::isfinite(weights_[i]) || !(weights_[i] > 0.0)) {
        throw Error(ErrorCode::NonPositiveWeight, "point " + ids_[i]);
      }
    }
  }

  /// Anonymous points labelled "u0", "u1", ...
  explicit MeasureSpace(const std::vector<double>& weights)
      : MeasureSpace(default_ids(weights.size()), weights) {}

  std::size_t size() const noexcept { return weights_.size(); }
  double weight(PointIndex i) const { return weights_.at(i); }
  std::span<const double> weights() const noexcept { return weights_; }
  const std::string& id(PointIndex i) const { return ids_.at(i); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  double total_mass() const {
    return std::accumulate(weights_.begin(), weights_.end(), 0.0);
  }

  double measure(const PointSet& set) const {
    double m = 0.0;
    for (PointIndex i : set) m += weights_.at(i);
    return m;
  }

 private:
  static std::vector<std::string> default_ids(std::size_t n) {
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ids.push_back("u" + std::to_string(i));
    return ids;
  }

  std::vector<std::string> ids_;
  std::vector<double> weights_;
};

/// Chain of point-index sets in declared (smallest-first) order.
struct OrderedCoreSpec {
  std::vector<PointSet> chain;
};

/// One value per point of a MeasureSpace.
struct FunctionOnU {
  std::vector<double> values;

  FunctionOnU() = default;
  explicit FunctionOnU(std::vector<double> v) : values(std::move(v)) {}
  FunctionOnU(std::initializer_list<double> v) : values(v) {}

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  bool operator==(const FunctionOnU&) const = default;
};

inline FunctionOnU absolute(const FunctionOnU& f) {
  FunctionOnU out = f;
  for (double& v : out.values) v = std::fabs(v);
  return out;
}

/// Atoms A_j \ A_{j-1} of a validated chain. Only validate_core builds these.
class CoreAtoms {
 public:
  std::size_t k() const noexcept { return atom_weights_.size(); }
  std::size_t point_count() const noexcept { return atom_of_point_.size(); }

  AtomIndex atom_of_point(PointIndex u) const {
    if (u >= atom_of_point_.size()) {
      throw Error(ErrorCode::IndexOutOfRange, "point " + std::to_string(u));
    }
    return atom_of_point_[u];
  }
  std::span<const AtomIndex> atom_of_point() const noexcept { return atom_of_point_; }
  std::span<const double> atom_weights() const noexcept { return atom_weights_; }
  /// gamma_1 < ... < gamma_k, the measures of the nonempty chain sets.
  std::span<const double> cumulative_measures() const noexcept { return cumulative_; }
  const PointSet& points_in_atom(AtomIndex j) const { return members_.at(j); }

  /// Points of chain set A_j, j = 0..k (A_0 is empty).
  PointSet chain_set(std::size_t j) const {
    PointSet out;
    for (std::size_t a = 0; a < j && a < members_.size(); ++a) {
      out.insert(out.end(), members_[a].begin(), members_[a].end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  friend CoreAtoms validate_core(const MeasureSpace&, const OrderedCoreSpec&);
  CoreAtoms() = default;

  std::vector<AtomIndex> atom_of_point_;
  std::vector<double> atom_weights_;
  std::vector<double> cumulative_;
  std::vector<PointSet> members_;
};

namespace detail {

inline PointSet normalized(const PointSet& s, std::size_t n) {
  PointSet out = s;
  for (PointIndex i : out) {
    if (i >= n) throw Error(ErrorCode::IndexOutOfRange, "point " + std::to_string(i));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

inline CoreAtoms validate_core(const MeasureSpace& space, const OrderedCoreSpec& spec) {
  const std::size_t n = space.size();
  std::vector<PointSet> chain;
  chain.reserve(spec.chain.size());
  for (const auto& s : spec.chain) chain.push_back(detail::normalized(s, n));

  if (chain.empty() || !chain.front().empty()) {
    throw Error(ErrorCode::EmptyFirstMissing);
  }
  for (std::size_t i = 0; i < chain.size(); ++i) {
    for (std::size_t j = i + 1; j < chain.size(); ++j) {
      if (chain[i] == chain[j]) {
        throw Error(ErrorCode::DuplicateChainSet,
                    "sets " + std::to_string(i) + " and " + std::to_string(j));
      }
    }
  }
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (!std::includes(chain[i + 1].begin(), chain[i + 1].end(), chain[i].begin(),
                       chain[i].end())) {
      throw Error(ErrorCode::NotNested,
                  "set " + std::to_string(i) + " is not contained in set " +
                      std::to_string(i + 1));
    }
  }
  if (chain.back().size() != n) {
    throw Error(ErrorCode::NotFull, "last chain set misses " +
                                        std::to_string(n - chain.back().size()) +
                                        " point(s)");
  }

  CoreAtoms atoms;
  const std::size_t k = chain.size() - 1;
  atoms.atom_of_point_.assign(n, 0);
  atoms.members_.resize(k);
  double running = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    PointSet diff;
    std::set_difference(chain[j + 1].begin(), chain[j + 1].end(), chain[j].begin(),
                        chain[j].end(), std::back_inserter(diff));
    double w = 0.0;
    for (PointIndex u : diff) {
      atoms.atom_of_point_[u] = j;
      w += space.weight(u);
    }
    running += w;
    atoms.members_[j] = std::move(diff);
    atoms.atom_weights_.push_back(w);
    atoms.cumulative_.push_back(running);
  }
  return atoms;
}

/// u <=_A v: every chain set containing v also contains u.
inline bool order_leq(const CoreAtoms& atoms, PointIndex u, PointIndex v) {
  return atoms.atom_of_point(u) <= atoms.atom_of_point(v);
}

/// Nonnegative, constant on atoms, nonincreasing in atom index. `tol` is an
/// absolute slack on both the constancy and the monotonicity comparisons.
inline bool is_core_decreasing(const CoreAtoms& atoms, const FunctionOnU& f,
                               double tol = 0.0) {
  if (f.size() != atoms.point_count()) return false;
  double previous = 0.0;
  for (AtomIndex j = 0; j < atoms.k(); ++j) {
    const auto& pts = atoms.points_in_atom(j);
    const double v = f[pts.front()];
    if (!std::isfinite(v) || v < -tol) return false;
    for (PointIndex u : pts) {
      if (std::fabs(f[u] - v) > tol) return false;
    }
    if (j > 0 && v > previous + tol) return false;
    previous = v;
  }
  return true;
}

/// Canonical maximal chain with the same order relation. In the finite model
/// this only drops repeated sets.
inline OrderedCoreSpec enrich(const MeasureSpace& space, const OrderedCoreSpec& spec) {
  OrderedCoreSpec out;
  for (const auto& s : spec.chain) {
    PointSet norm = detail::normalized(s, space.size());
    if (std::find(out.chain.begin(), out.chain.end(), norm) == out.chain.end()) {
      out.chain.push_back(std::move(norm));
    }
  }
  (void)validate_core(space, out);
  return out;
}

/// {0} together with the measures of the nonempty chain sets.
inline std::vector<double> gamma_set(const CoreAtoms& atoms) {
  std::vector<double> g{0.0};
  g.insert(g.end(), atoms.cumulative_measures().begin(), atoms.cumulative_measures().end());
  return g;
}

/// Theta(A_j) = integral of f over chain set A_j, for j = 0..k.
inline std::vector<double> chain_integrals(const MeasureSpace& space, const CoreAtoms& atoms,
                                           const FunctionOnU& f) {
  if (f.size() != space.size()) throw Error(ErrorCode::LengthMismatch);
  std::vector<double> theta{0.0};
  double running = 0.0;
  for (AtomIndex j = 0; j < atoms.k(); ++j) {
    for (PointIndex u : atoms.points_in_atom(j)) running += f[u] * space.weight(u);
    theta.push_back(running);
  }
  return theta;
}

/// Replaces U by the union of the chain. Returns the restricted space and
/// chain together with the original index of every kept point.
struct Restriction {
  MeasureSpace space;
  OrderedCoreSpec spec;
  std::vector<PointIndex> kept;

  FunctionOnU restrict(const FunctionOnU& f) const {
    FunctionOnU out;
    for (PointIndex u : kept) out.values.push_back(f.values.at(u));
    return out;
  }
};

inline Restriction restrict_to_union(const MeasureSpace& space, const OrderedCoreSpec& spec) {
  std::set<PointIndex> uni;
  for (const auto& s : spec.chain) {
    for (PointIndex u : detail::normalized(s, space.size())) uni.insert(u);
  }
  if (uni.empty()) throw Error(ErrorCode::EmptySpace, "chain covers no points");
  std::vector<PointIndex> kept(uni.begin(), uni.end());
  std::vector<std::size_t> remap(space.size(), space.size());
  std::vector<std::string> ids;
  std::vector<double> weights;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    remap[kept[i]] = i;
    ids.push_back(space.id(kept[i]));
    weights.push_back(space.weight(kept[i]));
  }
  OrderedCoreSpec out;
  for (const auto& s : spec.chain) {
    PointSet t;
    for (PointIndex u : detail::normalized(s, space.size())) t.push_back(remap[u]);
    out.chain.push_back(std::move(t));
  }
  return Restriction{MeasureSpace(std::move(ids), std::move(weights)), std::move(out),
                     std::move(kept)};
}

}  // namespace downcore
