#pragma once

/// \file
/// Slow, independent reference computations used to certify the fast paths.
/// Nothing here calls the level function, the majorant, the rearrangement or
/// the K-functional formulas; the oracles work from definitions.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "downcore/core_space.hpp"
#include "downcore/kfunc.hpp"
#include "downcore/norms.hpp"

namespace downcore::oracle {

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

inline constexpr std::size_t kMaxPballAtoms = 6;
inline constexpr std::size_t kMaxLpAtoms = 5;
inline constexpr std::size_t kMaxExhaustivePoints = 4;

namespace detail {

inline void check_deadline(const Deadline& deadline) {
  if (deadline && std::chrono::steady_clock::now() > *deadline) {
    throw Error(ErrorCode::DeadlineExceeded);
  }
}

/// Integral of |f| over each atom, summed point by point.
inline std::vector<double> atom_abs_integrals(const MeasureSpace& space, const CoreAtoms& atoms,
                                              const FunctionOnU& f) {
  std::vector<double> v(atoms.k(), 0.0);
  for (PointIndex u = 0; u < space.size(); ++u) {
    v[atoms.atom_of_point(u)] += std::fabs(f[u]) * space.weight(u);
  }
  return v;
}

/// Weighted pool-adjacent-violators projection onto nonincreasing
/// sequences, followed by clamping at zero.
inline std::vector<double> antitonic_projection(const std::vector<double>& y,
                                                const std::vector<double>& w) {
  struct Pool {
    double sum;
    double weight;
    std::size_t count;
  };
  std::vector<Pool> pools;
  for (std::size_t i = 0; i < y.size(); ++i) {
    pools.push_back({y[i] * w[i], w[i], 1});
    while (pools.size() >= 2) {
      const Pool& hi = pools[pools.size() - 2];
      const Pool& lo = pools.back();
      if (hi.sum / hi.weight >= lo.sum / lo.weight) break;
      Pool merged{hi.sum + lo.sum, hi.weight + lo.weight, hi.count + lo.count};
      pools.pop_back();
      pools.back() = merged;
    }
  }
  std::vector<double> out;
  for (const auto& p : pools) {
    out.insert(out.end(), p.count, std::max(0.0, p.sum / p.weight));
  }
  return out;
}

struct RatioProblem {
  std::vector<double> v;  // linear coefficients
  std::vector<double> m;  // atom masses
  double q;               // finite exponent > 1

  double norm(const std::vector<double>& g) const {
    double s = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) s += m[j] * std::pow(std::max(g[j], 0.0), q);
    return std::pow(s, 1.0 / q);
  }
  double ratio(const std::vector<double>& g) const {
    const double n = norm(g);
    if (!(n > 0.0)) return 0.0;
    double s = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) s += v[j] * g[j];
    return s / n;
  }
  void normalize(std::vector<double>& g) const {
    const double n = norm(g);
    if (n > 0.0) {
      for (double& x : g) x /= n;
    }
  }
};

inline std::vector<double> from_increments(const std::vector<double>& c) {
  std::vector<double> g(c.size(), 0.0);
  double run = 0.0;
  for (std::size_t j = c.size(); j-- > 0;) {
    run += c[j];
    g[j] = run;
  }
  return g;
}

}  // namespace detail

/// sup of sum_j v_j g_j over g_1 >= ... >= g_k >= 0 with weighted
/// p_dual-norm at most 1, where v_j is the integral of |f| over atom j.
///
/// p_dual in {1, inf}: the feasible set is a polytope and its vertices are
/// enumerated exactly. Otherwise: projected gradient ascent on the
/// scale-invariant ratio <v,g>/||g||, then a coordinate pattern search over
/// the nonnegative increments of g.
inline double sup_decreasing_pball(const MeasureSpace& space, const CoreAtoms& atoms,
                                   const FunctionOnU& f, const Exponent& p_dual,
                                   const Deadline& deadline = std::nullopt) {
  const std::size_t k = atoms.k();
  if (k > kMaxPballAtoms) throw Error(ErrorCode::TooManyAtoms, std::to_string(k));
  if (f.size() != space.size()) throw Error(ErrorCode::LengthMismatch);
  const auto v = detail::atom_abs_integrals(space, atoms, f);
  const std::vector<double> m(atoms.atom_weights().begin(), atoms.atom_weights().end());

  if (p_dual.is_infinite()) {
    // vertices: indicators of A_0..A_k
    double best = 0.0, run = 0.0;
    for (double vj : v) best = std::max(best, run += vj);
    return best;
  }
  if (p_dual.is_one()) {
    // vertices: 0 and chi_{A_j} / mu(A_j)
    double best = 0.0, run = 0.0, mass = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      run += v[j];
      mass += m[j];
      best = std::max(best, run / mass);
    }
    return best;
  }

  detail::RatioProblem prob{v, m, p_dual.value()};
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, x);
  if (vmax == 0.0) return 0.0;

  std::vector<double> best_g;
  double best = -1.0;
  auto consider = [&](std::vector<double> g) {
    const double r = prob.ratio(g);
    if (r > best) {
      best = r;
      best_g = std::move(g);
    }
  };
  for (std::size_t j = 1; j <= k; ++j) {
    std::vector<double> g(k, 0.0);
    std::fill(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(j), 1.0);
    consider(g);
  }

  // Projected gradient ascent in the m-weighted geometry.
  std::vector<double> g = best_g;
  prob.normalize(g);
  double current = prob.ratio(g);
  std::vector<double> u(k);
  for (std::size_t j = 0; j < k; ++j) u[j] = v[j] / m[j];
  double L = 0.0;
  for (double x : u) L = std::max(L, x);
  double step = 1.0 / L;
  for (int iter = 0; iter < 10000 && step > 1e-14 / L; ++iter) {
    if (iter % 256 == 0) detail::check_deadline(deadline);
    std::vector<double> trial(k);
    for (std::size_t j = 0; j < k; ++j) {
      const double grad = u[j] - current * std::pow(std::max(g[j], 0.0), prob.q - 1.0);
      trial[j] = g[j] + step * grad;
    }
    trial = detail::antitonic_projection(trial, m);
    prob.normalize(trial);
    const double r = prob.ratio(trial);
    if (r > current) {
      g = std::move(trial);
      current = r;
      step *= 1.5;
    } else {
      step *= 0.5;
    }
  }
  consider(g);

  // Pattern search on increments c_j >= 0, starting at 1/200 of the scale.
  std::vector<double> c(k);
  {
    std::vector<double> start = best_g;
    prob.normalize(start);
    for (std::size_t j = 0; j < k; ++j) c[j] = start[j] - (j + 1 < k ? start[j + 1] : 0.0);
  }
  double cur = prob.ratio(detail::from_increments(c));
  double scale = 0.0;
  for (double x : c) scale += x;
  for (double h = scale / 200.0; h > 1e-13 * scale;) {
    detail::check_deadline(deadline);
    bool improved = false;
    for (std::size_t j = 0; j < k; ++j) {
      for (double dir : {1.0, -1.0}) {
        std::vector<double> trial = c;
        trial[j] = std::max(0.0, trial[j] + dir * h);
        const double r = prob.ratio(detail::from_increments(trial));
        if (r > cur) {
          c = std::move(trial);
          cur = r;
          improved = true;
        }
      }
    }
    if (!improved) h *= 0.5;
  }
  consider(detail::from_increments(c));
  return best;
}

/// max of integral |f| h over core decreasing h subject to
/// integral_A h <= integral_A g for every chain set A. Solved as a linear
/// program in the atom values of h by enumerating every basis of k active
/// constraints out of the 2k (monotonicity, h_k >= 0, cumulative).
inline double level_defining_sup(const MeasureSpace& space, const CoreAtoms& atoms,
                                 const FunctionOnU& f, const FunctionOnU& g,
                                 const Deadline& deadline = std::nullopt) {
  const std::size_t k = atoms.k();
  if (k > kMaxLpAtoms) throw Error(ErrorCode::TooManyAtoms, std::to_string(k));
  if (f.size() != space.size() || g.size() != space.size()) throw Error(ErrorCode::LengthMismatch);
  double gscale = 0.0;
  for (double x : g.values) gscale = std::max(gscale, std::fabs(x));
  if (!is_core_decreasing(atoms, g, 1e-12 * std::max(1.0, gscale))) {
    throw Error(ErrorCode::GNotDecreasing);
  }

  const auto c = detail::atom_abs_integrals(space, atoms, f);  // objective: sum c_j h_j
  std::vector<double> w(k, 0.0), G(k, 0.0);
  for (PointIndex u = 0; u < space.size(); ++u) {
    const AtomIndex j = atoms.atom_of_point(u);
    w[j] += space.weight(u);
    G[j] += g[u] * space.weight(u);
  }
  for (std::size_t j = 1; j < k; ++j) G[j] += G[j - 1];

  // Rows a . h <= b.
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (std::size_t j = 0; j + 1 < k; ++j) {
    std::vector<double> row(k, 0.0);
    row[j] = -1.0;
    row[j + 1] = 1.0;
    A.push_back(row);
    b.push_back(0.0);
  }
  {
    std::vector<double> row(k, 0.0);
    row[k - 1] = -1.0;
    A.push_back(row);
    b.push_back(0.0);
  }
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> row(k, 0.0);
    for (std::size_t i = 0; i <= j; ++i) row[i] = w[i];
    A.push_back(row);
    b.push_back(G[j]);
  }
  const std::size_t rows = A.size();
  double bscale = 1.0;
  for (double x : b) bscale = std::max(bscale, std::fabs(x));

  double best = 0.0;  // h = 0 is feasible
  std::vector<std::size_t> pick(k);
  // Iterate over all k-subsets of rows via a bitmask.
  for (std::uint32_t mask = 0; mask < (1u << rows); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    if ((mask & 0xff) == 0) detail::check_deadline(deadline);
    std::size_t n = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      if (mask & (1u << r)) pick[n++] = r;
    }
    // Gaussian elimination with partial pivoting on the k x k system.
    std::vector<std::vector<double>> M(k, std::vector<double>(k + 1));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) M[i][j] = A[pick[i]][j];
      M[i][k] = b[pick[i]];
    }
    bool singular = false;
    for (std::size_t col = 0; col < k && !singular; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < k; ++r) {
        if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
      }
      if (std::fabs(M[piv][col]) < 1e-12) {
        singular = true;
        break;
      }
      std::swap(M[piv], M[col]);
      for (std::size_t r = 0; r < k; ++r) {
        if (r == col) continue;
        const double factor = M[r][col] / M[col][col];
        for (std::size_t j = col; j <= k; ++j) M[r][j] -= factor * M[col][j];
      }
    }
    if (singular) continue;
    std::vector<double> h(k);
    for (std::size_t i = 0; i < k; ++i) h[i] = M[i][k] / M[i][i];

    bool feasible = true;
    for (std::size_t r = 0; r < rows && feasible; ++r) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < k; ++j) lhs += A[r][j] * h[j];
      if (lhs > b[r] + 1e-10 * bscale) feasible = false;
    }
    if (!feasible) continue;
    double value = 0.0;
    for (std::size_t j = 0; j < k; ++j) value += c[j] * h[j];
    best = std::max(best, value);
  }
  return best;
}

namespace detail {

/// Norms computed from their definitions on at most four points.
struct DefinitionNorms {
  const MeasureSpace& space;
  const CoreAtoms& atoms;
  std::vector<PointSet> chain;  // nonempty chain sets
  std::vector<double> chain_mass;

  DefinitionNorms(const MeasureSpace& s, const CoreAtoms& a) : space(s), atoms(a) {
    for (std::size_t j = 1; j <= a.k(); ++j) {
      chain.push_back(a.chain_set(j));
      chain_mass.push_back(s.measure(chain.back()));
    }
  }

  double l1(const std::vector<double>& h) const {
    double s = 0.0;
    for (std::size_t u = 0; u < h.size(); ++u) s += std::fabs(h[u]) * space.weight(u);
    return s;
  }
  double linf(const std::vector<double>& h) const {
    double s = 0.0;
    for (double x : h) s = std::max(s, std::fabs(x));
    return s;
  }
  double linf_down(const std::vector<double>& h) const {
    double best = 0.0;
    for (std::size_t j = 0; j < chain.size(); ++j) {
      double s = 0.0;
      for (PointIndex u : chain[j]) s += std::fabs(h[u]) * space.weight(u);
      best = std::max(best, s / chain_mass[j]);
    }
    return best;
  }
  /// L1 norm of the pointwise least decreasing majorant:
  /// h~(u) = max{|h(v)| : u <=_A v}.
  double l1_tilde(const std::vector<double>& h) const {
    double s = 0.0;
    for (std::size_t u = 0; u < h.size(); ++u) {
      double top = 0.0;
      for (std::size_t v = 0; v < h.size(); ++v) {
        if (order_leq(atoms, u, v)) top = std::max(top, std::fabs(h[v]));
      }
      s += top * space.weight(u);
    }
    return s;
  }
};

}  // namespace detail

/// Upper bound on how far the grid minimum can sit above the true infimum:
/// moving each f0(u) by half a grid step changes either norm by at most
/// mu(U) or 1 times that step.
inline double k_exhaustive_resolution(const MeasureSpace& space, const FunctionOnU& f, double t,
                                      std::size_t grid_per_point) {
  double fmax = 0.0;
  for (double x : f.values) fmax = std::max(fmax, std::fabs(x));
  return (space.total_mass() + t) * fmax / (2.0 * static_cast<double>(grid_per_point));
}

/// Minimum of ||f0||_{X0} + t ||f1||_{X1} over nonnegative splits
/// f0 + f1 = |f| on a per-point grid, for every t in `ts` in one sweep.
inline std::vector<double> k_exhaustive_many(const MeasureSpace& space, const CoreAtoms& atoms,
                                             const FunctionOnU& f, const std::vector<double>& ts,
                                             std::size_t grid_per_point, Couple couple,
                                             const Deadline& deadline = std::nullopt) {
  const std::size_t n = space.size();
  if (n > kMaxExhaustivePoints) throw Error(ErrorCode::TooManyPoints, std::to_string(n));
  if (f.size() != n) throw Error(ErrorCode::LengthMismatch);
  if (grid_per_point == 0) throw Error(ErrorCode::EmptyGrid);
  for (double t : ts) {
    if (!(t >= 0.0)) throw Error(ErrorCode::NegativeT);
  }
  const detail::DefinitionNorms norms(space, atoms);
  const std::size_t G = grid_per_point;
  std::vector<double> best(ts.size(), std::numeric_limits<double>::infinity());
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> f0(n), f1(n);
  std::size_t visited = 0;
  while (true) {
    if ((++visited & 0xffff) == 0) detail::check_deadline(deadline);
    for (std::size_t u = 0; u < n; ++u) {
      const double a = std::fabs(f[u]);
      f0[u] = a * static_cast<double>(idx[u]) / static_cast<double>(G);
      f1[u] = a - f0[u];
    }
    double first = 0.0, second = 0.0;
    switch (couple) {
      case Couple::L1Linf:
        first = norms.l1(f0);
        second = norms.linf(f1);
        break;
      case Couple::L1Dinf:
        first = norms.l1(f0);
        second = norms.linf_down(f1);
        break;
      case Couple::TL1Linf:
        first = norms.l1_tilde(f0);
        second = norms.linf(f1);
        break;
    }
    for (std::size_t i = 0; i < ts.size(); ++i) best[i] = std::min(best[i], first + ts[i] * second);

    std::size_t pos = 0;
    while (pos < n && idx[pos] == G) idx[pos++] = 0;
    if (pos == n) break;
    ++idx[pos];
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] == 0.0) best[i] = 0.0;
  }
  return best;
}

inline double k_exhaustive(const MeasureSpace& space, const CoreAtoms& atoms, const FunctionOnU& f,
                           double t, std::size_t grid_per_point, Couple couple,
                           const Deadline& deadline = std::nullopt) {
  return k_exhaustive_many(space, atoms, f, {t}, grid_per_point, couple, deadline).front();
}

}  // namespace downcore::oracle
