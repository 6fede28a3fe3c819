#pragma once

/// \file
/// Property suites over random instances. Each criterion pairs an instance
/// generator with a per-case check; failures are shrunk by deleting points
/// and re-emitted as a standalone instance for replay.

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "downcore/constructions.hpp"
#include "downcore/generators.hpp"
#include "downcore/instance.hpp"
#include "downcore/kfunc.hpp"
#include "downcore/norms.hpp"
#include "downcore/oracle.hpp"
#include "downcore/transfer.hpp"

namespace downcore::checks {

/// Outcome of one case: the worst observed error and what was allowed for it.
struct CaseResult {
  double error = 0.0;
  double allowed = 0.0;
  std::string detail;

  bool ok() const { return error <= allowed; }

  /// Keep whichever comparison is closest to (or furthest past) its bound.
  void record(double err, double tol, const std::string& what) {
    const double ratio = err / (tol > 0 ? tol : 1e-300);
    const double current = error / (allowed > 0 ? allowed : 1e-300);
    if (detail.empty() || ratio > current) {
      error = err;
      allowed = tol;
      detail = what;
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  std::string suite;  // transfer | level | norms | kfunc
  std::size_t default_cases;
  double runtime_budget_s;  // 0 means no budget
  std::function<Instance(SplitMix64&)> generate;
  std::function<CaseResult(const Instance&, SplitMix64&)> check;
};

struct Report {
  int id = 0;
  std::string title;
  std::size_t cases = 0;
  bool passed = true;
  bool runtime_ok = true;
  double worst_error = 0.0;
  double worst_allowed = 0.0;
  std::string worst_detail;
  double elapsed_s = 0.0;
  std::optional<json> failing_instance;
  std::string failing_detail;
};

namespace detail {

inline double rel_err(double a, double b) {
  return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

inline double max_rel_err(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, rel_err(a[i], b[i]));
  return e;
}

inline double l1_lambda(const TailoredMeasure& m, const StepFunction& phi) {
  double s = 0.0;
  for (std::size_t j = 0; j < m.k(); ++j) s += std::fabs(phi[j]) * m.masses()[j];
  return s;
}

inline double linf(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::fabs(x));
  return s;
}

inline double integral(const MeasureSpace& space, const FunctionOnU& f) {
  double s = 0.0;
  for (std::size_t u = 0; u < space.size(); ++u) s += f[u] * space.weight(u);
  return s;
}

inline Instance with_f(Instance inst, FunctionOnU f) {
  inst.functions.emplace("f", std::move(f));
  return inst;
}

/// Instance with point `drop` removed; nullopt when nothing would remain.
inline std::optional<Instance> without_point(const Instance& inst, PointIndex drop) {
  const std::size_t n = inst.space.size();
  if (n <= 1) return std::nullopt;
  std::vector<std::string> ids;
  std::vector<double> weights;
  for (PointIndex u = 0; u < n; ++u) {
    if (u == drop) continue;
    ids.push_back(inst.space.id(u));
    weights.push_back(inst.space.weight(u));
  }
  OrderedCoreSpec spec;
  for (const auto& s : inst.spec.chain) {
    PointSet t;
    for (PointIndex u : s) {
      if (u != drop) t.push_back(u > drop ? u - 1 : u);
    }
    if (spec.chain.empty() || spec.chain.back() != t) spec.chain.push_back(std::move(t));
  }
  std::map<std::string, FunctionOnU> functions;
  for (const auto& [name, f] : inst.functions) {
    FunctionOnU g;
    for (PointIndex u = 0; u < n; ++u) {
      if (u != drop) g.values.push_back(f[u]);
    }
    functions.emplace(name, std::move(g));
  }
  return Instance{MeasureSpace(std::move(ids), std::move(weights)), std::move(spec),
                  std::move(functions)};
}

inline CaseResult run_guarded(const Criterion& c, const Instance& inst, SplitMix64 rng) {
  try {
    return c.check(inst, rng);
  } catch (const std::exception& e) {
    CaseResult r;
    r.error = std::numeric_limits<double>::infinity();
    r.allowed = 0.0;
    r.detail = std::string("exception: ") + e.what();
    return r;
  }
}

inline Instance shrink(const Criterion& c, Instance inst, const SplitMix64& rng) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (PointIndex u = 0; u < inst.space.size(); ++u) {
      auto smaller = without_point(inst, u);
      if (!smaller) break;
      if (!run_guarded(c, *smaller, rng).ok()) {
        inst = std::move(*smaller);
        progress = true;
        break;
      }
    }
  }
  return inst;
}

inline std::vector<double> random_ts(SplitMix64& rng, double total_mass, std::size_t count) {
  std::vector<double> ts;
  for (std::size_t i = 0; i < count; ++i) ts.push_back(rng.uniform(0.01, 1.25 * total_mass));
  return ts;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Generators

inline Instance gen_signed(SplitMix64& rng, const gen::Shape& shape) {
  Instance inst = gen::instance(rng, shape);
  const std::size_t n = inst.space.size();
  return detail::with_f(std::move(inst), gen::function(rng, n));
}

// ---------------------------------------------------------------------------
// Per-case checks

inline CaseResult check_l1_down(const Instance& inst, SplitMix64&) {
  const auto atoms = validate_core(inst.space, inst.spec);
  const auto& f = inst.functions.at("f");
  CaseResult r;
  const double down = down_norm(inst.space, atoms, f, Exponent::finite(1.0));
  const double l1 = lp_norm(inst.space, f, Exponent::finite(1.0));
  r.record(std::fabs(down - l1), 1e-12, "down_norm(f,1) vs lp_norm(f,1)");
  const double sup = oracle::sup_decreasing_pball(inst.space, atoms, f, Exponent::infinity());
  r.record(detail::rel_err(down, sup), 1e-12, "down_norm(f,1) vs oracle sup with g<=1 (relative)");
  return r;
}

inline CaseResult check_linf_down(const Instance& inst, SplitMix64&) {
  const auto atoms = validate_core(inst.space, inst.spec);
  const auto& f = inst.functions.at("f");
  CaseResult r;
  const double down = down_norm(inst.space, atoms, f, Exponent::infinity());
  const double sup = oracle::sup_decreasing_pball(inst.space, atoms, f, Exponent::finite(1.0));
  r.record(std::fabs(down - sup), 1e-9, "down_norm(f,inf) vs oracle sup_decreasing_pball(f,1)");
  return r;
}

inline CaseResult check_level_defining_sup(const Instance& inst, SplitMix64& rng) {
  const auto atoms = validate_core(inst.space, inst.spec);
  const auto& f = inst.functions.at("f");
  const auto level = level_function(inst.space, atoms, f).level;
  CaseResult r;
  for (int i = 0; i < 20; ++i) {
    const FunctionOnU g = q_map(inst.space, atoms, gen::decreasing_step(rng, atoms.k()));
    double lhs = 0.0;
    for (std::size_t u = 0; u < inst.space.size(); ++u) lhs += level[u] * g[u] * inst.space.weight(u);
    const double sup = oracle::level_defining_sup(inst.space, atoms, f, g);
    r.record(std::fabs(lhs - sup), 1e-6, "integral f^o g vs LP sup, g #" + std::to_string(i));
  }
  return r;
}

inline CaseResult check_downlev_duality(const Instance& inst, SplitMix64&) {
  const auto atoms = validate_core(inst.space, inst.spec);
  const auto& f = inst.functions.at("f");
  CaseResult r;
  for (double p : {1.5, 2.0, 3.0}) {
    const Exponent e = Exponent::finite(p);
    const double down = down_norm(inst.space, atoms, f, e);
    const double sup = oracle::sup_decreasing_pball(inst.space, atoms, f, e.conjugate());
    r.record(std::fabs(down - sup), 1e-4, "down_norm(f,p) vs oracle sup, p=" + e.to_string());
  }
  return r;
}

inline CaseResult check_k_level(const Instance& inst, SplitMix64& rng) {
  const auto& space = inst.space;
  const auto atoms = validate_core(space, inst.spec);
  const auto& f = inst.functions.at("f");
  const auto measure = tailored_measure(atoms);
  const StepFunction rf = r_map(space, atoms, absolute(f));
  const FunctionOnU qrf = q_map(space, atoms, rf);
  const auto grid = decomposition_gamma_grid(space, atoms, f);
  CaseResult r;
  for (double t : detail::random_ts(rng, space.total_mass(), 10)) {
    const std::string at = " at t=" + std::to_string(t);
    const double fast = k_l1_dinf(space, atoms, f, t);
    const double via_d = k_via_decomposition(space, atoms, f, t, grid);
    r.record(std::fabs(fast - via_d), 1e-6, "k_l1_dinf vs k_via_decomposition" + at);
    r.record(detail::rel_err(fast, k_l1_dinf(space, atoms, qrf, t)), 1e-12,
             "k_l1_dinf(f) vs k_l1_dinf(QRf) (relative)" + at);
    r.record(detail::rel_err(fast, k_halfline_l1_dinf(measure, rf, t)), 1e-12,
             "k_l1_dinf(f) vs half-line K of Rf (relative)" + at);
  }
  return r;
}

inline constexpr std::size_t kExhaustiveGrid = 32;

inline CaseResult check_k_tilde(const Instance& inst, SplitMix64& rng) {
  const auto& space = inst.space;
  const auto atoms = validate_core(space, inst.spec);
  const auto& g = inst.functions.at("f");
  const auto measure = tailored_measure(atoms);
  CaseResult r;
  const auto ts = detail::random_ts(rng, space.total_mass(), 4);
  const auto brute =
      oracle::k_exhaustive_many(space, atoms, g, ts, kExhaustiveGrid, Couple::TL1Linf);
  // Atom-constant companion: the three-term chain collapses to equalities.
  const FunctionOnU h = q_map(space, atoms, gen::step(rng, atoms.k()));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    const std::string at = " at t=" + std::to_string(t);
    const double fast = k_tl1_linf(space, atoms, g, t);
    const double res = oracle::k_exhaustive_resolution(space, g, t, kExhaustiveGrid);
    // Grid splits are feasible, so the exact value can never exceed them.
    r.record(std::max(0.0, fast - brute[i]), 1e-9 * std::max(1.0, fast),
             "k_tl1_linf above a feasible split" + at);
    r.record(brute[i] - fast, 2.0 * res, "exhaustive split minimum vs k_tl1_linf" + at);

    const double k_qr = k_tl1_linf(space, atoms, q_map(space, atoms, r_map(space, atoms, absolute(g))), t);
    const double k_half = k_halfline_tl1_linf(measure, r_map(space, atoms, absolute(g)), t);
    r.record(std::max(0.0, k_qr - k_half) / std::max(1.0, fast), 1e-12, "K(QRg) <= K(Rg)" + at);
    r.record(std::max(0.0, k_half - fast) / std::max(1.0, fast), 1e-12, "K(Rg) <= K(g)" + at);

    const double h_fast = k_tl1_linf(space, atoms, h, t);
    const double h_qr = k_tl1_linf(space, atoms, q_map(space, atoms, r_map(space, atoms, absolute(h))), t);
    const double h_half = k_halfline_tl1_linf(measure, r_map(space, atoms, absolute(h)), t);
    r.record(std::max(detail::rel_err(h_fast, h_qr), detail::rel_err(h_fast, h_half)), 1e-12,
             "three-term chain equality for atom-constant g" + at);
  }
  return r;
}

inline CaseResult check_transfer(const Instance& inst, SplitMix64& rng) {
  const auto& space = inst.space;
  const auto atoms = validate_core(space, inst.spec);
  const auto measure = tailored_measure(atoms);
  const std::size_t n = space.size(), k = atoms.k();
  const auto& f = inst.functions.at("f");
  const FunctionOnU fpos = absolute(f);
  const StepFunction phi = gen::step(rng, k);
  StepFunction phipos = phi;
  for (double& v : phipos.values) v = std::fabs(v);
  const StepFunction psi = gen::step(rng, k, true);
  const FunctionOnU g_atom = q_map(space, atoms, gen::step(rng, k, true));
  const double tol = 1e-12;
  CaseResult r;

  const StepFunction rf = r_map(space, atoms, f);
  const FunctionOnU qphi = q_map(space, atoms, phi);

  // Round trips.
  r.record(detail::max_rel_err(r_map(space, atoms, qphi).values, phi.values), tol, "RQphi = phi");
  r.record(detail::max_rel_err(q_map(space, atoms, r_map(space, atoms, g_atom)).values, g_atom.values),
           tol, "QRf = f for atom-constant f");

  // Pairing.
  {
    const FunctionOnU q = q_map(space, atoms, phipos);
    double lhs = 0.0;
    for (std::size_t u = 0; u < n; ++u) lhs += fpos[u] * q[u] * space.weight(u);
    const StepFunction rfp = r_map(space, atoms, fpos);
    double rhs = 0.0;
    for (std::size_t j = 0; j < k; ++j) rhs += rfp[j] * phipos[j] * measure.masses()[j];
    r.record(detail::rel_err(lhs, rhs), tol, "integral f Qphi dmu = integral Rf phi dlambda");
  }

  // Defining integral identities over chain sets.
  {
    const auto theta = chain_integrals(space, atoms, f);
    const auto gam = gamma_set(atoms);
    const auto qint = chain_integrals(space, atoms, qphi);
    for (std::size_t j = 1; j <= k; ++j) {
      r.record(detail::rel_err(integrate_lambda(measure, rf, gam[j]), theta[j]), tol,
               "integral of Rf over [0,gamma_j] = integral of f over A_j");
      r.record(detail::rel_err(qint[j], integrate_lambda(measure, phi, gam[j])), tol,
               "integral of Qphi over A_j = integral of phi over [0,gamma_j]");
    }
  }

  // Contractivity.
  {
    const double l1f = lp_norm(space, f, Exponent::finite(1.0));
    const double l1rf = detail::l1_lambda(measure, rf);
    r.record(std::max(0.0, l1rf - l1f) / std::max(1.0, l1f), tol, "||Rf||_1 <= ||f||_1");
    r.record(detail::rel_err(detail::l1_lambda(measure, r_map(space, atoms, fpos)),
                             lp_norm(space, fpos, Exponent::finite(1.0))),
             tol, "||Rf||_1 = ||f||_1 for f >= 0");
    const double linf_f = detail::linf(f.values);
    r.record(std::max(0.0, detail::linf(rf.values) - linf_f) / std::max(1.0, linf_f), tol,
             "||Rf||_inf <= ||f||_inf");
    const double l1phi = detail::l1_lambda(measure, phi);
    r.record(std::max(0.0, lp_norm(space, qphi, Exponent::finite(1.0)) - l1phi) / std::max(1.0, l1phi),
             tol, "||Qphi||_1 <= ||phi||_1");
    const double linf_phi = detail::linf(phi.values);
    r.record(std::max(0.0, detail::linf(qphi.values) - linf_phi) / std::max(1.0, linf_phi), tol,
             "||Qphi||_inf <= ||phi||_inf");
  }

  // Indicator images.
  for (std::size_t j = 1; j <= k; ++j) {
    FunctionOnU chi(std::vector<double>(n, 0.0));
    for (PointIndex u : atoms.chain_set(j)) chi[u] = 1.0;
    StepFunction interval(std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < j; ++i) interval[i] = 1.0;
    r.record(detail::max_rel_err(r_map(space, atoms, chi).values, interval.values), tol,
             "R chi_A = chi_[0,mu(A)]");
    r.record(detail::max_rel_err(q_map(space, atoms, interval).values, chi.values), tol,
             "Q chi_[0,mu(A)] = chi_A");
  }

  // Product rules.
  {
    FunctionOnU prod = fpos;
    for (std::size_t u = 0; u < n; ++u) prod[u] *= g_atom[u];
    const StepFunction lhs = r_map(space, atoms, prod);
    const StepFunction a = r_map(space, atoms, fpos), b = r_map(space, atoms, g_atom);
    std::vector<double> rhs(k);
    for (std::size_t j = 0; j < k; ++j) rhs[j] = a[j] * b[j];
    r.record(detail::max_rel_err(lhs.values, rhs), tol, "R(fg) = Rf Rg for atom-constant g");

    StepFunction pp = phipos;
    for (std::size_t j = 0; j < k; ++j) pp[j] *= psi[j];
    const FunctionOnU ql = q_map(space, atoms, pp);
    const FunctionOnU qa = q_map(space, atoms, phipos), qb = q_map(space, atoms, psi);
    std::vector<double> qr(n);
    for (std::size_t u = 0; u < n; ++u) qr[u] = qa[u] * qb[u];
    r.record(detail::max_rel_err(ql.values, qr), tol, "Q(phi psi) = Qphi Qpsi");
  }

  // Absolute value domination.
  {
    const StepFunction rabs = r_map(space, atoms, fpos);
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) worst = std::max(worst, std::fabs(rf[j]) - rabs[j]);
    r.record(std::max(0.0, worst), tol, "|Rf| <= R|f|");
    const FunctionOnU qabs = q_map(space, atoms, phipos);
    worst = 0.0;
    for (std::size_t u = 0; u < n; ++u) worst = std::max(worst, std::fabs(qphi[u]) - qabs[u]);
    r.record(std::max(0.0, worst), tol, "|Qphi| <= Q|phi|");
  }
  return r;
}

inline CaseResult check_decomposition_optimality(const Instance& inst, SplitMix64& rng) {
  const auto& space = inst.space;
  const auto atoms = validate_core(space, inst.spec);
  const FunctionOnU f = absolute(inst.functions.at("f"));
  CaseResult r;
  for (int s = 0; s < 10; ++s) {
    FunctionOnU f1 = f, finf = f;
    for (std::size_t u = 0; u < space.size(); ++u) {
      const double share = rng.chance(0.2) ? static_cast<double>(rng.below(2)) : rng.uniform();
      f1[u] = share * f[u];
      finf[u] = f[u] - f1[u];
    }
    const double gamma = lp_norm(space, f1, Exponent::finite(1.0));
    const auto piece = decompose_D(space, atoms, f, gamma);
    FunctionOnU df = f, rest = f;
    for (std::size_t u = 0; u < space.size(); ++u) {
      df[u] = piece.d[u] * f[u];
      rest[u] = (1.0 - piece.d[u]) * f[u];
    }
    const std::string which = " (split #" + std::to_string(s) + ")";
    r.record(std::max(0.0, lp_norm(space, df, Exponent::finite(1.0)) - gamma), 1e-12,
             "||D f||_1 <= ||f_1||_1" + which);
    r.record(std::max(0.0, down_norm_inf(space, atoms, rest).norm - down_norm_inf(space, atoms, finf).norm),
             1e-12, "||(1-D) f||_inf-down <= ||f_inf||_inf-down" + which);
  }
  return r;
}

inline CaseResult check_monotone_convergence(const Instance& inst, SplitMix64& rng) {
  const auto& space = inst.space;
  const auto atoms = validate_core(space, inst.spec);
  const FunctionOnU f3 = absolute(inst.functions.at("f"));
  FunctionOnU f2 = f3, f1 = f3;
  for (std::size_t u = 0; u < space.size(); ++u) {
    f2[u] = f3[u] * (rng.chance(0.3) ? 1.0 : rng.uniform());
    f1[u] = f2[u] * (rng.chance(0.3) ? 1.0 : rng.uniform());
  }
  const std::vector<FunctionOnU> seq{f1, f2, f3};
  CaseResult r;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    const auto lo = level_function(space, atoms, seq[i]).level;
    const auto hi = level_function(space, atoms, seq[i + 1]).level;
    const auto mlo = least_core_decreasing_majorant(space, atoms, seq[i]);
    const auto mhi = least_core_decreasing_majorant(space, atoms, seq[i + 1]);
    double worst_level = 0.0, worst_major = 0.0;
    for (std::size_t u = 0; u < space.size(); ++u) {
      worst_level = std::max(worst_level, lo[u] - hi[u]);
      worst_major = std::max(worst_major, mlo[u] - mhi[u]);
    }
    r.record(worst_level, 1e-12, "level f_n^o nondecreasing in n");
    r.record(worst_major, 1e-12, "majorant f_n~ nondecreasing in n");
  }
  return r;
}

/// Weights (1,2,1), chain {} < {u1} < {u1,u2} < U, f = (4,1,2).
inline Instance worked_instance() {
  MeasureSpace space({"u1", "u2", "u3"}, {1.0, 2.0, 1.0});
  OrderedCoreSpec spec{{{}, {0}, {0, 1}, {0, 1, 2}}};
  Instance inst{std::move(space), std::move(spec), {}};
  inst.functions.emplace("f", FunctionOnU{4.0, 1.0, 2.0});
  return inst;
}

/// Frozen values for the worked instance. Each is checked against the
/// library and against an oracle that does not share its code path.
inline CaseResult check_worked_instance(const Instance& inst, SplitMix64&) {
  const auto& space = inst.space;
  const auto atoms = validate_core(space, inst.spec);
  const auto& f = inst.functions.at("f");
  const std::vector<double> golden_level{4.0, 4.0 / 3.0, 4.0 / 3.0};
  const double golden_dinf = 4.0;
  const double golden_d2 = 8.0 / std::sqrt(3.0);
  const double golden_k2 = 16.0 / 3.0;
  const std::vector<double> golden_d5{1.0, 0.5, 0.0};
  CaseResult r;

  // f^o: library, and the LP oracle's chain integrals of f^o.
  r.record(detail::max_rel_err(level_function(space, atoms, f).level.values, golden_level), 1e-12,
           "f^o = (4, 4/3, 4/3)");
  {
    std::vector<double> cumulative;
    for (std::size_t j = 1; j <= atoms.k(); ++j) {
      FunctionOnU chi(std::vector<double>(space.size(), 0.0));
      for (PointIndex u : atoms.chain_set(j)) chi[u] = 1.0;
      cumulative.push_back(oracle::level_defining_sup(space, atoms, f, chi));
    }
    std::vector<double> from_oracle(space.size());
    for (PointIndex u = 0; u < space.size(); ++u) {
      const std::size_t j = atoms.atom_of_point(u);
      const double below = j == 0 ? 0.0 : cumulative[j - 1];
      from_oracle[u] = (cumulative[j] - below) / atoms.atom_weights()[j];
    }
    r.record(detail::max_rel_err(from_oracle, golden_level), 1e-9, "oracle f^o = (4, 4/3, 4/3)");
  }

  r.record(std::fabs(down_norm(space, atoms, f, Exponent::infinity()) - golden_dinf), 1e-12,
           "down_norm(f,inf) = 4");
  r.record(std::fabs(oracle::sup_decreasing_pball(space, atoms, f, Exponent::finite(1.0)) - golden_dinf),
           1e-12, "oracle down_norm(f,inf) = 4");

  r.record(std::fabs(down_norm(space, atoms, f, Exponent::finite(2.0)) - golden_d2), 1e-12,
           "down_norm(f,2) = 8/sqrt(3)");
  r.record(std::fabs(oracle::sup_decreasing_pball(space, atoms, f, Exponent::finite(2.0)) - golden_d2),
           1e-4, "oracle down_norm(f,2) = 8/sqrt(3)");

  r.record(std::fabs(k_l1_dinf(space, atoms, f, 2.0) - golden_k2), 1e-12, "K(f,2;L1,Linf-down) = 16/3");
  r.record(std::fabs(k_via_decomposition(space, atoms, f, 2.0) - golden_k2), 1e-12,
           "decomposition K(f,2) = 16/3");
  {
    const double brute = oracle::k_exhaustive(space, atoms, f, 2.0, 48, Couple::L1Dinf);
    const double res = oracle::k_exhaustive_resolution(space, f, 2.0, 48);
    r.record(std::fabs(brute - golden_k2), 2.0 * res, "exhaustive K(f,2) = 16/3");
  }

  const auto piece = decompose_D(space, atoms, f, 5.0);
  r.record(detail::max_rel_err(piece.d.values, golden_d5), 1e-12, "D_f(5) = (1, 1/2, 0)");
  r.record(std::fabs(detail::integral(space, FunctionOnU{piece.d[0] * f[0], piece.d[1] * f[1],
                                                         piece.d[2] * f[2]}) -
                     5.0),
           1e-12, "integral D_f(5) f = 5");
  return r;
}

// ---------------------------------------------------------------------------
// Registry

inline std::vector<Criterion> criteria() {
  const gen::Shape wide{1, 8, 5};
  const gen::Shape narrow{1, 8, 4};
  const gen::Shape tiny{1, 4, 4};
  auto signed_gen = [](gen::Shape s) {
    return [s](SplitMix64& rng) { return gen_signed(rng, s); };
  };
  std::vector<Criterion> out;
  out.push_back({1, "L1 down space has the L1 norm", "norms", 200, 1.0, signed_gen(wide), check_l1_down});
  out.push_back({2, "Linf down norm is the sup of chain means", "norms", 200, 0.0, signed_gen(wide),
                 check_linf_down});
  out.push_back({3, "level function realizes the defining supremum", "level", 200, 30.0,
                 signed_gen(wide), check_level_defining_sup});
  out.push_back({4, "Lp down norm equals the decreasing dual-ball supremum", "norms", 100, 0.0,
                 signed_gen(narrow), check_downlev_duality});
  out.push_back({5, "K(L1, Linf-down) equals the integral of (f^o)*", "kfunc", 100, 0.0,
                 signed_gen(wide), check_k_level});
  out.push_back({6, "K(L1-tilde, Linf) equals the integral of (g~)*", "kfunc", 100, 0.0,
                 signed_gen(tiny), check_k_tilde});
  out.push_back({7, "transfer map identities", "transfer", 500, 0.0, signed_gen(wide), check_transfer});
  out.push_back({8, "decomposition D_f(gamma) is optimal", "kfunc", 100, 0.0, signed_gen(wide),
                 check_decomposition_optimality});
  out.push_back({9, "monotone convergence of level and majorant", "level", 200, 0.0, signed_gen(wide),
                 check_monotone_convergence});
  out.push_back({10, "worked instance regression", "level", 1, 0.0,
                 [](SplitMix64&) { return worked_instance(); }, check_worked_instance});
  return out;
}

inline bool in_suite(const Criterion& c, const std::string& suite) {
  return suite == "all" || c.suite == suite;
}

/// Runs one criterion. `cases` overrides the default case count (the worked
/// instance always runs once).
inline Report run(const Criterion& c, std::uint64_t seed, std::optional<std::size_t> cases = std::nullopt) {
  Report rep;
  rep.id = c.id;
  rep.title = c.title;
  rep.cases = c.default_cases == 1 ? 1 : cases.value_or(c.default_cases);
  const SplitMix64 root = SplitMix64(seed).split("criterion-" + std::to_string(c.id));
  const auto start = std::chrono::steady_clock::now();
  double worst_ratio = -1.0;
  for (std::size_t i = 0; i < rep.cases; ++i) {
    SplitMix64 rng = root.split(static_cast<std::uint64_t>(i));
    SplitMix64 gen_rng = rng.split("instance");
    const SplitMix64 check_rng = rng.split("check");
    const Instance inst = c.generate(gen_rng);
    const CaseResult res = detail::run_guarded(c, inst, check_rng);
    const double ratio = res.error / (res.allowed > 0 ? res.allowed : 1e-300);
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      rep.worst_error = res.error;
      rep.worst_allowed = res.allowed;
      rep.worst_detail = res.detail;
    }
    if (!res.ok() && rep.passed) {
      rep.passed = false;
      const Instance minimal = detail::shrink(c, inst, check_rng);
      rep.failing_instance = to_json(minimal);
      rep.failing_detail = detail::run_guarded(c, minimal, check_rng).detail;
    }
  }
  rep.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (c.runtime_budget_s > 0.0 && rep.cases == c.default_cases) {
    rep.runtime_ok = rep.elapsed_s < c.runtime_budget_s;
  }
  return rep;
}

}  // namespace downcore::checks
