#pragma once

/// \file
/// Weighted L^p norms, down norms and tilde norms at the L^p scale.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "downcore/constructions.hpp"
#include "downcore/random.hpp"

namespace downcore {

/// Exponent p in [1, inf]. Infinity is a flag, never a floating value.
class Exponent {
 public:
  static Exponent infinity() { return Exponent(true, 0.0); }
  static Exponent finite(double p) {
    if (!std::isfinite(p) || p < 1.0) {
      throw Error(ErrorCode::BadExponent, "p must lie in [1, inf]");
    }
    return Exponent(false, p);
  }
  /// Accepts "inf", "infinity" or a number >= 1.
  static Exponent parse(const std::string& text) {
    if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(text, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::BadExponent, text);
    }
    if (used != text.size()) throw Error(ErrorCode::BadExponent, text);
    if (std::isinf(p) && p > 0) return infinity();
    return finite(p);
  }

  bool is_infinite() const noexcept { return infinite_; }
  bool is_one() const noexcept { return !infinite_ && value_ == 1.0; }
  /// Finite value; only meaningful when !is_infinite().
  double value() const noexcept { return value_; }

  Exponent conjugate() const {
    if (infinite_) return finite(1.0);
    if (value_ == 1.0) return infinity();
    return finite(value_ / (value_ - 1.0));
  }

  std::string to_string() const {
    if (infinite_) return "inf";
    std::string s = std::to_string(value_);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }

  bool operator==(const Exponent&) const = default;

 private:
  Exponent(bool inf, double v) : infinite_(inf), value_(v) {}
  bool infinite_;
  double value_;
};

inline double lp_norm(const MeasureSpace& space, const FunctionOnU& f, const Exponent& p) {
  if (f.size() != space.size()) throw Error(ErrorCode::LengthMismatch);
  if (p.is_infinite()) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::fabs(v));
    return m;
  }
  if (p.is_one()) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::fabs(f[i]) * space.weight(i);
    return s;
  }
  // Scale by the max to keep pow() away from overflow.
  double scale = 0.0;
  for (double v : f.values) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    s += std::pow(std::fabs(f[i]) / scale, p.value()) * space.weight(i);
  }
  return scale * std::pow(s, 1.0 / p.value());
}

/// Down norm together with what attains it.
struct DownNorm {
  double norm = 0.0;
  /// p = inf: chain index of the set with the largest mean of |f|.
  std::optional<std::size_t> chain_set;
  /// 1 < p < inf: the level function whose p-norm is the down norm.
  std::optional<FunctionOnU> level;
};

/// sup over nonempty chain sets A of (1/mu(A)) * integral of |f| over A.
inline DownNorm down_norm_inf(const MeasureSpace& space, const CoreAtoms& atoms,
                              const FunctionOnU& f) {
  const auto theta = chain_integrals(space, atoms, absolute(f));
  DownNorm out;
  for (std::size_t j = 1; j < theta.size(); ++j) {
    const double mean = theta[j] / atoms.cumulative_measures()[j - 1];
    if (!out.chain_set || mean > out.norm) {
      out.norm = mean;
      out.chain_set = j;
    }
  }
  return out;
}

inline DownNorm down_norm_detailed(const MeasureSpace& space, const CoreAtoms& atoms,
                                   const FunctionOnU& f, const Exponent& p) {
  if (f.size() != space.size()) throw Error(ErrorCode::LengthMismatch);
  if (p.is_one()) return DownNorm{lp_norm(space, f, p), std::nullopt, std::nullopt};
  if (p.is_infinite()) return down_norm_inf(space, atoms, f);
  auto lev = level_function(space, atoms, f);
  DownNorm out;
  out.norm = lp_norm(space, lev.level, p);
  out.level = std::move(lev.level);
  return out;
}

inline double down_norm(const MeasureSpace& space, const CoreAtoms& atoms, const FunctionOnU& f,
                        const Exponent& p) {
  return down_norm_detailed(space, atoms, f, p).norm;
}

inline double tilde_norm(const MeasureSpace& space, const CoreAtoms& atoms, const FunctionOnU& g,
                         const Exponent& p) {
  return lp_norm(space, least_core_decreasing_majorant(space, atoms, g), p);
}

/// Largest observed excess of integral |f g| over down_norm(f, p) *
/// tilde_norm(g, p'). Nonpositive up to rounding when the duality holds.
/// g = 0 is always among the samples.
inline double associate_gap(const MeasureSpace& space, const CoreAtoms& atoms, const FunctionOnU& f,
                            const Exponent& p, std::size_t samples, std::uint64_t seed) {
  const Exponent q = p.conjugate();
  const double fn = down_norm(space, atoms, f, p);
  SplitMix64 rng(seed);
  double gap = -std::numeric_limits<double>::infinity();
  FunctionOnU g(std::vector<double>(space.size(), 0.0));
  for (std::size_t s = 0; s <= samples; ++s) {
    if (s > 0) {
      for (double& v : g.values) v = rng.uniform(-1.0, 1.0);
    }
    double pairing = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i) {
      pairing += std::fabs(f[i] * g[i]) * space.weight(i);
    }
    gap = std::max(gap, pairing - fn * tilde_norm(space, atoms, g, q));
  }
  return gap;
}

}  // namespace downcore
