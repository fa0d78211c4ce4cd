#pragma once

// Perturbed Hamiltonians: binary round-off of every parameter, or bounded
// uniform noise. Both keep the sup-norm distance to the original <= delta.

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "isingstab/errors.hpp"
#include "isingstab/hamiltonian.hpp"
#include "isingstab/random.hpp"

namespace isingstab {

struct RoundOff {
  int bits;
};

struct UniformNoise {
  double delta;
  std::uint64_t seed;
};

/// Either perturbation mode. delta() is the guaranteed sup-norm error.
struct PerturbationSpec {
  std::variant<RoundOff, UniformNoise> mode;

  double delta() const {
    if (const auto* r = std::get_if<RoundOff>(&mode)) return std::ldexp(1.0, -r->bits);
    return std::get<UniformNoise>(mode).delta;
  }
};

/// Keeps the integer part floor(p) and the first `bits` binary digits of the
/// non-negative fractional part: p' = floor(p * 2^bits) / 2^bits.
inline double round_off_value(double p, int bits) {
  return std::ldexp(std::floor(std::ldexp(p, bits)), -bits);
}

struct RoundOffResult {
  IsingInstance perturbed;
  double delta;
};

inline RoundOffResult round_off(const IsingInstance& inst, int bits) {
  detail::require(bits >= 1, "round-off needs bits >= 1");
  std::vector<double> j(inst.couplings().begin(), inst.couplings().end());
  std::vector<double> h(inst.fields().begin(), inst.fields().end());
  for (auto& v : j) v = round_off_value(v, bits);
  for (auto& v : h) v = round_off_value(v, bits);
  return {IsingInstance(inst.graph(), std::move(j), std::move(h)), std::ldexp(1.0, -bits)};
}

/// Adds an independent U[-delta, delta) shift to every parameter (couplings
/// in canonical edge order, then fields). Deterministic in `seed`.
inline IsingInstance perturb_uniform(const IsingInstance& inst, double delta, std::uint64_t seed) {
  detail::require(delta > 0.0 && std::isfinite(delta), "uniform noise needs delta > 0");
  Rng rng(seed);
  const auto shift = [&](double p) {
    double q = p + (2.0 * rng.uniform() - 1.0) * delta;
    // floating-point addition can overshoot the bound by an ulp
    while (std::abs(q - p) > delta) q = std::nextafter(q, p);
    return q;
  };
  std::vector<double> j(inst.couplings().begin(), inst.couplings().end());
  std::vector<double> h(inst.fields().begin(), inst.fields().end());
  for (auto& v : j) v = shift(v);
  for (auto& v : h) v = shift(v);
  return IsingInstance(inst.graph(), std::move(j), std::move(h));
}

inline IsingInstance apply(const PerturbationSpec& spec, const IsingInstance& inst) {
  if (const auto* r = std::get_if<RoundOff>(&spec.mode)) return round_off(inst, r->bits).perturbed;
  const auto& u = std::get<UniformNoise>(spec.mode);
  return perturb_uniform(inst, u.delta, u.seed);
}

/// max over all parameters of |original - perturbed|.
inline double sup_distance(const IsingInstance& a, const IsingInstance& b) {
  detail::require(a.graph() == b.graph(), "instances live on different graphs");
  double d = 0.0;
  for (std::size_t i = 0; i < a.couplings().size(); ++i)
    d = std::max(d, std::abs(a.couplings()[i] - b.couplings()[i]));
  for (std::size_t i = 0; i < a.fields().size(); ++i)
    d = std::max(d, std::abs(a.fields()[i] - b.fields()[i]));
  return d;
}

}  // namespace isingstab
