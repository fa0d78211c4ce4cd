#pragma once

// Ground states and energy extremes: exhaustive, closed form on the 1-D
// torus, and a parallel-update annealer for instances out of enumeration
// reach.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "isingstab/errors.hpp"
#include "isingstab/hamiltonian.hpp"
#include "isingstab/random.hpp"

namespace isingstab {

struct GroundStateResult {
  SpinConfig config;
  double energy;
  bool exact;
};

/// Global minimiser by enumeration; ties go to the lexicographically
/// smallest configuration (-1 < +1).
inline GroundStateResult ground_state_exact(const IsingInstance& inst,
                                            std::size_t cap = kDefaultBruteForceCap) {
  detail::ExactArgmin lo(inst, detail::enumeration_tolerance(inst));
  for_each_configuration(inst, [&](std::span<const Spin> s, double e) { lo.offer(s, e); }, cap);
  return {lo.config(), lo.value(), true};
}

struct TorusExtremes {
  double min_energy;
  double max_energy;
  SpinConfig argmin;
  SpinConfig argmax;
};

namespace detail {

// Minimiser on a cycle: satisfy every bond walking away from the weakest one,
// which is the only bond left unsatisfied when the sign product around the
// cycle is negative. A zero coupling always counts as satisfiable.
inline SpinConfig cycle_minimizer(const IsingInstance& inst, const std::vector<Vertex>& order) {
  const auto& g = inst.graph();
  const auto j = inst.couplings();
  const std::size_t n = order.size();

  // bond[i] joins order[i] and order[(i+1) % n]
  std::vector<std::size_t> bond(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vertex a = order[i];
    const Vertex b = order[(i + 1) % n];
    for (const auto& nb : g.neighbors(a))
      if (nb.vertex == b) bond[i] = nb.edge;
  }
  std::size_t weakest = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(j[bond[i]]) < std::abs(j[bond[weakest]])) weakest = i;

  // Start just after the weakest bond and go once around; the weakest bond
  // closes the cycle and is the one that absorbs any frustration.
  std::vector<Spin> s(inst.n_vertices(), 1);
  std::size_t pos = (weakest + 1) % n;
  s[order[pos]] = 1;
  for (std::size_t step = 0; step + 1 < n; ++step) {
    const std::size_t i = pos;
    const std::size_t next = (pos + 1) % n;
    const Spin want = j[bond[i]] >= 0.0 ? Spin{1} : Spin{-1};
    s[order[next]] = static_cast<Spin>(s[order[i]] * want);
    pos = next;
  }
  return SpinConfig(std::move(s));
}

}  // namespace detail

/// Exact extremes of a zero-field 1-D torus in O(N):
/// min = -sum|J| if the bond signs are satisfiable around the cycle,
/// otherwise -sum|J| + 2 min|J|; max is the same for the negated couplings.
inline TorusExtremes extremes_1d_torus(const IsingInstance& inst) {
  const auto order = cycle_order(inst.graph());
  detail::require(!order.empty(), "extremes_1d_torus needs a 1-D torus (single cycle, N >= 3)");
  detail::require(!inst.has_fields(), "extremes_1d_torus needs zero external fields");
  const auto lo = detail::cycle_minimizer(inst, order);
  const auto neg = inst.negated();
  const auto hi = detail::cycle_minimizer(neg, order);
  return {energy(inst, lo), -energy(neg, hi), lo, hi};
}

/// Parallel-update annealer settings. Temperature and pinning both decay
/// geometrically from their initial to their final value over `sweeps`.
struct AnnealerParams {
  int sweeps = 400;
  double t_initial = 3.0;
  double t_final = 0.05;
  double pin_initial = 1.0;
  double pin_final = 0.05;
  std::uint64_t seed = 0;
  int restarts = 8;

  void validate() const {
    detail::require(sweeps >= 0, "sweeps must be >= 0");
    detail::require(restarts >= 1, "restarts must be >= 1");
    detail::require(t_initial > 0.0 && t_final > 0.0, "temperatures must be positive");
    detail::require(t_final <= t_initial, "final temperature must not exceed the initial one");
    detail::require(pin_initial >= 0.0 && pin_final >= 0.0, "pinning must be non-negative");
  }
};

struct AnnealResult {
  double min_est;
  double max_est;
  SpinConfig best_config;  // achieves min_est
};

namespace detail {

inline double geometric(double from, double to, int step, int steps) {
  if (steps <= 1) return to;
  if (from == 0.0 || to == 0.0) return from + (to - from) * step / (steps - 1);
  return from * std::pow(to / from, static_cast<double>(step) / (steps - 1));
}

// One minimisation chain. Every returned energy is energy() of a visited state.
inline std::pair<double, SpinConfig> anneal_chain(const IsingInstance& inst,
                                                   const AnnealerParams& p,
                                                   std::vector<Spin> s, Rng& rng) {
  const auto& g = inst.graph();
  const auto j = inst.couplings();
  const auto h = inst.fields();
  const std::size_t n = inst.n_vertices();

  double best = energy(inst, s);
  std::vector<Spin> best_s = s;
  if (p.sweeps == 0) return {best, SpinConfig(std::move(best_s))};

  std::vector<double> local(n);
  const auto compute_local = [&] {
    for (Vertex x = 0; x < n; ++x) {
      double f = h[x];
      for (const auto& nb : g.neighbors(x)) f += j[nb.edge] * s[nb.vertex];
      local[x] = f;
    }
  };

  for (int sweep = 0; sweep < p.sweeps; ++sweep) {
    const double beta = 1.0 / geometric(p.t_initial, p.t_final, sweep, p.sweeps);
    const double pin = geometric(p.pin_initial, p.pin_final, sweep, p.sweeps);
    compute_local();
    // Synchronous update: each spin decides from the same snapshot. The
    // pinning cost 2q penalises a flip on top of its own energy change.
    for (Vertex x = 0; x < n; ++x) {
      const double cost = 2.0 * s[x] * local[x] + 2.0 * pin;
      const double arg = beta * cost;
      const double flip_prob = arg > 50.0 ? 0.0 : 1.0 / (1.0 + std::exp(arg));
      if (rng.uniform() < flip_prob) s[x] = static_cast<Spin>(-s[x]);
    }
    const double e = energy(inst, s);
    if (e < best) {
      best = e;
      best_s = s;
    }
  }

  // Sequential zero-temperature descent from the best state seen.
  s = best_s;
  compute_local();
  for (bool improved = true; improved;) {
    improved = false;
    for (Vertex x = 0; x < n; ++x) {
      if (2.0 * s[x] * local[x] < 0.0) {
        const double change = -2.0 * s[x];
        s[x] = static_cast<Spin>(-s[x]);
        for (const auto& nb : g.neighbors(x)) local[nb.vertex] += j[nb.edge] * change;
        improved = true;
      }
    }
  }
  const double e = energy(inst, s);
  if (e < best) {
    best = e;
    best_s = s;
  }
  return {best, SpinConfig(std::move(best_s))};
}

}  // namespace detail

/// Heuristic energy extremes. min_est >= true min and max_est <= true max
/// always hold because both are energies of visited configurations.
/// Maximisation runs the same chains on the negated instance.
inline AnnealResult anneal_extremes(const IsingInstance& inst, const AnnealerParams& params) {
  params.validate();
  const std::size_t n = inst.n_vertices();
  const IsingInstance neg = inst.negated();

  double min_est = std::numeric_limits<double>::infinity();
  double neg_min = std::numeric_limits<double>::infinity();
  SpinConfig best_config;
  for (int r = 0; r < params.restarts; ++r) {
    Rng init_rng(derive_seed(params.seed, 3 * static_cast<std::uint64_t>(r)));
    std::vector<Spin> init(n);
    for (auto& v : init) v = init_rng.uniform() < 0.5 ? Spin{-1} : Spin{1};

    Rng lo_rng(derive_seed(params.seed, 3 * static_cast<std::uint64_t>(r) + 1));
    auto [lo, lo_cfg] = detail::anneal_chain(inst, params, init, lo_rng);
    if (lo < min_est) {
      min_est = lo;
      best_config = std::move(lo_cfg);
    }
    Rng hi_rng(derive_seed(params.seed, 3 * static_cast<std::uint64_t>(r) + 2));
    auto [hi, hi_cfg] = detail::anneal_chain(neg, params, init, hi_rng);
    neg_min = std::min(neg_min, hi);
  }
  return {min_est, -neg_min, std::move(best_config)};
}

}  // namespace isingstab
