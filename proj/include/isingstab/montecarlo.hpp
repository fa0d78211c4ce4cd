#pragma once

// Monte Carlo validation of the probabilistic statements: ground-state gap
// probabilities against the chi-square bounds, moments of the removed set
// under compression, and R_H / N on tori.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "isingstab/bounds.hpp"
#include "isingstab/compression.hpp"
#include "isingstab/errors.hpp"
#include "isingstab/hamiltonian.hpp"
#include "isingstab/perturbation.hpp"
#include "isingstab/random.hpp"
#include "isingstab/solvers.hpp"

namespace isingstab {

/// i.i.d. standard Gaussian couplings (canonical edge order) and, optionally,
/// fields. Deterministic in `seed`.
inline IsingInstance sample_instance(const Graph& g, bool with_fields, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> j(g.n_edges());
  for (auto& v : j) v = rng.gaussian();
  std::vector<double> h(g.n_vertices(), 0.0);
  if (with_fields)
    for (auto& v : h) v = rng.gaussian();
  return IsingInstance(g, std::move(j), std::move(h));
}

/// Runs task(i) for i in [0, count) on up to `threads` workers and returns
/// the results in index order. Output does not depend on the worker count.
template <class Task>
auto parallel_indexed(std::size_t count, unsigned threads, Task&& task) {
  using Result = decltype(task(std::size_t{0}));
  std::vector<std::optional<Result>> slots(count);
  unsigned workers = threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) slots[i].emplace(task(i));
  } else {
    std::vector<std::jthread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < count; i += workers) slots[i].emplace(task(i));
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }
  std::vector<Result> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Bernoulli estimate with its normal-approximation standard error.
struct EmpiricalResult {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double estimate = 0.0;
  double standard_error = 0.0;
  std::optional<double> theoretical_bound;

  static EmpiricalResult from_counts(std::size_t successes, std::size_t trials) {
    EmpiricalResult r;
    r.successes = successes;
    r.trials = trials;
    r.estimate = trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
    r.standard_error =
        trials ? std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(trials)) : 0.0;
    return r;
  }
};

struct PlanPerturbation {
  enum class Mode { none, roundoff, uniform };
  Mode mode = Mode::none;
  int bits = 0;
  double delta = 0.0;

  static PlanPerturbation identity() { return {}; }
  static PlanPerturbation roundoff(int bits) { return {Mode::roundoff, bits, std::ldexp(1.0, -bits)}; }
  static PlanPerturbation uniform(double delta) { return {Mode::uniform, 0, delta}; }

  double sup_delta() const { return mode == Mode::none ? 0.0 : delta; }

  IsingInstance apply(const IsingInstance& inst, std::uint64_t seed) const {
    switch (mode) {
      case Mode::none: return inst;
      case Mode::roundoff: return round_off(inst, bits).perturbed;
      case Mode::uniform: return delta == 0.0 ? inst : perturb_uniform(inst, delta, seed);
    }
    return inst;
  }
};

struct TrialPlan {
  Graph graph;
  PlanPerturbation perturbation;
  double epsilon = 0.1;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  bool with_fields = true;
  unsigned threads = 1;
  std::size_t cap = kDefaultBruteForceCap;
};

struct GapTrial {
  std::size_t index;
  double gap;  // H(perturbed ground state) - H(ground state)
  double r_h;
  double v_h;
  bool success;    // 0 <= gap <= eps R_H
  bool certified;  // delta k_G <= eps sqrt(v_H) / 2 held for this instance
};

struct GapEstimate {
  EmpiricalResult result;  // theoretical_bound = best applicable bound
  std::vector<StabilityReport> bounds;
  std::vector<GapTrial> records;
  double min_gap;
};

inline GapTrial run_gap_trial(const TrialPlan& plan, std::size_t t) {
  const auto inst = sample_instance(plan.graph, plan.with_fields, derive_seed(plan.master_seed, 2 * t));
  const auto pert = plan.perturbation.apply(inst, derive_seed(plan.master_seed, 2 * t + 1));
  const auto range = range_exact(inst, plan.cap);
  const auto tilde = ground_state_exact(pert, plan.cap);
  const double gap = energy(inst, tilde.config) - range.min_energy;
  const double vh = v_h(inst);
  const double lhs = plan.perturbation.sup_delta() * static_cast<double>(plan.graph.k_g());
  return {t,
          gap,
          range.r_h,
          vh,
          gap >= 0.0 && gap <= plan.epsilon * range.r_h,
          lhs <= 0.5 * plan.epsilon * std::sqrt(vh)};
}

inline GapEstimate estimate_gap_probability(const TrialPlan& plan) {
  detail::require(plan.trials >= 1, "trial count must be >= 1");
  detail::require(plan.epsilon > 0.0, "epsilon must be positive");
  require_enumerable(plan.graph.n_vertices(), plan.cap);

  auto records = parallel_indexed(plan.trials, plan.threads,
                                  [&](std::size_t t) { return run_gap_trial(plan, t); });
  std::size_t successes = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    successes += r.success ? 1 : 0;
    min_gap = std::min(min_gap, r.gap);
  }
  GapEstimate out;
  out.result = EmpiricalResult::from_counts(successes, plan.trials);
  const double delta = plan.perturbation.sup_delta();
  for (auto m : applicable_methods(plan.graph))
    out.bounds.push_back(bound_for(m, plan.graph, delta, plan.epsilon));
  out.result.theoretical_bound = best_bound(plan.graph, delta, plan.epsilon).probability_lower_bound;
  out.records = std::move(records);
  out.min_gap = min_gap;
  return out;
}

/// Sample mean of a real quantity with its standard error.
struct MomentEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  double theoretical = 0.0;
  std::size_t trials = 0;
};

struct RemovedStats {
  MomentEstimate mean;
  MomentEstimate second_moment;
  std::size_t full_removals = 0;  // trials with every vertex removed
  double theta = 0.0;
};

inline MomentEstimate summarize(const std::vector<double>& xs, double theoretical) {
  MomentEstimate m;
  m.trials = xs.size();
  m.theoretical = theoretical;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.estimate = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.estimate) * (x - m.estimate);
    m.standard_error = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  }
  return m;
}

/// Empirical first and second moments of the removed-set size on 1-D tori
/// with i.i.d. standard Gaussian couplings.
inline RemovedStats estimate_removed_stats(std::size_t n, double delta, std::size_t trials,
                                           std::uint64_t seed, unsigned threads = 1) {
  detail::require(n >= 3, "removed-set statistics need N >= 3");
  detail::require(trials >= 1, "trial count must be >= 1");
  const Graph g = build_torus({n});
  const auto sizes = parallel_indexed(trials, threads, [&](std::size_t t) {
    const auto inst = sample_instance(g, false, derive_seed(seed, t));
    return static_cast<double>(build_v0(inst, delta).removed.size());
  });
  std::vector<double> squares(sizes.size());
  std::transform(sizes.begin(), sizes.end(), squares.begin(), [](double s) { return s * s; });

  RemovedStats out;
  out.theta = gaussian_central_mass(delta);
  const auto theory = removed_size_moments(static_cast<double>(n), out.theta);
  out.mean = summarize(sizes, theory.mean);
  out.second_moment = summarize(squares, theory.second_moment);
  out.full_removals = static_cast<std::size_t>(
      std::count(sizes.begin(), sizes.end(), static_cast<double>(n)));
  return out;
}

enum class RangeSolver { exact_1d, anneal };

struct RhSample {
  std::size_t dimension;
  std::size_t side;
  std::size_t n;
  std::size_t trial;
  double r_h;  // exact for exact_1d, a lower estimate for anneal
  double sum_abs_j;
  double r_h_over_n() const { return r_h / static_cast<double>(n); }
  /// (1 / sqrt(N)) sum |J_b|
  double lower_anchor() const { return sum_abs_j / std::sqrt(static_cast<double>(n)); }
  /// 2 sum |J_b|
  double upper_anchor() const { return 2.0 * sum_abs_j; }
};

/// One sampled instance per (side, trial) on the `dimension`-dimensional
/// torus of that side length, reporting R_H (or its annealed estimate).
inline std::vector<RhSample> scan_rh_over_n(std::size_t dimension, const std::vector<std::size_t>& sides,
                                            std::size_t trials_per_size, RangeSolver solver,
                                            std::uint64_t seed, const AnnealerParams& anneal = {},
                                            unsigned threads = 1) {
  detail::require(dimension >= 1, "dimension must be >= 1");
  detail::require(solver != RangeSolver::exact_1d || dimension == 1,
                  "the exact 1-D solver only handles one-dimensional tori");
  struct Job {
    std::size_t side;
    std::size_t trial;
  };
  std::vector<Job> jobs;
  for (auto side : sides)
    for (std::size_t t = 0; t < trials_per_size; ++t) jobs.push_back({side, t});

  return parallel_indexed(jobs.size(), threads, [&](std::size_t i) {
    const auto [side, trial] = jobs[i];
    const std::vector<std::size_t> dims(dimension, side);
    const Graph g = build_torus(dims);
    const auto inst = sample_instance(g, false, derive_seed(seed, i));
    double sum_abs = 0.0;
    for (double j : inst.couplings()) sum_abs += std::abs(j);
    double r_h;
    if (solver == RangeSolver::exact_1d) {
      const auto ext = extremes_1d_torus(inst);
      r_h = ext.max_energy - ext.min_energy;
    } else {
      AnnealerParams p = anneal;
      p.seed = derive_seed(seed ^ 0xA5A5A5A5ULL, i);
      const auto est = anneal_extremes(inst, p);
      r_h = est.max_est - est.min_est;
    }
    return RhSample{dimension, side, g.n_vertices(), trial, r_h, sum_abs};
  });
}

}  // namespace isingstab
