#pragma once

// Graph compression: drop every vertex whose incident couplings are all
// below delta in magnitude, bound the resulting energy deviation, and
// evaluate the probability guarantee for the 1-D torus with Gaussian
// couplings.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "isingstab/errors.hpp"
#include "isingstab/hamiltonian.hpp"
#include "isingstab/special_functions.hpp"

namespace isingstab {

struct CompressionResult {
  std::vector<Vertex> kept;
  std::vector<Vertex> removed;  // every incident |J| < delta
  double delta;
  double deviation_bound;  // 2 delta * sum of removed degrees
  std::size_t removed_degree_sum;
};

inline CompressionResult build_v0(const IsingInstance& inst, double delta) {
  detail::require(delta > 0.0 && std::isfinite(delta), "compression needs delta > 0");
  detail::require(!inst.has_fields(), "compression is defined for zero external fields only");
  const auto& g = inst.graph();
  const auto j = inst.couplings();
  CompressionResult out{{}, {}, delta, 0.0, 0};
  for (Vertex x = 0; x < g.n_vertices(); ++x) {
    const auto nbs = g.neighbors(x);
    const bool negligible = std::all_of(nbs.begin(), nbs.end(),
                                        [&](const Neighbor& nb) { return std::abs(j[nb.edge]) < delta; });
    if (negligible) {
      out.removed.push_back(x);
      out.removed_degree_sum += nbs.size();
    } else {
      out.kept.push_back(x);
    }
  }
  out.deviation_bound = 2.0 * delta * static_cast<double>(out.removed_degree_sum);
  return out;
}

/// sup over s, t of |H(s) - H(s on kept, t on removed)|, exactly.
/// For a fixed kept assignment both configurations range over the same
/// block, so the supremum is the largest max - min spread over blocks.
inline double deviation_exact(const IsingInstance& inst, const CompressionResult& result,
                              std::size_t cap = kDefaultBruteForceCap) {
  const std::size_t n = inst.n_vertices();
  require_enumerable(n, cap);
  detail::require(result.kept.size() + result.removed.size() == n,
                  "compression result does not match the instance");
  if (result.removed.empty()) return 0.0;

  const auto& g = inst.graph();
  const auto j = inst.couplings();
  const auto h = inst.fields();
  const auto& kept = result.kept;
  const auto& removed = result.removed;

  std::vector<Spin> s(n, -1);
  std::vector<double> local(n);
  double worst = 0.0;
  const std::uint64_t kept_total = std::uint64_t{1} << kept.size();
  const std::uint64_t removed_total = std::uint64_t{1} << removed.size();
  for (std::uint64_t kb = 0; kb < kept_total; ++kb) {
    for (std::size_t i = 0; i < kept.size(); ++i) s[kept[i]] = (kb >> i) & 1U ? 1 : -1;
    for (auto y : removed) s[y] = -1;
    for (Vertex x = 0; x < n; ++x) {
      double f = h[x];
      for (const auto& nb : g.neighbors(x)) f += j[nb.edge] * s[nb.vertex];
      local[x] = f;
    }
    double e = energy(inst, s);
    double lo = e;
    double hi = e;
    for (std::uint64_t step = 1; step < removed_total; ++step) {
      const Vertex x = removed[std::countr_zero(step)];
      e += 2.0 * s[x] * local[x];
      const double change = -2.0 * s[x];
      s[x] = static_cast<Spin>(-s[x]);
      for (const auto& nb : g.neighbors(x)) local[nb.vertex] += j[nb.edge] * change;
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    worst = std::max(worst, hi - lo);
  }
  return worst;
}

struct RemovedSizeMoments {
  double mean;           // N theta^2
  double second_moment;  // N theta^2 (1 + 2 theta - 3 theta^2 + N theta^2)
};

/// Moments of the number of removed vertices on an N-vertex 1-D torus when
/// each coupling is independently below delta with probability theta.
inline RemovedSizeMoments removed_size_moments(double n, double theta) {
  detail::require(n >= 3.0, "removed_size_moments needs N >= 3");
  detail::require(theta >= 0.0 && theta <= 1.0, "theta must lie in [0, 1]");
  const double t2 = theta * theta;
  return {n * t2, n * t2 * (1.0 + 2.0 * theta - 3.0 * t2 + n * t2)};
}

struct TorusGuaranteeQuery {
  double n;
  double epsilon;
  double delta;
  double c = 1.0;
  double alpha = 0.5;
};

struct TorusGuarantee {
  double theta;
  double chebyshev_term;   // (1 - 2/pi) / (N (sqrt(2/pi) - 2 delta/eps)^2)
  double paley_zygmund;    // lower bound on P(|removed| >= C N^alpha)
  double theta_pow_n;      // P(|removed| = N), floored at 1e-300
  double bound_general;    // 1 - chebyshev_term, i.e. with P(A) = 1
  double bound_with_size;  // paley_zygmund - theta_pow_n - chebyshev_term
  bool hypothesis_holds = true;
};

inline constexpr double kThetaPowFloor = 1e-300;

/// Evaluates the guarantee formula without insisting on delta < eps / sqrt(2 pi).
/// `hypothesis_holds` records whether the bound is actually backed by the
/// theorem; outside it the numbers are only the formula's value.
inline TorusGuarantee torus_guarantee_formula(const TorusGuaranteeQuery& q) {
  using std::numbers::pi;
  detail::require(q.n >= 3.0, "torus guarantee needs N >= 3");
  detail::require(q.epsilon > 0.0, "epsilon must be positive");
  detail::require(q.delta > 0.0, "delta must be positive");
  detail::require(q.c > 0.0, "C must be positive");
  detail::require(q.alpha >= 0.0 && q.alpha < 1.0, "alpha must lie in [0, 1)");

  const double theta = gaussian_central_mass(q.delta);
  const double n_t2 = q.n * theta * theta;
  detail::require(n_t2 > 0.0, "N theta^2 underflows to zero");

  const double gap = std::sqrt(2.0 / pi) - 2.0 * q.delta / q.epsilon;
  detail::require(gap != 0.0, "delta equals epsilon / sqrt(2 pi)");
  const double chebyshev = (1.0 - 2.0 / pi) / (q.n * gap * gap);

  // Paley-Zygmund only speaks when C N^alpha <= E|removed|.
  const double ratio = q.c / (std::pow(q.n, 1.0 - q.alpha) * theta * theta);
  const double base = std::max(0.0, 1.0 - ratio);
  const double pz = base * base / (1.0 + (1.0 + 2.0 * theta - 3.0 * theta * theta) / n_t2);

  const double theta_pow = std::max(std::exp(q.n * std::log(theta)), kThetaPowFloor);

  TorusGuarantee out{};
  out.theta = theta;
  out.chebyshev_term = chebyshev;
  out.paley_zygmund = pz;
  out.theta_pow_n = theta_pow;
  out.bound_general = std::clamp(1.0 - chebyshev, 0.0, 1.0);
  out.bound_with_size = std::clamp(pz - theta_pow - chebyshev, 0.0, 1.0);
  out.hypothesis_holds = q.delta < q.epsilon / std::sqrt(2.0 * pi);
  return out;
}

inline TorusGuarantee torus_guarantee(const TorusGuaranteeQuery& q) {
  using std::numbers::pi;
  detail::require(q.delta < q.epsilon / std::sqrt(2.0 * pi),
                  "delta must be strictly below epsilon / sqrt(2 pi)");
  return torus_guarantee_formula(q);
}

/// ceil(C N^alpha), snapping values within 1e-9 relative of an integer to it
/// so that exact powers such as (10^8)^0.5 are not pushed up by rounding.
inline std::uint64_t minimum_removed_size(double n, double c, double alpha) {
  detail::require(n >= 1.0, "N must be positive");
  detail::require(c > 0.0, "C must be positive");
  detail::require(alpha >= 0.0 && alpha < 1.0, "alpha must lie in [0, 1)");
  const double v = c * std::pow(n, alpha);
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, v)) return static_cast<std::uint64_t>(r);
  return static_cast<std::uint64_t>(std::ceil(v));
}

struct Table1Row {
  double n;
  double epsilon;
  double delta;
  double alpha;
  double c;
};

/// Reference parameter sets for the torus guarantee.
inline constexpr Table1Row kTable1Rows[] = {
    {1e8, 0.05, 0.0198, 0.4, 1.0},    {1e8, 0.05, 0.0198, 0.5, 1.0},
    {1e8, 0.1, 0.0398, 0.5, 1.0},     {1e12, 0.01, 0.00398, 0.5, 1.0},
    {1e12, 0.05, 0.0199, 0.5, 1.0},   {1e12, 0.1, 0.0399, 0.5, 1.0},
    {1e12, 0.05, 0.0199, 0.6, 1.0},   {1e12, 0.05, 0.0199, 0.65, 1.0},
};

}  // namespace isingstab
