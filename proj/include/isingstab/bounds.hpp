#pragma once

// Stability certificates for ground states under parameter perturbation:
// the order-preservation threshold, three chi-square lower bounds on
// P(H(perturbed ground state) - H(ground state) <= eps R_H), the selector
// between them and the minimal-digit planner.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "isingstab/errors.hpp"
#include "isingstab/graph.hpp"
#include "isingstab/special_functions.hpp"

namespace isingstab {

enum class BoundMethod {
  uniform,           // sup-norm route, |W| + |D| <= k_G
  graph_structured,  // |W| + |D| <= (deg G + 1)|V| / 2
  complete_graph,    // |W| + |D| <= (N + 1)^2 / 4 on K_N
};

inline constexpr std::string_view to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::uniform: return "uniform";
    case BoundMethod::graph_structured: return "graph_structured";
    case BoundMethod::complete_graph: return "complete_graph";
  }
  return "unknown";
}

inline std::optional<BoundMethod> parse_bound_method(std::string_view s) {
  for (auto m : {BoundMethod::uniform, BoundMethod::graph_structured, BoundMethod::complete_graph})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

struct StabilityReport {
  BoundMethod method;
  double delta;
  double epsilon;
  std::size_t k_g;
  double chi_square_argument;
  double probability_lower_bound;  // 1 - gamma(k_g; argument), clamped to [0, 1]
};

namespace detail {

inline void require_bound_inputs(double delta, double epsilon) {
  require(delta >= 0.0 && std::isfinite(delta), "delta must be finite and >= 0");
  require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be finite and > 0");
}

inline StabilityReport make_report(BoundMethod m, double delta, double epsilon, std::size_t k_g,
                                   double argument) {
  double p = 1.0 - chi_square_cdf(static_cast<double>(k_g), argument);
  p = std::clamp(p, 0.0, 1.0);
  return {m, delta, epsilon, k_g, argument, p};
}

}  // namespace detail

/// Largest delta with delta * k_g <= eps sqrt(v_h) / 2. Any perturbation within
/// it guarantees H_d(s) >= H_d(t) => H(s) >= H(t) - eps R_H.
inline double order_preservation_threshold(std::size_t k_g, double v_h, double epsilon) {
  detail::require(k_g > 0, "k_g must be positive");
  detail::require(v_h > 0.0, "v_h must be positive");
  detail::require(epsilon > 0.0, "epsilon must be positive");
  return epsilon * std::sqrt(v_h) / (2.0 * static_cast<double>(k_g));
}

inline StabilityReport bound_uniform(std::size_t k_g, double delta, double epsilon) {
  detail::require(k_g > 0, "k_g must be positive");
  detail::require_bound_inputs(delta, epsilon);
  const double r = 2.0 * delta * static_cast<double>(k_g) / epsilon;
  return detail::make_report(BoundMethod::uniform, delta, epsilon, k_g, r * r);
}

inline StabilityReport bound_graph_structured(const Graph& g, double delta, double epsilon) {
  detail::require_bound_inputs(delta, epsilon);
  const double r = delta * static_cast<double>(g.n_vertices()) *
                   static_cast<double>(max_degree(g) + 1) / epsilon;
  return detail::make_report(BoundMethod::graph_structured, delta, epsilon, g.k_g(), r * r);
}

inline StabilityReport bound_complete_graph(std::size_t n, double delta, double epsilon) {
  detail::require(n >= 1, "complete graph needs n >= 1");
  detail::require_bound_inputs(delta, epsilon);
  const double np1 = static_cast<double>(n) + 1.0;
  const double arg = delta * delta * np1 * np1 * np1 * np1 / (4.0 * epsilon * epsilon);
  return detail::make_report(BoundMethod::complete_graph, delta, epsilon, n * (n + 1) / 2, arg);
}

/// Evaluates one method on g. complete_graph requires g to be complete.
inline StabilityReport bound_for(BoundMethod m, const Graph& g, double delta, double epsilon) {
  switch (m) {
    case BoundMethod::uniform: return bound_uniform(g.k_g(), delta, epsilon);
    case BoundMethod::graph_structured: return bound_graph_structured(g, delta, epsilon);
    case BoundMethod::complete_graph:
      detail::require(g.is_complete(), "complete_graph bound needs a complete graph");
      return bound_complete_graph(g.n_vertices(), delta, epsilon);
  }
  throw InvalidArgument("unknown bound method");
}

/// Methods that apply to g, in evaluation order.
inline std::vector<BoundMethod> applicable_methods(const Graph& g) {
  std::vector<BoundMethod> out{BoundMethod::uniform, BoundMethod::graph_structured};
  if (g.is_complete()) out.push_back(BoundMethod::complete_graph);
  return out;
}

/// The applicable bound with the smallest chi-square argument (so the
/// largest probability). Earlier methods win exact ties.
inline StabilityReport best_bound(const Graph& g, double delta, double epsilon) {
  std::optional<StabilityReport> best;
  for (auto m : applicable_methods(g)) {
    auto r = bound_for(m, g, delta, epsilon);
    if (!best || r.chi_square_argument < best->chi_square_argument) best = r;
  }
  return *best;
}

inline constexpr int kMaxDigits = 128;

/// Smallest number of binary digits N such that the bound at delta = 2^-N
/// reaches `target_probability`. Uses best_bound unless a method is given.
inline int min_digits(const Graph& g, double epsilon, double target_probability,
                      std::optional<BoundMethod> method = std::nullopt) {
  detail::require(target_probability > 0.0 && target_probability < 1.0,
                  "target probability must lie in (0, 1)");
  detail::require(epsilon > 0.0, "epsilon must be positive");
  for (int bits = 1; bits <= kMaxDigits; ++bits) {
    const double delta = std::ldexp(1.0, -bits);
    const auto r = method ? bound_for(*method, g, delta, epsilon) : best_bound(g, delta, epsilon);
    if (r.probability_lower_bound >= target_probability) return bits;
  }
  throw InvalidArgument("no digit count up to 128 reaches the target probability");
}

}  // namespace isingstab
