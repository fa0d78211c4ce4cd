#pragma once

// Ising instances H(s) = -sum_b J_b s_x s_y - sum_x h_x s_x, spin
// configurations, overlap sets and the exhaustive enumeration oracle.

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "isingstab/errors.hpp"
#include "isingstab/graph.hpp"

namespace isingstab {

/// Default vertex cap for exhaustive enumeration (2^24 states).
inline constexpr std::size_t kDefaultBruteForceCap = 24;

using Spin = std::int8_t;

/// Assignment of -1/+1 to every vertex. Ordering is lexicographic with -1 < +1.
class SpinConfig {
 public:
  SpinConfig() = default;
  explicit SpinConfig(std::vector<Spin> spins) : spins_(std::move(spins)) {
    for (auto s : spins_) detail::require(s == 1 || s == -1, "spins must be -1 or +1");
  }

  /// All spins equal to `value`.
  static SpinConfig uniform(std::size_t n, Spin value) {
    return SpinConfig(std::vector<Spin>(n, value));
  }

  /// Bit i set means spin i is +1.
  static SpinConfig from_bits(std::uint64_t bits, std::size_t n) {
    std::vector<Spin> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = (bits >> i) & 1U ? Spin{1} : Spin{-1};
    return SpinConfig(std::move(s));
  }

  std::size_t size() const noexcept { return spins_.size(); }
  Spin operator[](std::size_t i) const { return spins_[i]; }
  std::span<const Spin> spins() const noexcept { return spins_; }

  SpinConfig flipped() const {
    auto s = spins_;
    for (auto& v : s) v = static_cast<Spin>(-v);
    return SpinConfig(std::move(s));
  }

  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;
  friend auto operator<=>(const SpinConfig&, const SpinConfig&) = default;

 private:
  std::vector<Spin> spins_;
};

/// Graph plus one coupling per canonical edge and one field per vertex.
class IsingInstance {
 public:
  IsingInstance() = default;

  IsingInstance(Graph graph, std::vector<double> couplings, std::vector<double> fields)
      : graph_(std::move(graph)), couplings_(std::move(couplings)), fields_(std::move(fields)) {
    detail::require(couplings_.size() == graph_.n_edges(),
                    "coupling count " + std::to_string(couplings_.size()) +
                        " does not match edge count " + std::to_string(graph_.n_edges()));
    detail::require(fields_.size() == graph_.n_vertices(),
                    "field count " + std::to_string(fields_.size()) +
                        " does not match vertex count " + std::to_string(graph_.n_vertices()));
    for (double v : couplings_) detail::require(std::isfinite(v), "couplings must be finite");
    for (double v : fields_) detail::require(std::isfinite(v), "fields must be finite");
  }

  /// Zero external fields.
  IsingInstance(Graph graph, std::vector<double> couplings)
      : IsingInstance(graph, std::move(couplings), std::vector<double>(graph.n_vertices(), 0.0)) {}

  const Graph& graph() const noexcept { return graph_; }
  std::span<const double> couplings() const noexcept { return couplings_; }
  std::span<const double> fields() const noexcept { return fields_; }
  std::size_t n_vertices() const noexcept { return graph_.n_vertices(); }

  bool has_fields() const noexcept {
    for (double h : fields_)
      if (h != 0.0) return true;
    return false;
  }

  /// Same graph, every parameter negated. energy(negated, s) == -energy(*this, s) exactly.
  IsingInstance negated() const {
    auto j = couplings_;
    auto h = fields_;
    for (auto& v : j) v = -v;
    for (auto& v : h) v = -v;
    return IsingInstance(graph_, std::move(j), std::move(h));
  }

  friend bool operator==(const IsingInstance&, const IsingInstance&) = default;

 private:
  Graph graph_;
  std::vector<double> couplings_;
  std::vector<double> fields_;
};

inline double energy(const IsingInstance& inst, std::span<const Spin> s) {
  detail::require(s.size() == inst.n_vertices(), "configuration length " +
                                                     std::to_string(s.size()) +
                                                     " does not match instance size " +
                                                     std::to_string(inst.n_vertices()));
  const auto edges = inst.graph().edges();
  const auto j = inst.couplings();
  const auto h = inst.fields();
  double e = 0.0;
  for (std::size_t b = 0; b < edges.size(); ++b) e -= j[b] * s[edges[b].u] * s[edges[b].v];
  for (std::size_t x = 0; x < h.size(); ++x) e -= h[x] * s[x];
  return e;
}

inline double energy(const IsingInstance& inst, const SpinConfig& config) {
  return energy(inst, config.spins());
}

/// Sum of squared parameters.
inline double v_h(const IsingInstance& inst) {
  double v = 0.0;
  for (double j : inst.couplings()) v += j * j;
  for (double h : inst.fields()) v += h * h;
  return v;
}

struct OverlapSets {
  std::vector<Vertex> disagreement_vertices;    // x with s_x t_x = -1
  std::vector<std::size_t> disagreement_edges;  // canonical edge indices with s_x s_y t_x t_y = -1
};

inline OverlapSets overlaps(const SpinConfig& sigma, const SpinConfig& tau, const Graph& g) {
  detail::require(sigma.size() == tau.size() && sigma.size() == g.n_vertices(),
                  "overlap configurations must match the graph size");
  OverlapSets out;
  for (Vertex x = 0; x < g.n_vertices(); ++x)
    if (sigma[x] * tau[x] == -1) out.disagreement_vertices.push_back(x);
  const auto edges = g.edges();
  for (std::size_t b = 0; b < edges.size(); ++b) {
    const auto [x, y] = edges[b];
    if (sigma[x] * sigma[y] * tau[x] * tau[y] == -1) out.disagreement_edges.push_back(b);
  }
  return out;
}

inline void require_enumerable(std::size_t n, std::size_t cap) {
  if (n > cap || n > 62)
    throw OracleTooLarge("exhaustive enumeration over " + std::to_string(n) +
                         " vertices exceeds the cap of " + std::to_string(cap));
}

/// Visits every configuration of `inst` in reflected Gray-code order, starting
/// from all spins -1, calling visit(spins, energy). Energies are updated
/// incrementally in O(deg) per flip and resynchronised periodically, so they
/// may differ from energy() by a few ulps.
template <class Visit>
void for_each_configuration(const IsingInstance& inst, Visit&& visit,
                            std::size_t cap = kDefaultBruteForceCap) {
  const std::size_t n = inst.n_vertices();
  require_enumerable(n, cap);
  const auto& g = inst.graph();
  const auto j = inst.couplings();
  const auto h = inst.fields();

  std::vector<Spin> s(n, -1);
  // local[x] = sum_y J_xy s_y + h_x, so flipping x changes H by 2 s_x local[x].
  std::vector<double> local(n);
  const auto refresh = [&] {
    for (Vertex x = 0; x < n; ++x) {
      double f = h[x];
      for (const auto& nb : g.neighbors(x)) f += j[nb.edge] * s[nb.vertex];
      local[x] = f;
    }
  };
  refresh();
  double e = energy(inst, s);
  visit(std::as_const(s), e);

  constexpr std::uint64_t kResyncMask = (std::uint64_t{1} << 16) - 1;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto x = static_cast<Vertex>(std::countr_zero(step));
    e += 2.0 * s[x] * local[x];
    const double change = -2.0 * s[x];
    s[x] = static_cast<Spin>(-s[x]);
    for (const auto& nb : g.neighbors(x)) local[nb.vertex] += j[nb.edge] * change;
    if ((step & kResyncMask) == 0) {
      refresh();
      e = energy(inst, s);
    }
    visit(std::as_const(s), e);
  }
}

namespace detail {

/// Keeps the exact argmin of a stream of incrementally computed energies.
/// Near-ties are re-evaluated with energy(); exact ties go to the
/// lexicographically smallest configuration.
class ExactArgmin {
 public:
  ExactArgmin(const IsingInstance& inst, double tolerance) : inst_(inst), tol_(tolerance) {}

  void offer(std::span<const Spin> s, double approx) {
    if (!has_) {
      take(s, energy(inst_, s));
      return;
    }
    if (approx < best_ - tol_) {
      take(s, energy(inst_, s));
    } else if (approx <= best_ + tol_) {
      const double exact = energy(inst_, s);
      if (exact < best_ ||
          (exact == best_ && std::lexicographical_compare(s.begin(), s.end(), arg_.begin(),
                                                          arg_.end()))) {
        take(s, exact);
      }
    }
  }

  double value() const { return best_; }
  SpinConfig config() const { return SpinConfig(arg_); }

 private:
  void take(std::span<const Spin> s, double exact) {
    has_ = true;
    best_ = exact;
    arg_.assign(s.begin(), s.end());
  }

  const IsingInstance& inst_;
  double tol_;
  bool has_ = false;
  double best_ = 0.0;
  std::vector<Spin> arg_;
};

inline double enumeration_tolerance(const IsingInstance& inst) {
  double scale = 1.0;
  for (double v : inst.couplings()) scale += std::abs(v);
  for (double v : inst.fields()) scale += std::abs(v);
  return 1e-9 * scale;
}

}  // namespace detail

struct EnergyRange {
  double min_energy;
  double max_energy;
  double r_h;  // max_energy - min_energy
  SpinConfig argmin;
  SpinConfig argmax;
};

/// Exact energy extremes by exhaustive enumeration. Reported energies are
/// energy() of the returned configurations, bit for bit.
inline EnergyRange range_exact(const IsingInstance& inst,
                               std::size_t cap = kDefaultBruteForceCap) {
  const double tol = detail::enumeration_tolerance(inst);
  const IsingInstance neg = inst.negated();
  detail::ExactArgmin lo(inst, tol);
  detail::ExactArgmin hi(neg, tol);
  for_each_configuration(
      inst,
      [&](std::span<const Spin> s, double e) {
        lo.offer(s, e);
        hi.offer(s, -e);
      },
      cap);
  const double min_e = lo.value();
  const double max_e = -hi.value();
  return {min_e, max_e, max_e - min_e, lo.config(), hi.config()};
}

}  // namespace isingstab
