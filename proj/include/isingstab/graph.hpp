#pragma once

// Finite simple graphs on dense vertex indices, plus the generators used
// throughout the library (complete, King's, star, d-dimensional torus).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "isingstab/errors.hpp"

namespace isingstab {

using Vertex = std::uint32_t;

struct Edge {
  Vertex u;
  Vertex v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Neighbor {
  Vertex vertex;
  std::size_t edge;  // index into Graph::edges()
};

/// Immutable simple graph. Edges are stored as (min, max) pairs in
/// lexicographic order, so edge indices are stable across runs.
class Graph {
 public:
  Graph() = default;

  /// Builds from an arbitrary edge list. Self-loops, duplicates and
  /// out-of-range endpoints are rejected.
  Graph(std::size_t n_vertices, std::vector<Edge> edges) : n_(n_vertices) {
    detail::require(n_vertices >= 1, "graph must have at least one vertex");
    for (auto& e : edges) {
      detail::require(e.u != e.v, "self-loop at vertex " + std::to_string(e.u));
      detail::require(e.u < n_ && e.v < n_,
                      "edge endpoint out of range: {" + std::to_string(e.u) + "," +
                          std::to_string(e.v) + "}");
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    const auto dup = std::adjacent_find(edges.begin(), edges.end());
    detail::require(dup == edges.end(), "duplicate edge in edge list");
    edges_ = std::move(edges);

    adjacency_.assign(n_, {});
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      adjacency_[edges_[i].u].push_back({edges_[i].v, i});
      adjacency_[edges_[i].v].push_back({edges_[i].u, i});
    }
  }

  std::size_t n_vertices() const noexcept { return n_; }
  std::size_t n_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const Neighbor> neighbors(Vertex x) const { return adjacency_.at(x); }
  std::size_t degree(Vertex x) const { return adjacency_.at(x).size(); }

  /// Parameter count |E| + |V|.
  std::size_t k_g() const noexcept { return n_ + edges_.size(); }

  bool is_complete() const noexcept { return edges_.size() == n_ * (n_ - 1) / 2; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

inline std::size_t max_degree(const Graph& g) {
  std::size_t best = 0;
  for (Vertex x = 0; x < g.n_vertices(); ++x) best = std::max(best, g.degree(x));
  return best;
}

inline Graph build_complete(std::size_t n) {
  detail::require(n >= 1, "complete graph needs n >= 1");
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (Vertex x = 0; x < n; ++x)
    for (Vertex y = x + 1; y < n; ++y) edges.push_back({x, y});
  return Graph(n, std::move(edges));
}

/// n x m King's graph; vertex (r, c) has index r * m + c.
inline Graph build_kings(std::size_t n, std::size_t m) {
  detail::require(n >= 1 && m >= 1, "King's graph needs both dimensions >= 1");
  std::vector<Edge> edges;
  const auto id = [m](std::size_t r, std::size_t c) { return static_cast<Vertex>(r * m + c); };
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      if (c + 1 < m) edges.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < n) {
        edges.push_back({id(r, c), id(r + 1, c)});
        if (c + 1 < m) edges.push_back({id(r, c), id(r + 1, c + 1)});
        if (c > 0) edges.push_back({id(r, c), id(r + 1, c - 1)});
      }
    }
  }
  return Graph(n * m, std::move(edges));
}

/// Star with centre 0 and leaves 1..k.
inline Graph build_star(std::size_t k) {
  detail::require(k >= 1, "star graph needs k >= 1 leaves");
  std::vector<Edge> edges;
  for (Vertex leaf = 1; leaf <= k; ++leaf) edges.push_back({0, leaf});
  return Graph(k + 1, std::move(edges));
}

/// Periodic lattice with the given side lengths. Vertex index is the
/// mixed-radix number with the first axis least significant.
inline Graph build_torus(std::span<const std::size_t> sides) {
  detail::require(!sides.empty(), "torus needs at least one dimension");
  std::size_t n = 1;
  for (auto s : sides) {
    detail::require(s >= 3, "torus side lengths must be >= 3");
    n *= s;
  }
  std::vector<Edge> edges;
  edges.reserve(n * sides.size());
  std::vector<std::size_t> coord(sides.size(), 0);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t stride = 1;
    for (std::size_t axis = 0; axis < sides.size(); ++axis) {
      const std::size_t step_up = coord[axis] + 1 == sides[axis] ? x + stride - sides[axis] * stride
                                                                 : x + stride;
      edges.push_back({static_cast<Vertex>(x), static_cast<Vertex>(step_up)});
      stride *= sides[axis];
    }
    for (std::size_t axis = 0; axis < sides.size(); ++axis) {
      if (++coord[axis] < sides[axis]) break;
      coord[axis] = 0;
    }
  }
  return Graph(n, std::move(edges));
}

inline Graph build_torus(std::initializer_list<std::size_t> sides) {
  return build_torus(std::span<const std::size_t>(sides.begin(), sides.size()));
}

/// Vertex order around the cycle if g is a single cycle on n >= 3 vertices
/// (the 1-D torus), otherwise empty.
inline std::vector<Vertex> cycle_order(const Graph& g) {
  const std::size_t n = g.n_vertices();
  if (n < 3 || g.n_edges() != n) return {};
  for (Vertex x = 0; x < n; ++x)
    if (g.degree(x) != 2) return {};
  std::vector<Vertex> order{0};
  Vertex prev = 0;
  Vertex cur = g.neighbors(0)[0].vertex;
  while (cur != 0) {
    order.push_back(cur);
    const auto nb = g.neighbors(cur);
    const Vertex next = nb[0].vertex == prev ? nb[1].vertex : nb[0].vertex;
    prev = cur;
    cur = next;
    if (order.size() > n) return {};
  }
  if (order.size() != n) return {};
  return order;
}

}  // namespace isingstab
