#pragma once

// JSON forms of graphs, instances, configurations and reports.
//
//   graph:     {"n": int, "edges": [[x, y], ...]}
//   instance:  {"schema": 1, "graph": <graph>, "J": [per canonical edge], "h": [per vertex]}
//   config:    {"schema": 1, "config": [+-1, ...], ...}
//
// Edges are emitted in canonical order; J is always read against the
// canonical order of the parsed graph.

#include "json.hpp"

#include <string>
#include <vector>

#include "isingstab/bounds.hpp"
#include "isingstab/compression.hpp"
#include "isingstab/errors.hpp"
#include "isingstab/graph.hpp"
#include "isingstab/hamiltonian.hpp"
#include "isingstab/solvers.hpp"

namespace isingstab {

inline constexpr int kSchemaVersion = 1;

using json = nlohmann::json;

namespace detail {

inline void check_schema(const json& j) {
  if (j.contains("schema")) {
    require(j.at("schema").is_number_integer() && j.at("schema").get<int>() == kSchemaVersion,
            "unsupported schema version");
  }
}

}  // namespace detail

inline json to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
  return {{"n", g.n_vertices()}, {"edges", std::move(edges)}};
}

inline Graph graph_from_json(const json& j) {
  try {
    const auto n = j.at("n").get<long long>();
    detail::require(n >= 1, "graph JSON: n must be >= 1");
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      detail::require(e.is_array() && e.size() == 2, "graph JSON: each edge must be a pair");
      const auto x = e[0].get<long long>();
      const auto y = e[1].get<long long>();
      detail::require(x >= 0 && y >= 0, "graph JSON: negative vertex index");
      edges.push_back({static_cast<Vertex>(x), static_cast<Vertex>(y)});
    }
    return Graph(static_cast<std::size_t>(n), std::move(edges));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("graph JSON: ") + e.what());
  }
}

inline json to_json(const IsingInstance& inst) {
  return {{"schema", kSchemaVersion},
          {"graph", to_json(inst.graph())},
          {"J", std::vector<double>(inst.couplings().begin(), inst.couplings().end())},
          {"h", std::vector<double>(inst.fields().begin(), inst.fields().end())}};
}

inline IsingInstance instance_from_json(const json& j) {
  detail::check_schema(j);
  try {
    auto g = graph_from_json(j.at("graph"));
    auto couplings = j.at("J").get<std::vector<double>>();
    std::vector<double> fields = j.contains("h") ? j.at("h").get<std::vector<double>>()
                                                 : std::vector<double>(g.n_vertices(), 0.0);
    return IsingInstance(std::move(g), std::move(couplings), std::move(fields));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("instance JSON: ") + e.what());
  }
}

inline json to_json(const SpinConfig& s) {
  json arr = json::array();
  for (auto v : s.spins()) arr.push_back(static_cast<int>(v));
  return arr;
}

/// Accepts either a bare array of spins or an object with a "config" array.
inline SpinConfig config_from_json(const json& j) {
  try {
    const json& arr = j.is_object() ? j.at("config") : j;
    if (j.is_object()) detail::check_schema(j);
    std::vector<Spin> s;
    for (const auto& v : arr) {
      const int x = v.get<int>();
      detail::require(x == 1 || x == -1, "config JSON: spins must be -1 or +1");
      s.push_back(static_cast<Spin>(x));
    }
    return SpinConfig(std::move(s));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config JSON: ") + e.what());
  }
}

inline json to_json(const GroundStateResult& r) {
  return {{"schema", kSchemaVersion},
          {"config", to_json(r.config)},
          {"energy", r.energy},
          {"exact", r.exact}};
}

inline json to_json(const StabilityReport& r) {
  return {{"schema", kSchemaVersion},
          {"method", std::string(to_string(r.method))},
          {"delta", r.delta},
          {"epsilon", r.epsilon},
          {"k_g", r.k_g},
          {"chi_square_argument", r.chi_square_argument},
          {"probability_lower_bound", r.probability_lower_bound}};
}

inline json to_json(const CompressionResult& r) {
  return {{"schema", kSchemaVersion},
          {"delta", r.delta},
          {"kept", r.kept},
          {"removed", r.removed},
          {"removed_degree_sum", r.removed_degree_sum},
          {"deviation_bound", r.deviation_bound}};
}

inline json to_json(const TorusGuaranteeQuery& q, const TorusGuarantee& g) {
  return {{"schema", kSchemaVersion},
          {"n", q.n},
          {"epsilon", q.epsilon},
          {"delta", q.delta},
          {"c", q.c},
          {"alpha", q.alpha},
          {"theta", g.theta},
          {"minimum_removed_size", minimum_removed_size(q.n, q.c, q.alpha)},
          {"chebyshev_term", g.chebyshev_term},
          {"paley_zygmund", g.paley_zygmund},
          {"theta_pow_n", g.theta_pow_n},
          {"bound_general", g.bound_general},
          {"bound_with_size", g.bound_with_size},
          {"hypothesis_holds", g.hypothesis_holds}};
}

}  // namespace isingstab
