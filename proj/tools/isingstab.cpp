// isingstab: command-line front end.
//
// Every command writes to stdout, or to --out. A relative --out is resolved
// against $ISINGSTAB_OUTPUT_DIR when that variable is set. Errors go to
// stderr as {"error": kind, "message": text}; exit status is 2 for usage or
// validation problems, 3 when an exact computation would exceed the
// enumeration cap and 1 for anything else.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "isingstab/isingstab.hpp"
#include "isingstab/json_io.hpp"

namespace is = isingstab;
using is::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GraphFlags {
  std::string family;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t dim = 1;
  std::string file;
};

void add_graph_flags(CLI::App* sub, GraphFlags& g) {
  sub->add_option("--graph", g.family, "complete | kings | star | torus")
      ->check(CLI::IsMember({"complete", "kings", "star", "torus"}));
  sub->add_option("--n", g.n, "vertices (complete), rows (kings), leaves (star), side (torus)");
  sub->add_option("--m", g.m, "columns for kings (defaults to --n)");
  sub->add_option("--dim", g.dim, "torus dimension")->check(CLI::PositiveNumber);
  sub->add_option("--graph-file", g.file, "graph or instance JSON to take the graph from");
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw is::InvalidArgument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw is::InvalidArgument(path + ": " + e.what());
  }
}

is::Graph family_graph(const std::string& family, std::size_t n, const GraphFlags& g) {
  is::detail::require(n >= 1, "--n must be given and positive");
  if (family == "complete") return is::build_complete(n);
  if (family == "kings") return is::build_kings(n, g.m ? g.m : n);
  if (family == "star") return is::build_star(n);
  if (family == "torus") return is::build_torus(std::vector<std::size_t>(g.dim, n));
  throw UsageError("unknown graph family " + family);
}

is::Graph make_graph(const GraphFlags& g) {
  if (!g.file.empty()) {
    const auto j = read_json(g.file);
    return is::graph_from_json(j.contains("graph") ? j.at("graph") : j);
  }
  if (g.family.empty()) throw UsageError("give --graph with --n, or --graph-file");
  return family_graph(g.family, g.n, g);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad number in list: " + item);
    }
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_list(text)) {
    if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v))) throw UsageError("sizes must be positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::string csv_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::path p(out);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("ISINGSTAB_OUTPUT_DIR"); dir && *dir) p = std::filesystem::path(dir) / p;
  }
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

std::optional<is::BoundMethod> method_flag(const std::string& s) {
  if (s.empty() || s == "best") return std::nullopt;
  auto m = is::parse_bound_method(s);
  if (!m) throw UsageError("unknown bound method " + s);
  return m;
}

is::StabilityReport report_for(const is::Graph& g, std::optional<is::BoundMethod> m, double delta, double eps) {
  return m ? is::bound_for(*m, g, delta, eps) : is::best_bound(g, delta, eps);
}

int fail(const std::string& kind, const std::string& message, int code) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability of Ising ground states under parameter perturbation"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;
  unsigned threads = 1;
  std::size_t cap = is::kDefaultBruteForceCap;
  app.add_option("--out", out, "write output here instead of stdout");
  app.add_option("--threads", threads, "worker threads for Monte Carlo (0 = all cores)");
  app.add_option("--cap", cap, "largest vertex count for exact enumeration");

  GraphFlags graph;
  std::optional<std::uint64_t> seed;
  std::string instance_file;
  double delta = -1.0;
  double eps = -1.0;

  // gen
  auto* gen = app.add_subcommand("gen", "write a graph or a Gaussian instance as JSON");
  add_graph_flags(gen, graph);
  bool fields = false;
  bool graph_only = false;
  gen->add_option("--seed", seed, "sample seed (required unless --graph-only)");
  gen->add_flag("--fields", fields, "also sample external fields");
  gen->add_flag("--graph-only", graph_only, "write only the graph");

  // energy
  auto* energy_cmd = app.add_subcommand("energy", "energy of a configuration");
  std::string config_file;
  energy_cmd->add_option("--instance", instance_file, "instance JSON")->required();
  energy_cmd->add_option("--config", config_file, "configuration JSON")->required();

  // ground
  auto* ground = app.add_subcommand("ground", "ground state, exactly or by annealing");
  ground->add_option("--instance", instance_file, "instance JSON")->required();
  bool exact = false;
  bool anneal = false;
  is::AnnealerParams ap;
  ground->add_flag("--exact", exact, "exhaustive enumeration");
  ground->add_flag("--anneal", anneal, "annealing heuristic (needs --seed)");
  ground->add_option("--seed", seed);
  ground->add_option("--sweeps", ap.sweeps);
  ground->add_option("--restarts", ap.restarts);
  ground->add_option("--t-initial", ap.t_initial);
  ground->add_option("--t-final", ap.t_final);
  ground->add_option("--pin-initial", ap.pin_initial);
  ground->add_option("--pin-final", ap.pin_final);

  // perturb
  auto* perturb = app.add_subcommand("perturb", "round off or add bounded uniform noise");
  perturb->add_option("--instance", instance_file, "instance JSON")->required();
  int bits = 0;
  perturb->add_option("--bits", bits, "truncate to this many binary digits");
  perturb->add_option("--delta", delta, "uniform noise half-width (needs --seed)");
  perturb->add_option("--seed", seed);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "probability that a perturbed ground state stays near-optimal");
  add_graph_flags(bounds, graph);
  std::string method;
  std::string deltas;
  std::string sizes;
  bounds->add_option("--delta", delta);
  bounds->add_option("--eps", eps)->required();
  bounds->add_option("--method", method, "uniform | graph_structured | complete_graph | best");
  bounds->add_option("--deltas", deltas, "comma list; emits CSV over delta");
  bounds->add_option("--sizes", sizes, "comma list; emits CSV over --n for the family");

  // digits
  auto* digits = app.add_subcommand("digits", "binary digits needed for a target probability");
  add_graph_flags(digits, graph);
  double target = 0.99;
  digits->add_option("--eps", eps)->required();
  digits->add_option("--target", target);
  digits->add_option("--method", method);
  digits->add_option("--sizes", sizes, "comma list of --n values");

  // compress
  auto* compress = app.add_subcommand("compress", "drop vertices whose couplings are all below delta");
  compress->add_option("--instance", instance_file, "instance JSON")->required();
  compress->add_option("--delta", delta)->required();
  compress->add_flag("--exact", exact, "also compute the exact deviation");

  // torus-guarantee
  auto* tg = app.add_subcommand("torus-guarantee", "probability guarantee for compressed 1-D tori");
  is::TorusGuaranteeQuery q{0, 0, 0};
  tg->add_option("--n", q.n)->required();
  tg->add_option("--eps", q.epsilon)->required();
  tg->add_option("--delta", q.delta)->required();
  tg->add_option("--c", q.c);
  tg->add_option("--alpha", q.alpha);

  // table1
  auto* table1 = app.add_subcommand("table1", "guarantee for the reference parameter sets (CSV)");

  // verify
  auto* verify = app.add_subcommand("verify", "Monte Carlo checks");
  verify->require_subcommand(1);
  verify->fallthrough();
  bool verbose = false;
  std::size_t trials = 0;
  bool no_fields = false;
  auto* vgap = verify->add_subcommand("gap", "ground-state gap probability against the bounds");
  add_graph_flags(vgap, graph);
  vgap->add_option("--eps", eps)->required();
  vgap->add_option("--trials", trials)->required();
  vgap->add_option("--seed", seed)->required();
  vgap->add_option("--bits", bits);
  vgap->add_option("--delta", delta);
  vgap->add_flag("--no-fields", no_fields);
  vgap->add_flag("--verbose", verbose, "include per-trial records");

  auto* vmom = verify->add_subcommand("moments", "removed-set size moments on 1-D tori");
  std::size_t ring_n = 0;
  vmom->add_option("--n", ring_n)->required();
  vmom->add_option("--delta", delta)->required();
  vmom->add_option("--trials", trials)->required();
  vmom->add_option("--seed", seed)->required();

  auto* vrh = verify->add_subcommand("rh-scan", "R_H / N on tori (CSV)");
  std::size_t dim = 1;
  std::string solver = "exact";
  vrh->add_option("--dim", dim);
  vrh->add_option("--sizes", sizes, "comma list of side lengths")->required();
  vrh->add_option("--trials", trials)->required();
  vrh->add_option("--seed", seed)->required();
  vrh->add_option("--solver", solver)->check(CLI::IsMember({"exact", "anneal"}));
  vrh->add_option("--sweeps", ap.sweeps);
  vrh->add_option("--restarts", ap.restarts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  try {
    if (*gen) {
      const auto g = make_graph(graph);
      if (graph_only) {
        emit(dump(is::to_json(g)), out);
      } else {
        if (!seed) throw UsageError("gen needs --seed (or --graph-only)");
        emit(dump(is::to_json(is::sample_instance(g, fields, *seed))), out);
      }
    } else if (*energy_cmd) {
      const auto inst = is::instance_from_json(read_json(instance_file));
      const auto cfg = is::config_from_json(read_json(config_file));
      is::detail::require(cfg.size() == inst.n_vertices(), "configuration length does not match the instance");
      emit(dump({{"schema", is::kSchemaVersion}, {"energy", is::energy(inst, cfg)}}), out);
    } else if (*ground) {
      if (exact == anneal) throw UsageError("give exactly one of --exact or --anneal");
      const auto inst = is::instance_from_json(read_json(instance_file));
      if (exact) {
        emit(dump(is::to_json(is::ground_state_exact(inst, cap))), out);
      } else {
        if (!seed) throw UsageError("--anneal needs --seed");
        ap.seed = *seed;
        const auto r = is::anneal_extremes(inst, ap);
        emit(dump(is::to_json(is::GroundStateResult{r.best_config, r.min_est, false})), out);
      }
    } else if (*perturb) {
      const auto inst = is::instance_from_json(read_json(instance_file));
      const bool use_bits = perturb->count("--bits") > 0;
      const bool use_noise = perturb->count("--delta") > 0;
      if (use_bits == use_noise) throw UsageError("give exactly one of --bits or --delta");
      if (use_bits) {
        const auto r = is::round_off(inst, bits);
        auto j = is::to_json(r.perturbed);
        j["delta"] = r.delta;
        emit(dump(j), out);
      } else {
        if (!seed) throw UsageError("--delta needs --seed");
        auto j = is::to_json(is::perturb_uniform(inst, delta, *seed));
        j["delta"] = delta;
        emit(dump(j), out);
      }
    } else if (*bounds) {
      const auto m = method_flag(method);
      if (!sizes.empty()) {
        if (graph.family.empty()) throw UsageError("--sizes needs --graph");
        if (delta < 0) throw UsageError("--sizes needs --delta");
        std::string csv = "n,k_g,method,chi_square_argument,probability_lower_bound\n";
        for (auto n : parse_sizes(sizes)) {
          const auto g = family_graph(graph.family, n, graph);
          const auto r = report_for(g, m, delta, eps);
          csv += std::to_string(n) + "," + std::to_string(r.k_g) + "," + std::string(is::to_string(r.method)) +
                 "," + csv_number(r.chi_square_argument) + "," + csv_number(r.probability_lower_bound) + "\n";
        }
        emit(csv, out);
      } else if (!deltas.empty()) {
        const auto g = make_graph(graph);
        std::string csv = "delta,method,chi_square_argument,probability_lower_bound\n";
        for (double d : parse_list(deltas)) {
          const auto r = report_for(g, m, d, eps);
          csv += csv_number(d) + "," + std::string(is::to_string(r.method)) + "," +
                 csv_number(r.chi_square_argument) + "," + csv_number(r.probability_lower_bound) + "\n";
        }
        emit(csv, out);
      } else {
        if (delta < 0 && bounds->count("--delta") == 0) throw UsageError("bounds needs --delta");
        const auto g = make_graph(graph);
        auto j = is::to_json(report_for(g, m, delta, eps));
        json all = json::array();
        for (auto method_i : is::applicable_methods(g)) all.push_back(is::to_json(is::bound_for(method_i, g, delta, eps)));
        j["reports"] = all;
        emit(dump(j), out);
      }
    } else if (*digits) {
      const auto m = method_flag(method);
      std::string csv = "n,k_g,min_digits,method\n";
      const auto row = [&](const is::Graph& g, std::size_t n) {
        const int d = is::min_digits(g, eps, target, m);
        const auto r = report_for(g, m, std::ldexp(1.0, -d), eps);
        csv += std::to_string(n) + "," + std::to_string(g.k_g()) + "," + std::to_string(d) + "," +
               std::string(is::to_string(r.method)) + "\n";
      };
      if (!sizes.empty()) {
        if (graph.family.empty()) throw UsageError("--sizes needs --graph");
        for (auto n : parse_sizes(sizes)) row(family_graph(graph.family, n, graph), n);
      } else {
        const auto g = make_graph(graph);
        row(g, g.n_vertices());
      }
      emit(csv, out);
    } else if (*compress) {
      const auto inst = is::instance_from_json(read_json(instance_file));
      const auto r = is::build_v0(inst, delta);
      auto j = is::to_json(r);
      if (exact) j["deviation_exact"] = is::deviation_exact(inst, r, cap);
      emit(dump(j), out);
    } else if (*tg) {
      emit(dump(is::to_json(q, is::torus_guarantee(q))), out);
    } else if (*table1) {
      std::string csv = "n,epsilon,delta,alpha,c,minimum_removed_size,hypothesis_holds,bound\n";
      for (const auto& r : is::kTable1Rows) {
        const auto g = is::torus_guarantee_formula({r.n, r.epsilon, r.delta, r.c, r.alpha});
        char line[256];
        std::snprintf(line, sizeof line, "%g,%g,%g,%g,%g,%llu,%d,%.3f\n", r.n, r.epsilon, r.delta, r.alpha, r.c,
                      static_cast<unsigned long long>(is::minimum_removed_size(r.n, r.c, r.alpha)), g.hypothesis_holds ? 1 : 0,
                      g.bound_with_size);
        csv += line;
      }
      emit(csv, out);
    } else if (*vgap) {
      is::TrialPlan plan{make_graph(graph), is::PlanPerturbation::identity(), eps, trials, *seed};
      const bool use_bits = vgap->count("--bits") > 0;
      const bool use_noise = vgap->count("--delta") > 0;
      if (use_bits && use_noise) throw UsageError("give at most one of --bits or --delta");
      if (use_bits) {
        is::detail::require(bits >= 1, "--bits must be >= 1");
        plan.perturbation = is::PlanPerturbation::roundoff(bits);
      }
      if (use_noise) {
        is::detail::require(delta >= 0.0, "--delta must be non-negative");
        plan.perturbation = is::PlanPerturbation::uniform(delta);
      }
      plan.with_fields = !no_fields;
      plan.threads = threads;
      plan.cap = cap;
      const auto est = is::estimate_gap_probability(plan);
      json j{{"schema", is::kSchemaVersion},
             {"trials", est.result.trials},
             {"successes", est.result.successes},
             {"estimate", est.result.estimate},
             {"standard_error", est.result.standard_error},
             {"theoretical_bound", *est.result.theoretical_bound},
             {"min_gap", est.min_gap}};
      json b = json::array();
      for (const auto& r : est.bounds) b.push_back(is::to_json(r));
      j["bounds"] = b;
      if (verbose) {
        json recs = json::array();
        for (const auto& r : est.records)
          recs.push_back({{"trial", r.index},
                          {"gap", r.gap},
                          {"r_h", r.r_h},
                          {"v_h", r.v_h},
                          {"success", r.success},
                          {"certified", r.certified}});
        j["records"] = recs;
      }
      emit(dump(j), out);
    } else if (*vmom) {
      const auto s = is::estimate_removed_stats(ring_n, delta, trials, *seed, threads);
      const auto m = [](const is::MomentEstimate& e) {
        return json{{"estimate", e.estimate}, {"standard_error", e.standard_error}, {"theoretical", e.theoretical}};
      };
      emit(dump({{"schema", is::kSchemaVersion},
                 {"n", ring_n},
                 {"delta", delta},
                 {"trials", trials},
                 {"theta", s.theta},
                 {"mean", m(s.mean)},
                 {"second_moment", m(s.second_moment)},
                 {"full_removals", s.full_removals}}),
           out);
    } else if (*vrh) {
      const auto rows = is::scan_rh_over_n(dim, parse_sizes(sizes), trials,
                                           solver == "exact" ? is::RangeSolver::exact_1d : is::RangeSolver::anneal,
                                           *seed, ap, threads);
      std::string csv = "dimension,side,n,trial,r_h,r_h_over_n,lower_anchor,upper_anchor\n";
      for (const auto& r : rows)
        csv += std::to_string(r.dimension) + "," + std::to_string(r.side) + "," + std::to_string(r.n) + "," +
               std::to_string(r.trial) + "," + csv_number(r.r_h) + "," + csv_number(r.r_h_over_n()) + "," +
               csv_number(r.lower_anchor()) + "," + csv_number(r.upper_anchor()) + "\n";
      emit(csv, out);
    }
  } catch (const UsageError& e) {
    return fail("usage", e.what(), 2);
  } catch (const is::InvalidArgument& e) {
    return fail("invalid_argument", e.what(), 2);
  } catch (const is::OracleTooLarge& e) {
    return fail("oracle_too_large", e.what(), 3);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), 1);
  }
  return 0;
}
