#include "dagmm/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "dagmm/csv.hpp"
#include "dagmm/io.hpp"

namespace dagmm {

namespace {

namespace fs = std::filesystem;
using io::json;

constexpr const char* kOutDirEnv = "DAGMM_OUT_DIR";

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

fs::path resolve_out_dir(const std::string& flag) {
  std::string dir = flag;
  if (dir.empty())
    if (const char* env = std::getenv(kOutDirEnv)) dir = env;
  if (dir.empty()) throw ConfigError(std::string("--out is required (or set ") + kOutDirEnv + ")");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  return dir;
}

// Collects outputs and writes manifest.json last.
class Manifest {
 public:
  Manifest(std::string command, fs::path dir) : command_(std::move(command)), dir_(std::move(dir)) {
    started_ = utc_now();
  }

  void input(const std::string& role, const std::string& path) { inputs_[role] = path; }
  void config(json cfg) { config_ = std::move(cfg); }
  void seed(std::uint64_t s) { seed_ = s; }

  void write(const std::string& name, std::string_view content) {
    io::write_file_atomic(dir_ / name, content);
    outputs_.push_back(name);
  }
  void record(const std::string& name) { outputs_.push_back(name); }

  void finish() { finish_as("manifest.json"); }

  void finish_as(const std::string& name) {
    json j = {{"command", command_},
              {"tool_version", kToolVersion},
              {"inputs", inputs_},
              {"config", config_},
              {"started_at", started_},
              {"finished_at", utc_now()},
              {"outputs", outputs_}};
    if (seed_) j["seed"] = *seed_;
    io::write_file_atomic(dir_ / name, j.dump(2) + "\n");
  }

 private:
  std::string command_;
  fs::path dir_;
  std::string started_;
  json inputs_ = json::object();
  json config_ = json::object();
  std::optional<std::uint64_t> seed_;
  std::vector<std::string> outputs_;
};

CitationGraph load_graph(const std::string& nodes_path, const std::string& edges_path) {
  const auto edges = parse_edges(io::read_file(edges_path));
  if (nodes_path.empty()) return CitationGraph::from_edges(edges);
  return CitationGraph(parse_nodes(io::read_file(nodes_path)), edges);
}

std::vector<std::string> node_ids(const CitationGraph& g) {
  std::vector<std::string> ids;
  ids.reserve(g.size());
  for (const auto& node : g.nodes()) ids.push_back(node.id);
  return ids;
}

// ---- clean --------------------------------------------------------------

struct CleanArgs {
  std::string nodes, edges, out;
  std::uint64_t seed = 1;
};

int cmd_clean(const CleanArgs& a, std::ostream& out) {
  const auto graph = load_graph(a.nodes, a.edges);
  auto result = remove_mutual_edges(graph, a.seed);
  assert_dag(result.graph);
  const auto dir = resolve_out_dir(a.out);
  Manifest manifest("clean", dir);
  manifest.input("nodes", a.nodes);
  manifest.input("edges", a.edges);
  manifest.seed(a.seed);
  manifest.config({{"seed", a.seed}});
  manifest.write("edges.csv", write_edges_csv(result.graph.edges()));
  manifest.write("clean-report.json", io::to_json(result.report).dump(2) + "\n");
  manifest.finish();
  out << "removed " << result.report.removed.size() << " edge(s); " << result.graph.edge_count()
      << " remain\n";
  for (const auto& r : result.report.removed)
    out << "  " << r.from << " -> " << r.to << " (" << to_string(r.reason) << ")\n";
  return kExitOk;
}

// ---- stats --------------------------------------------------------------

struct StatsArgs {
  std::string nodes, edges, subgraph, out;
};

json degree_summary(const Eigen::VectorXd& degrees) {
  if (degrees.size() == 0) return {{"min", 0}, {"max", 0}, {"mean", 0.0}};
  return {{"min", static_cast<std::int64_t>(degrees.minCoeff())},
          {"max", static_cast<std::int64_t>(degrees.maxCoeff())},
          {"mean", degrees.mean()}};
}

int cmd_stats(const StatsArgs& a, std::ostream& out) {
  auto graph = load_graph(a.nodes, a.edges);
  if (!a.subgraph.empty()) {
    std::set<std::string> keep;
    for (const auto& row : csv::parse(io::read_file(a.subgraph)))
      if (!row.empty() && !row.front().empty()) keep.insert(row.front());
    graph = induced_subgraph(graph, keep);
  }
  const auto order = topological_order(graph);
  const Eigen::MatrixXd y = graph.adjacency().cast<double>();
  json topo = json::array();
  for (int r : order.nodes()) topo.push_back(graph.node(r).id);
  json stats = {{"n", graph.size()},
                {"m", graph.edge_count()},
                {"out_degree", degree_summary(y.rowwise().sum())},
                {"in_degree", degree_summary(y.colwise().sum().transpose())},
                {"topological_order", std::move(topo)}};
  if (graph.size() >= 2) {
    stats["density_dag"] = density(graph, DensityMode::kDagHalved);
    stats["density_directed"] = density(graph, DensityMode::kDirectedFull);
  } else {
    stats["density_dag"] = nullptr;
    stats["density_directed"] = nullptr;
  }
  const auto dir = resolve_out_dir(a.out);
  Manifest manifest("stats", dir);
  if (!a.nodes.empty()) manifest.input("nodes", a.nodes);
  manifest.input("edges", a.edges);
  if (!a.subgraph.empty()) manifest.input("subgraph", a.subgraph);
  manifest.write("stats.json", stats.dump(2) + "\n");
  manifest.finish();
  out << "n=" << graph.size() << " m=" << graph.edge_count();
  if (graph.size() >= 2) out << fmt::format(" density_dag={:.6g}", stats["density_dag"].get<double>());
  out << "\n";
  return kExitOk;
}

// ---- fit ----------------------------------------------------------------

struct FitArgs {
  std::string nodes, edges, out;
  int K = 0;
  std::int64_t iters = 2000, burnin = 20000, thin = 10, swaps = 0;
  std::uint64_t seed = 1;
  double s_alpha = 0.1;
  bool snapshots = false, include_z = false;
  int chains = 1;
};

void write_chain_dir(const fs::path& dir, const std::string& prefix, const Chain& chain,
                     const Hyperparams& h, const std::vector<std::string>& ids,
                     const FitArgs& a, Manifest& manifest) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());
  json config = {{"K", h.K},
                 {"hyperparams", io::to_json(h)},
                 {"chain", io::to_json(chain.config)},
                 {"node_ids", ids},
                 {"snapshots", a.snapshots},
                 {"include_z", a.include_z}};
  const auto put = [&](const std::string& name, std::string_view content) {
    io::write_file_atomic(dir / name, content);
    manifest.record(prefix + name);
  };
  put("config.json", config.dump(2) + "\n");
  put("trace.csv", io::trace_csv(chain));
  put("posterior.json", io::posterior_to_json(summarize(chain)).dump() + "\n");
  if (a.snapshots) {
    std::string lines;
    for (std::size_t k = 0; k < chain.samples.size(); ++k) {
      json j = io::state_to_json(chain.samples[k], ids, a.include_z);
      j["iter"] = chain.sweep_index[k];
      lines += j.dump() + "\n";
    }
    put("snapshots.jsonl", lines);
  }
}

int cmd_fit(const FitArgs& a, std::ostream& out) {
  if (a.K < 2) throw ConfigError("--K must be at least 2");
  if (a.chains < 1) throw ConfigError("--chains must be positive");
  ChainConfig base;
  base.iterations_retained = a.iters;
  base.burn_in = a.burnin;
  base.thin = a.thin;
  base.seed = a.seed;
  base.s_alpha = a.s_alpha;
  base.order_swaps_per_sweep = a.swaps;
  base.retain_z = a.snapshots && a.include_z;
  base.validate();
  const auto h = Hyperparams::defaults(a.K);

  const auto graph = load_graph(a.nodes, a.edges);
  assert_dag(graph);
  const auto ids = node_ids(graph);
  const auto dir = resolve_out_dir(a.out);

  std::vector<Chain> chains(a.chains);
  std::vector<std::exception_ptr> failures(a.chains);
  {
    std::vector<std::jthread> workers;
    for (int k = 0; k < a.chains; ++k) {
      workers.emplace_back([&, k] {
        try {
          ChainConfig cfg = base;
          cfg.seed = base.seed + static_cast<std::uint64_t>(k);
          chains[k] = run_chain(graph, h, cfg);
        } catch (...) {
          failures[k] = std::current_exception();
        }
      });
    }
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);

  Manifest manifest("fit", dir);
  if (!a.nodes.empty()) manifest.input("nodes", a.nodes);
  manifest.input("edges", a.edges);
  manifest.seed(a.seed);
  manifest.config({{"K", a.K}, {"chain", io::to_json(base)}, {"chains", a.chains},
                   {"snapshots", a.snapshots}, {"include_z", a.include_z}});
  for (int k = 0; k < a.chains; ++k) {
    const std::string prefix = a.chains == 1 ? "" : fmt::format("chain_{}/", k + 1);
    write_chain_dir(dir / prefix, prefix, chains[k], h, ids, a, manifest);
    out << fmt::format("{}alpha acceptance {:.3f}, order swap acceptance {:.3f}\n",
                       a.chains == 1 ? "" : fmt::format("chain {}: ", k + 1),
                       chains[k].acceptance.alpha_rate(), chains[k].acceptance.swap_rate());
  }
  manifest.finish();
  return kExitOk;
}

// ---- summarize ----------------------------------------------------------

struct SummarizeArgs {
  std::string run, nodes, out;
  double threshold = kDefaultMiscThreshold;
  bool histogram = false;
};

int cmd_summarize(const SummarizeArgs& a, std::ostream& out) {
  const fs::path run = a.run;
  json config;
  try {
    config = json::parse(io::read_file(run / "config.json"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("corrupt config.json: ") + e.what());
  }
  const auto ids = config.at("node_ids").get<std::vector<std::string>>();

  PosteriorSummary summary;
  if (fs::exists(run / "snapshots.jsonl")) {
    std::vector<ModelState> samples;
    std::istringstream lines(io::read_file(run / "snapshots.jsonl"));
    for (std::string line; std::getline(lines, line);)
      if (!line.empty()) samples.push_back(io::state_from_json(json::parse(line), ids));
    summary = summarize(samples, a.threshold);
  } else {
    summary = io::posterior_from_json(json::parse(io::read_file(run / "posterior.json")),
                                      a.threshold);
  }
  if (summary.D_mean.rows() != static_cast<Eigen::Index>(ids.size()))
    throw ParseError("run artifacts disagree on the node count");

  std::vector<NodeMeta> meta(ids.size());
  for (std::size_t r = 0; r < ids.size(); ++r) meta[r].id = ids[r];
  if (!a.nodes.empty()) {
    std::unordered_map<std::string, const NodeMeta*> by_id;
    const auto parsed = parse_nodes(io::read_file(a.nodes));
    for (const auto& node : parsed) by_id.emplace(node.id, &node);
    for (auto& node : meta)
      if (const auto it = by_id.find(node.id); it != by_id.end()) node = *it->second;
  }

  const int K = static_cast<int>(summary.C_mean.rows());
  std::vector<int> mains;
  json kinds = json::array();
  for (int i = 0; i < K; ++i) {
    kinds.push_back(std::string(to_string(summary.group_kind[i])));
    if (summary.group_kind[i] == GroupKind::kMain) mains.push_back(i);
  }
  const auto table = position_vs_year(summary, meta);

  json assignment = json::array();
  for (std::size_t r = 0; r < ids.size(); ++r)
    assignment.push_back({{"id", ids[r]}, {"group", summary.assignment[r] + 1}});
  json main_groups = json::array();
  for (int g : mains) main_groups.push_back(g + 1);
  json summary_json = {{"samples", summary.samples},
                       {"threshold", a.threshold},
                       {"C_mean", io::to_json(summary.C_mean)},
                       {"D_mean", io::to_json(summary.D_mean)},
                       {"alpha_mean", summary.alpha_mean},
                       {"alpha_sd", summary.alpha_sd},
                       {"group_kind", std::move(kinds)},
                       {"main_groups", std::move(main_groups)},
                       {"assignment", std::move(assignment)},
                       {"positions_excluded", table.excluded}};

  std::string heatmap = "id";
  for (int i = 1; i <= K; ++i) heatmap += fmt::format(",group_{}", i);
  heatmap += "\n";
  for (std::size_t r = 0; r < ids.size(); ++r) {
    heatmap += csv::escape(ids[r]);
    for (int i = 0; i < K; ++i) heatmap += fmt::format(",{}", summary.D_mean(r, i));
    heatmap += "\n";
  }

  std::string simplex = "id";
  for (int g : mains) simplex += fmt::format(",group_{}", g + 1);
  simplex += ",surface_distance\n";
  if (!mains.empty()) {
    const auto proj = project_simplex(summary.D_mean, mains);
    for (std::size_t r = 0; r < ids.size(); ++r) {
      simplex += csv::escape(ids[r]);
      for (Eigen::Index k = 0; k < proj.coords.cols(); ++k)
        simplex += fmt::format(",{}", proj.coords(r, k));
      simplex += fmt::format(",{}\n", proj.surface_distance[r]);
    }
  } else {
    for (const auto& id : ids) simplex += csv::escape(id) + ",0\n";
  }

  const auto n = static_cast<Eigen::Index>(ids.size());
  std::string positions = "id,year,mean_position";
  if (a.histogram)
    for (Eigen::Index p = 1; p <= n; ++p) positions += fmt::format(",pos_{}", p);
  positions += "\n";
  for (const auto& row : table.rows) {
    positions += fmt::format("{},{},{}", csv::escape(row.id), row.year, row.mean_position);
    if (a.histogram) {
      const auto r = static_cast<Eigen::Index>(
          std::find(ids.begin(), ids.end(), row.id) - ids.begin());
      for (Eigen::Index p = 0; p < n; ++p) positions += fmt::format(",{}", summary.position_hist(r, p));
    }
    positions += "\n";
  }

  const auto dir = a.out.empty() ? run : resolve_out_dir(a.out);
  Manifest manifest("summarize", dir);
  manifest.input("run", a.run);
  if (!a.nodes.empty()) manifest.input("nodes", a.nodes);
  manifest.config({{"threshold", a.threshold}, {"histogram", a.histogram}});
  manifest.write("summary.json", summary_json.dump(2) + "\n");
  manifest.write("heatmap.csv", heatmap);
  manifest.write("simplex.csv", simplex);
  manifest.write("positions.csv", positions);
  // summarize may share the run directory with fit; keep fit's manifest intact
  if (dir == run) {
    manifest.finish_as("summarize-manifest.json");
  } else {
    manifest.finish();
  }

  for (int i = 0; i < K; ++i)
    out << fmt::format("group {}: {} (C_mean diagonal {:.4f})\n", i + 1,
                       to_string(summary.group_kind[i]), summary.C_mean(i, i));
  if (!table.excluded.empty())
    out << table.excluded.size() << " node(s) without a year left out of positions.csv\n";
  return kExitOk;
}

// ---- simulate -----------------------------------------------------------

struct SimulateArgs {
  int n = 0, K = 2, base_year = 1900;
  double c_diag = 0.8, c_off = 0.05, alpha = 1.0;
  std::optional<double> purity;
  bool hard = false, include_z = false;
  std::string year_mode = "none", out;
  std::uint64_t seed = 1;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  if (a.n < 1) throw ConfigError("--n must be at least 1");
  if (a.K < 1) throw ConfigError("--K must be at least 1");
  if (a.hard && a.purity) throw ConfigError("--hard-membership and --purity are exclusive");
  SynthSpec spec;
  spec.n = a.n;
  spec.K = a.K;
  spec.C_true = planted_block_matrix(a.K, a.c_diag, a.c_off);
  spec.alpha_true = a.alpha;
  spec.seed = a.seed;
  spec.base_year = a.base_year;
  if (a.year_mode == "position-linked")
    spec.year_mode = YearMode::kPositionLinked;
  else if (a.year_mode != "none")
    throw ConfigError("--year-mode must be 'none' or 'position-linked'");
  if (a.hard || a.purity)
    // memberships use their own stream so edges do not depend on this choice
    spec.D_true = near_hard_memberships(a.n, a.K, a.hard ? 1.0 : *a.purity, a.seed ^ 0x9e3779b97f4a7c15ULL);
  const auto truth = generate(spec);

  const auto dir = resolve_out_dir(a.out);
  Manifest manifest("simulate", dir);
  manifest.seed(a.seed);
  manifest.config({{"n", a.n}, {"K", a.K}, {"c_diag", a.c_diag}, {"c_off", a.c_off},
                   {"alpha", a.alpha}, {"hard_membership", a.hard},
                   {"purity", a.purity ? json(*a.purity) : json(nullptr)},
                   {"year_mode", a.year_mode}, {"base_year", a.base_year}});
  manifest.write("nodes.csv", write_nodes_csv(truth.graph.nodes()));
  manifest.write("edges.csv", write_edges_csv(truth.graph.edges()));
  manifest.write("truth.json", io::truth_to_json(truth, a.include_z).dump(2) + "\n");
  manifest.finish();
  out << "simulated n=" << truth.graph.size() << " m=" << truth.graph.edge_count() << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixed-membership block model for citation DAGs with a latent topological order",
               "dagmm"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  CleanArgs clean;
  auto* c = app.add_subcommand("clean", "Break mutual citations and check the result is a DAG");
  c->add_option("--nodes", clean.nodes, "nodes.csv (id,label,year,month)")->required();
  c->add_option("--edges", clean.edges, "edges.csv (from,to)")->required();
  c->add_option("--seed", clean.seed, "seed for tie-breaking");
  c->add_option("--out", clean.out, "output directory");

  StatsArgs stats;
  auto* s = app.add_subcommand("stats", "Counts, densities, degrees and one topological order");
  s->add_option("--nodes", stats.nodes, "nodes.csv");
  s->add_option("--edges", stats.edges, "edges.csv")->required();
  s->add_option("--subgraph", stats.subgraph, "file with one node id per line to keep");
  s->add_option("--out", stats.out, "output directory");

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "Run the Gibbs sampler");
  f->add_option("--edges", fit.edges, "edges.csv")->required();
  f->add_option("--nodes", fit.nodes, "nodes.csv (adds isolated nodes and year tie-breaks)");
  f->add_option("--K", fit.K, "number of groups (>= 2)")->required();
  f->add_option("--iters", fit.iters, "retained samples");
  f->add_option("--burnin", fit.burnin, "discarded sweeps");
  f->add_option("--thin", fit.thin, "sweeps between retained samples");
  f->add_option("--seed", fit.seed, "RNG seed");
  f->add_option("--s-alpha", fit.s_alpha, "alpha proposal standard deviation");
  f->add_option("--swaps", fit.swaps, "order swap proposals per sweep (0 = n)");
  f->add_option("--chains", fit.chains, "independent chains (seeds seed..seed+N-1)");
  f->add_flag("--snapshots", fit.snapshots, "write snapshots.jsonl");
  f->add_flag("--include-z", fit.include_z, "include Z in snapshots");
  f->add_option("--out", fit.out, "run directory");

  SummarizeArgs sum;
  auto* u = app.add_subcommand("summarize", "Posterior summaries from a run directory");
  u->add_option("--run", sum.run, "run directory written by fit")->required();
  u->add_option("--nodes", sum.nodes, "nodes.csv for years");
  u->add_option("--threshold", sum.threshold, "miscellaneous-group threshold on C_mean diagonal");
  u->add_flag("--histogram", sum.histogram, "add position histogram columns to positions.csv");
  u->add_option("--out", sum.out, "output directory (default: the run directory)");

  SimulateArgs sim;
  auto* m = app.add_subcommand("simulate", "Forward-simulate a DAG with known ground truth");
  m->add_option("--n", sim.n, "node count")->required();
  m->add_option("--K", sim.K, "groups");
  m->add_option("--c-diag", sim.c_diag, "within-group edge probability");
  m->add_option("--c-off", sim.c_off, "between-group edge probability");
  m->add_option("--alpha", sim.alpha, "Dirichlet concentration when memberships are drawn");
  m->add_flag("--hard-membership", sim.hard, "one-hot memberships");
  m->add_option("--purity", sim.purity, "near-hard memberships with this mass on one group");
  m->add_option("--year-mode", sim.year_mode, "none | position-linked");
  m->add_option("--base-year", sim.base_year, "year offset for position-linked years");
  m->add_option("--seed", sim.seed, "RNG seed");
  m->add_flag("--include-z", sim.include_z, "write Z_true into truth.json");
  m->add_option("--out", sim.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    if (*c) return cmd_clean(clean, out);
    if (*s) return cmd_stats(stats, out);
    if (*f) return cmd_fit(fit, out);
    if (*u) return cmd_summarize(sum, out);
    if (*m) return cmd_simulate(sim, out);
  } catch (const CycleFound& e) {
    err << "error: " << e.what() << "\n";
    return kExitGraph;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitConfig;
}

}  // namespace dagmm
