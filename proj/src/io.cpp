#include "dagmm/io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace dagmm::io {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

json to_json(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

RealMatrix real_matrix_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected a matrix (array of rows)");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows ? static_cast<Eigen::Index>(j.front().size()) : 0;
  RealMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ParseError("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[c].get<double>();
  }
  return m;
}

json to_json(const Hyperparams& h) {
  return {{"K", h.K}, {"A", to_json(h.A)}, {"B", to_json(h.B)}, {"shape", h.shape}, {"rate", h.rate}};
}

Hyperparams hyperparams_from_json(const json& j) {
  Hyperparams h;
  h.K = j.at("K").get<int>();
  h.A = real_matrix_from_json(j.at("A"));
  h.B = real_matrix_from_json(j.at("B"));
  h.shape = j.at("shape").get<double>();
  h.rate = j.at("rate").get<double>();
  return h;
}

json to_json(const ChainConfig& cfg) {
  return {{"iterations_retained", cfg.iterations_retained},
          {"burn_in", cfg.burn_in},
          {"thin", cfg.thin},
          {"seed", cfg.seed},
          {"s_alpha", cfg.s_alpha},
          {"order_swaps_per_sweep", cfg.order_swaps_per_sweep},
          {"update",
           {{"z", cfg.update.z},
            {"d", cfg.update.d},
            {"c", cfg.update.c},
            {"alpha", cfg.update.alpha},
            {"order", cfg.update.order}}}};
}

ChainConfig chain_config_from_json(const json& j) {
  ChainConfig cfg;
  cfg.iterations_retained = j.at("iterations_retained").get<std::int64_t>();
  cfg.burn_in = j.at("burn_in").get<std::int64_t>();
  cfg.thin = j.at("thin").get<std::int64_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.s_alpha = j.at("s_alpha").get<double>();
  cfg.order_swaps_per_sweep = j.at("order_swaps_per_sweep").get<std::int64_t>();
  if (j.contains("update")) {
    const auto& u = j.at("update");
    cfg.update = {u.at("z").get<bool>(), u.at("d").get<bool>(), u.at("c").get<bool>(),
                  u.at("alpha").get<bool>(), u.at("order").get<bool>()};
  }
  return cfg;
}

json to_json(const CleanReport& report) {
  json removed = json::array();
  for (const auto& r : report.removed)
    removed.push_back({{"from", r.from}, {"to", r.to}, {"reason", std::string(to_string(r.reason))}});
  return {{"seed", report.seed}, {"removed", std::move(removed)}};
}

json state_to_json(const ModelState& state, std::span<const std::string> ids, bool include_z) {
  json order = json::array();
  for (int r : state.order.nodes()) order.push_back(ids[r]);
  json j = {{"alpha", state.alpha}, {"C", to_json(state.C)}, {"D", to_json(state.D)},
            {"o", std::move(order)}};
  if (include_z && state.Z.size()) {
    json z = json::array();
    for (Eigen::Index r = 0; r < state.Z.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index s = 0; s < state.Z.cols(); ++s)
        row.push_back(state.Z(r, s) == kNoGroup ? kNoGroup : state.Z(r, s) + 1);
      z.push_back(std::move(row));
    }
    j["Z"] = std::move(z);
  }
  return j;
}

ModelState state_from_json(const json& j, std::span<const std::string> ids) {
  std::unordered_map<std::string, int> index;
  for (std::size_t r = 0; r < ids.size(); ++r) index.emplace(ids[r], static_cast<int>(r));
  ModelState state;
  state.alpha = j.at("alpha").get<double>();
  state.C = real_matrix_from_json(j.at("C"));
  state.D = real_matrix_from_json(j.at("D"));
  std::vector<int> order;
  for (const auto& id : j.at("o")) {
    const auto it = index.find(id.get<std::string>());
    if (it == index.end()) throw UnknownNode(id.get<std::string>());
    order.push_back(it->second);
  }
  state.order = Ordering(std::move(order));
  if (j.contains("Z")) {
    const auto& z = j.at("Z");
    const auto n = static_cast<Eigen::Index>(z.size());
    state.Z.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index s = 0; s < n; ++s) {
        const int v = z[r][s].get<int>();
        state.Z(r, s) = v == kNoGroup ? kNoGroup : v - 1;
      }
  }
  return state;
}

std::string trace_header(int K) {
  std::string out = "iter,log_joint,alpha";
  for (int i = 1; i <= K; ++i)
    for (int j = 1; j <= K; ++j) out += fmt::format(",C_{}_{}", i, j);
  return out + "\n";
}

std::string trace_row(std::int64_t iter, double log_joint, const ModelState& state) {
  std::string out = fmt::format("{},{},{}", iter, log_joint, state.alpha);
  for (Eigen::Index i = 0; i < state.C.rows(); ++i)
    for (Eigen::Index j = 0; j < state.C.cols(); ++j) out += fmt::format(",{}", state.C(i, j));
  return out + "\n";
}

std::string trace_csv(const Chain& chain) {
  if (chain.samples.empty()) throw EmptyChain();
  std::string out = trace_header(chain.samples.front().groups());
  for (std::size_t k = 0; k < chain.samples.size(); ++k)
    out += trace_row(chain.sweep_index[k], chain.log_joint_trace[k], chain.samples[k]);
  return out;
}

json posterior_to_json(const PosteriorSummary& summary) {
  return {{"samples", summary.samples},
          {"C_mean", to_json(summary.C_mean)},
          {"D_mean", to_json(summary.D_mean)},
          {"alpha_mean", summary.alpha_mean},
          {"alpha_sd", summary.alpha_sd},
          {"position_hist", to_json(summary.position_hist)}};
}

PosteriorSummary posterior_from_json(const json& j, double threshold) {
  PosteriorSummary s;
  s.samples = j.at("samples").get<std::size_t>();
  s.C_mean = real_matrix_from_json(j.at("C_mean"));
  s.D_mean = real_matrix_from_json(j.at("D_mean"));
  s.alpha_mean = j.at("alpha_mean").get<double>();
  s.alpha_sd = j.at("alpha_sd").get<double>();
  s.position_hist = real_matrix_from_json(j.at("position_hist"));
  if (s.C_mean.rows() != s.C_mean.cols() || s.D_mean.cols() != s.C_mean.rows() ||
      s.position_hist.rows() != s.D_mean.rows())
    throw ParseError("posterior.json has inconsistent shapes");
  s.group_kind = classify_groups(s.C_mean, threshold);
  s.assignment = assign_nodes(s.D_mean, s.group_kind);
  return s;
}

json truth_to_json(const SynthTruth& truth, bool include_z) {
  const auto& nodes = truth.graph.nodes();
  json order = json::array();
  for (int r : truth.order.nodes()) order.push_back(nodes[r].id);
  json labels = json::array();
  for (Eigen::Index r = 0; r < truth.D.rows(); ++r) {
    Eigen::Index best = 0;
    truth.D.row(r).maxCoeff(&best);
    labels.push_back(best + 1);
  }
  json j = {{"C_true", to_json(truth.C)}, {"D_true", to_json(truth.D)},
            {"alpha_true", truth.alpha},  {"o_true", std::move(order)},
            {"labels", std::move(labels)}};
  if (include_z) {
    json z = json::array();
    for (Eigen::Index r = 0; r < truth.Z.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index s = 0; s < truth.Z.cols(); ++s)
        row.push_back(truth.Z(r, s) == kNoGroup ? kNoGroup : truth.Z(r, s) + 1);
      z.push_back(std::move(row));
    }
    j["Z_true"] = std::move(z);
  }
  return j;
}

}  // namespace dagmm::io
