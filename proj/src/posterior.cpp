#include "dagmm/posterior.hpp"

#include <charconv>
#include <cmath>

namespace dagmm {

std::string_view to_string(GroupKind kind) {
  return kind == GroupKind::kMain ? "main" : "miscellaneous";
}

PosteriorSummary summarize(std::span<const ModelState> samples, double threshold) {
  if (samples.empty()) throw EmptyChain();
  const auto& first = samples.front();
  const auto n = static_cast<Eigen::Index>(first.size());
  const int K = first.groups();
  PosteriorSummary out;
  out.samples = samples.size();
  out.C_mean = RealMatrix::Zero(K, K);
  out.D_mean = RealMatrix::Zero(n, K);
  out.position_hist = RealMatrix::Zero(n, n);
  double alpha_sum = 0.0;
  for (const auto& s : samples) {
    if (s.groups() != K || static_cast<Eigen::Index>(s.size()) != n)
      throw DimensionMismatch("samples differ in shape");
    out.C_mean += s.C;
    out.D_mean += s.D;
    alpha_sum += s.alpha;
    for (Eigen::Index r = 0; r < n; ++r) out.position_hist(r, s.order.position_of(r)) += 1.0;
  }
  const double count = static_cast<double>(samples.size());
  out.C_mean /= count;
  out.D_mean /= count;
  out.position_hist /= count;
  out.alpha_mean = alpha_sum / count;
  if (samples.size() > 1) {
    double ss = 0.0;
    for (const auto& s : samples) ss += (s.alpha - out.alpha_mean) * (s.alpha - out.alpha_mean);
    out.alpha_sd = std::sqrt(ss / (count - 1.0));
  }
  out.group_kind = classify_groups(out.C_mean, threshold);
  out.assignment = assign_nodes(out.D_mean, out.group_kind);
  return out;
}

PosteriorSummary summarize(const Chain& chain, double threshold) {
  return summarize(std::span<const ModelState>(chain.samples), threshold);
}

std::vector<GroupKind> classify_groups(const RealMatrix& C_mean, double threshold) {
  std::vector<GroupKind> kinds(C_mean.rows());
  for (Eigen::Index i = 0; i < C_mean.rows(); ++i)
    kinds[i] = C_mean(i, i) < threshold ? GroupKind::kMiscellaneous : GroupKind::kMain;
  return kinds;
}

std::vector<int> assign_nodes(const RealMatrix& D_mean, std::span<const GroupKind> kinds) {
  const auto K = D_mean.cols();
  if (static_cast<Eigen::Index>(kinds.size()) != K)
    throw DimensionMismatch("one group kind per column of D_mean expected");
  const double cutoff = 1.0 / static_cast<double>(K);
  bool any_misc = false;
  for (auto k : kinds) any_misc |= k == GroupKind::kMiscellaneous;

  std::vector<int> out(D_mean.rows());
  for (Eigen::Index r = 0; r < D_mean.rows(); ++r) {
    const auto best_of = [&](GroupKind kind) {
      int best = -1;
      for (Eigen::Index i = 0; i < K; ++i)
        if (kinds[i] == kind && (best < 0 || D_mean(r, i) > D_mean(r, best)))
          best = static_cast<int>(i);
      return best;
    };
    const int main = best_of(GroupKind::kMain);
    if (main >= 0 && (D_mean(r, main) > cutoff || !any_misc))
      out[r] = main;
    else
      out[r] = best_of(GroupKind::kMiscellaneous);
  }
  return out;
}

SimplexProjection project_simplex(const RealMatrix& D_mean, std::span<const int> main_groups) {
  if (main_groups.empty()) throw ConfigError("project_simplex needs at least one main group");
  for (int g : main_groups)
    if (g < 0 || g >= D_mean.cols()) throw ConfigError("main group index out of range");
  const auto n = D_mean.rows();
  const auto m = static_cast<Eigen::Index>(main_groups.size());
  SimplexProjection out;
  out.main_groups.assign(main_groups.begin(), main_groups.end());
  out.coords.resize(n, m);
  out.surface_distance.resize(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    double mass = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) mass += D_mean(r, main_groups[k]);
    out.surface_distance[r] = mass;
    for (Eigen::Index k = 0; k < m; ++k)
      out.coords(r, k) = mass > 0.0 ? D_mean(r, main_groups[k]) / mass : 1.0 / static_cast<double>(m);
  }
  return out;
}

std::vector<double> mean_positions(const PosteriorSummary& summary) {
  const auto n = summary.position_hist.rows();
  std::vector<double> out(n, 0.0);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index p = 0; p < n; ++p)
      out[r] += static_cast<double>(p + 1) * summary.position_hist(r, p);
  return out;
}

PositionTable position_vs_year(const PosteriorSummary& summary, std::span<const NodeMeta> nodes) {
  if (static_cast<Eigen::Index>(nodes.size()) != summary.position_hist.rows())
    throw DimensionMismatch("node metadata does not match the summary");
  const auto means = mean_positions(summary);
  PositionTable table;
  for (std::size_t r = 0; r < nodes.size(); ++r) {
    if (!nodes[r].year) {
      table.excluded.push_back(nodes[r].id);
      continue;
    }
    table.rows.push_back({nodes[r].id, *nodes[r].year, means[r]});
  }
  return table;
}

std::vector<double> autocorrelation(std::span<const double> series, std::size_t max_lag) {
  const std::size_t n = series.size();
  if (n == 0) return {};
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (double x : series) c0 += (x - mean) * (x - mean);
  if (!(c0 > 0.0)) return {};
  const std::size_t lags = std::min(max_lag, n - 1);
  std::vector<double> acf(lags + 1);
  for (std::size_t k = 0; k <= lags; ++k) {
    double ck = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) ck += (series[t] - mean) * (series[t + k] - mean);
    acf[k] = ck / c0;
  }
  return acf;
}

double effective_sample_size(std::span<const double> series, std::size_t max_lag) {
  const auto acf = autocorrelation(series, max_lag);
  const double n = static_cast<double>(series.size());
  if (acf.empty()) return n;
  double tail = 0.0;
  for (std::size_t k = 1; k < acf.size() && acf[k] > 0.0; ++k) tail += acf[k];
  return n / (1.0 + 2.0 * tail);
}

namespace {

// Splits "C_1_2" style names into 1-based integer indices after the prefix.
std::optional<std::vector<int>> parse_indices(std::string_view rest, std::size_t count) {
  std::vector<int> out;
  while (!rest.empty()) {
    if (rest.front() != '_') return std::nullopt;
    rest.remove_prefix(1);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
    if (ec != std::errc() || v < 1) return std::nullopt;
    out.push_back(v - 1);
    rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
  }
  if (out.size() != count) return std::nullopt;
  return out;
}

}  // namespace

std::vector<double> extract_series(const Chain& chain, std::string_view name) {
  if (chain.samples.empty()) throw EmptyChain();
  const auto& first = chain.samples.front();
  const int K = first.groups();
  const auto n = static_cast<int>(first.size());
  std::vector<double> out;
  out.reserve(chain.samples.size());
  if (name == "alpha") {
    for (const auto& s : chain.samples) out.push_back(s.alpha);
    return out;
  }
  if (name == "log_joint") return chain.log_joint_trace;
  const auto starts = [&](std::string_view prefix) { return name.substr(0, prefix.size()) == prefix; };
  if (starts("C")) {
    if (auto idx = parse_indices(name.substr(1), 2); idx && (*idx)[0] < K && (*idx)[1] < K) {
      for (const auto& s : chain.samples) out.push_back(s.C((*idx)[0], (*idx)[1]));
      return out;
    }
  } else if (starts("D")) {
    if (auto idx = parse_indices(name.substr(1), 2); idx && (*idx)[0] < n && (*idx)[1] < K) {
      for (const auto& s : chain.samples) out.push_back(s.D((*idx)[0], (*idx)[1]));
      return out;
    }
  } else if (starts("position")) {
    if (auto idx = parse_indices(name.substr(8), 1); idx && (*idx)[0] < n) {
      for (const auto& s : chain.samples) out.push_back(s.order.position_of((*idx)[0]) + 1.0);
      return out;
    }
  }
  throw UnknownSeries(std::string(name));
}

SeriesDiagnostics diagnostics(const Chain& chain, std::string_view name, std::size_t max_lag) {
  SeriesDiagnostics out;
  out.trace = extract_series(chain, name);
  out.acf = autocorrelation(out.trace, max_lag);
  out.degenerate = out.acf.empty();
  out.ess = effective_sample_size(out.trace, max_lag);
  return out;
}

}  // namespace dagmm
