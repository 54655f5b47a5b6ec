#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dagmm/graph.hpp"
#include "dagmm/model.hpp"
#include "dagmm/sampler.hpp"

namespace dagmm {

enum class GroupKind { kMain, kMiscellaneous };
std::string_view to_string(GroupKind kind);

inline constexpr double kDefaultMiscThreshold = 0.1;

struct PosteriorSummary {
  RealMatrix C_mean;
  RealMatrix D_mean;  ///< node-indexed
  double alpha_mean = 0.0;
  double alpha_sd = 0.0;
  std::vector<GroupKind> group_kind;
  std::vector<int> assignment;  ///< 0-based group per node
  /// position_hist(r, p): fraction of samples with node r at position p (0-based).
  RealMatrix position_hist;
  std::size_t samples = 0;
};

/// Sample means over retained samples, then classify_groups / assign_nodes
/// at `threshold`. Throws EmptyChain.
PosteriorSummary summarize(std::span<const ModelState> samples,
                           double threshold = kDefaultMiscThreshold);
PosteriorSummary summarize(const Chain& chain, double threshold = kDefaultMiscThreshold);

/// Group i is miscellaneous iff C_mean(i, i) < threshold.
std::vector<GroupKind> classify_groups(const RealMatrix& C_mean,
                                       double threshold = kDefaultMiscThreshold);

/// A node joins its most likely main group when some main membership
/// exceeds 1/K, otherwise its most likely miscellaneous group. Without
/// miscellaneous groups it falls back to the most likely main group.
/// Ties go to the lowest index. Result is 0-based.
std::vector<int> assign_nodes(const RealMatrix& D_mean, std::span<const GroupKind> kinds);

struct SimplexProjection {
  std::vector<int> main_groups;
  /// coords(r, k): barycentric weight of node r on vertex main_groups[k].
  RealMatrix coords;
  /// Total membership on the main groups; 0 puts the node at the centroid.
  std::vector<double> surface_distance;
};

/// Throws ConfigError when main_groups is empty or out of range.
SimplexProjection project_simplex(const RealMatrix& D_mean, std::span<const int> main_groups);

struct PositionRow {
  std::string id;
  int year = 0;
  double mean_position = 0.0;  ///< 1-based
};

struct PositionTable {
  std::vector<PositionRow> rows;
  std::vector<std::string> excluded;  ///< nodes without a year
};

/// Mean (1-based) position of each node alongside its year.
/// `nodes` is indexed like the summary.
PositionTable position_vs_year(const PosteriorSummary& summary, std::span<const NodeMeta> nodes);

/// Mean 1-based position of every node.
std::vector<double> mean_positions(const PosteriorSummary& summary);

/// Biased sample autocorrelation, lag 0 (= 1) through max_lag.
/// Empty when the series is constant.
std::vector<double> autocorrelation(std::span<const double> series, std::size_t max_lag);

/// N / (1 + 2 * sum of positive-lag ACF up to the first negative lag).
double effective_sample_size(std::span<const double> series, std::size_t max_lag = 50);

struct SeriesDiagnostics {
  std::vector<double> trace;
  std::vector<double> acf;
  double ess = 0.0;
  bool degenerate = false;  ///< constant series: acf empty, ess = N
};

/// Series names (1-based indices): "alpha", "log_joint", "C_i_j",
/// "D_r_i" (node r), "position_r" (node r). Throws UnknownSeries, EmptyChain.
std::vector<double> extract_series(const Chain& chain, std::string_view name);
SeriesDiagnostics diagnostics(const Chain& chain, std::string_view name, std::size_t max_lag = 50);

}  // namespace dagmm
