#pragma once

#include <cstdint>
#include <optional>

#include "dagmm/graph.hpp"
#include "dagmm/model.hpp"

namespace dagmm {

enum class YearMode { kNone, kPositionLinked };

struct SynthSpec {
  int n = 0;
  int K = 2;
  RealMatrix C_true;
  double alpha_true = 1.0;
  /// Explicit memberships; when absent rows are drawn Dirichlet(alpha_true).
  std::optional<RealMatrix> D_true;
  std::uint64_t seed = 1;
  YearMode year_mode = YearMode::kNone;
  /// Position-linked years: node at 1-based position p gets base_year + n - p.
  int base_year = 1900;

  /// Throws ConfigError.
  void validate() const;
};

/// Ground truth: the true order is the identity, so truth.graph's adjacency
/// is upper triangular as generated.
struct SynthTruth {
  CitationGraph graph;
  Ordering order;
  LabelMatrix Z;
  RealMatrix D;
  RealMatrix C;
  double alpha = 1.0;
};

/// Memberships concentrated on one group per node: `purity` on the node's
/// group and the remainder spread evenly. Groups are drawn uniformly.
/// labels, when given, receives the 0-based group of each node.
RealMatrix near_hard_memberships(int n, int K, double purity, std::uint64_t seed,
                                 std::vector<int>* labels = nullptr);

/// Block matrix with `diag` on the diagonal and `off` elsewhere.
RealMatrix planted_block_matrix(int K, double diag, double off);

/// Forward simulation. Draw order on a generator seeded with spec.seed:
/// D rows (if not given), then for each p < q row-major Z*(p,q), Z*(q,p)
/// and the edge.
SynthTruth generate(const SynthSpec& spec);

/// Synthetic node ids "v001".."vNNN", zero-padded so lexicographic order
/// matches index order.
std::string synthetic_node_id(int index, int n);

}  // namespace dagmm
