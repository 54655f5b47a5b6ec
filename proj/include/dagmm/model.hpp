#pragma once

#include "dagmm/types.hpp"

namespace dagmm {

/// Priors: C(i,j) ~ Beta(A(i,j), B(i,j)), alpha ~ Gamma(shape, rate),
/// each membership row ~ Dirichlet(alpha, ..., alpha), order uniform.
struct Hyperparams {
  int K = 2;
  RealMatrix A;
  RealMatrix B;
  double shape = 3.0;
  double rate = 3.0;

  /// A = B = all-ones, Gamma(3, 3).
  static Hyperparams defaults(int K);
  /// Throws ConfigError on K < 1, wrongly sized or non-positive entries.
  void validate() const;
};

/// Full parameter tuple, indexed by node (not by position):
///   Z(r, s)  group node r takes when interacting with s, kNoGroup on the diagonal
///   D(r, i)  membership probability of node r in group i (rows on the simplex)
///   C(i, j)  probability that a group-i node cites a group-j node
///   order    topological order of the nodes
struct ModelState {
  LabelMatrix Z;
  RealMatrix D;
  RealMatrix C;
  double alpha = 1.0;
  Ordering order;

  std::size_t size() const noexcept { return order.size(); }
  int groups() const noexcept { return static_cast<int>(C.rows()); }
};

/// Throws DimensionMismatch or ConfigError when a component invariant fails.
void validate_state(const ModelState& state);

/// Rescales each row to sum to 1. Throws ConfigError on negative entries or
/// a row with no mass.
void normalize_rows(RealMatrix& d);

/// Log of the unnormalized joint posterior density. -inf when the order is not
/// topological for y or alpha <= 0. Throws DimensionMismatch.
double log_joint(const ModelState& state, const Adjacency& y, const Hyperparams& h);

/// log_joint evaluated on views already reordered by the current order
/// (ystar, zstar by position; dstar rows by position). Skips validation.
double log_joint_reordered(const Adjacency& ystar, const LabelMatrix& zstar, const RealMatrix& dstar,
                           const RealMatrix& C, double alpha, const Hyperparams& h);

/// Per ordered group pair (i, j): upper-triangle dyads p < q with
/// Z*(p,q) = i and Z*(q,p) = j, split by edge presence.
struct BlockCounts {
  CountMatrix edges;
  CountMatrix non_edges;
};

BlockCounts block_counts(const LabelMatrix& zstar, const Adjacency& ystar, int K);

/// counts(p, i) = #{q != p : Z*(p, q) = i}.
CountMatrix membership_counts(const LabelMatrix& zstar, int K);

}  // namespace dagmm
