#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dagmm/graph.hpp"
#include "dagmm/model.hpp"
#include "dagmm/rng.hpp"

namespace dagmm {

/// Which kernels a sweep runs. Freezing a block keeps it at its initial value.
struct KernelFlags {
  bool z = true;
  bool d = true;
  bool c = true;
  bool alpha = true;
  bool order = true;
};

struct ChainConfig {
  std::int64_t iterations_retained = 2000;
  std::int64_t burn_in = 20000;
  std::int64_t thin = 10;
  std::uint64_t seed = 1;
  double s_alpha = 0.1;
  /// Adjacent-swap proposals per sweep; 0 means one per node.
  std::int64_t order_swaps_per_sweep = 0;
  KernelFlags update;
  /// Keep Z in retained samples. Off saves n^2 ints per sample.
  bool retain_z = true;

  /// Throws ConfigError.
  void validate() const;
};

/// The sampler's working state. Everything positional is held in the
/// current order, so Y* stays upper triangular and every kernel indexes by
/// position: ystar(p, q) = Y(o_p, o_q), zstar(p, q) = Z(o_p, o_q),
/// dstar(p, :) = D(o_p, :).
struct StarState {
  Adjacency ystar;
  LabelMatrix zstar;
  RealMatrix dstar;
  RealMatrix C;
  double alpha = 1.0;
  Ordering order;

  static StarState from_model(const ModelState& state, const Adjacency& y);
  ModelState to_model(bool with_z = true) const;

  std::size_t size() const noexcept { return order.size(); }
  int groups() const noexcept { return static_cast<int>(C.rows()); }
  /// Swaps positions p and q in the order and in every star view.
  void swap_positions(Eigen::Index p, Eigen::Index q);
};

/// Order from the graph's topological sort, alpha from its prior, D rows
/// Dirichlet(alpha), C from its Beta priors, each Z*(p, q) from row p of D*.
/// Draw order: alpha, D by node, C row-major, Z* row-major by position.
ModelState init_state(const CitationGraph& graph, const Hyperparams& h, Rng& rng);
ModelState init_state(const Adjacency& y, const Ordering& order, const Hyperparams& h, Rng& rng);

/// C(i, j) ~ Beta(E(i, j) + A(i, j), F(i, j) + B(i, j)), row-major.
RealMatrix update_C(const BlockCounts& counts, const Hyperparams& h, Rng& rng);

/// Row p of D* ~ Dirichlet(alpha + counts(p, :)).
RealMatrix update_D(const CountMatrix& mcounts, double alpha, Rng& rng);

/// Unnormalized log full conditional of alpha given D*.
double alpha_log_conditional(double alpha, const RealMatrix& dstar, const Hyperparams& h);

struct AlphaMove {
  double alpha;
  bool accepted;
};

/// Random-walk Metropolis on alpha with N(alpha, s_alpha^2) proposals.
/// Draws one normal, then one uniform only when the proposal is positive.
AlphaMove update_alpha(double alpha, const RealMatrix& dstar, const Hyperparams& h, double s_alpha,
                       Rng& rng);

/// Unnormalized full-conditional weights of Z*(p, q), p < q, over groups.
void upper_membership_weights(const StarState& s, Eigen::Index p, Eigen::Index q,
                              std::span<double> out);
/// Unnormalized full-conditional weights of Z*(q, p), p < q, over groups.
void lower_membership_weights(const StarState& s, Eigen::Index p, Eigen::Index q,
                              std::span<double> out);

/// Gibbs draw of Z*(p, q) and then Z*(q, p) using the fresh upper value.
/// Throws DegenerateWeights when every weight vanishes.
void update_Z_pair(StarState& s, Eigen::Index p, Eigen::Index q, Rng& rng);

/// Probability of accepting the swap of positions `selected` and
/// `neighbour` (adjacent) when `selected` was the uniformly drawn index.
/// Zero when Y* has an edge between them.
double swap_acceptance_probability(const StarState& s, Eigen::Index selected,
                                   Eigen::Index neighbour);

struct OrderMove {
  Eigen::Index selected = 0;
  Eigen::Index neighbour = 0;
  bool attempted = false;  ///< false when an edge blocks the swap
  bool accepted = false;
  double accept_probability = 0.0;
};

/// One adjacent-swap Metropolis proposal on the order. Draws a uniform for
/// the index, one for the direction when the index is interior, and one for
/// acceptance when the swap is not blocked.
OrderMove update_order(StarState& s, Rng& rng);

struct AcceptanceStats {
  std::int64_t alpha_proposed = 0;
  std::int64_t alpha_accepted = 0;
  std::int64_t swap_proposed = 0;
  std::int64_t swap_attempted = 0;
  std::int64_t swap_accepted = 0;

  double alpha_rate() const;
  /// Accepted over attempted (blocked proposals excluded).
  double swap_rate() const;
};

/// Systematic scan: every Z pair (p < q, row-major), then D, C, alpha and
/// the configured number of order swaps. Frozen kernels are skipped.
void sweep(StarState& s, const Hyperparams& h, const ChainConfig& cfg, Rng& rng,
           AcceptanceStats& stats);

struct Chain {
  std::vector<ModelState> samples;
  std::vector<std::int64_t> sweep_index;  ///< 1-based sweep count at each retained sample
  std::vector<double> log_joint_trace;
  ChainConfig config;
  AcceptanceStats acceptance;
};

/// Seeds a generator with cfg.seed, initializes from the graph and runs.
Chain run_chain(const CitationGraph& graph, const Hyperparams& h, const ChainConfig& cfg);
/// Runs from the given state using a generator seeded with cfg.seed.
Chain run_chain(const Adjacency& y, const ModelState& initial, const Hyperparams& h,
                const ChainConfig& cfg);
/// Runs from the given state on a caller-owned generator.
Chain run_chain(const Adjacency& y, const ModelState& initial, const Hyperparams& h,
                const ChainConfig& cfg, Rng& rng);

}  // namespace dagmm
