#include "dagmm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace dagmm {

void ChainConfig::validate() const {
  if (iterations_retained < 1) throw ConfigError("iterations_retained must be positive");
  if (burn_in < 0) throw ConfigError("burn_in must be nonnegative");
  if (thin < 1) throw ConfigError("thin must be positive");
  if (!(s_alpha > 0.0)) throw ConfigError("s_alpha must be positive");
  if (order_swaps_per_sweep < 0) throw ConfigError("order_swaps_per_sweep must be nonnegative");
}

StarState StarState::from_model(const ModelState& state, const Adjacency& y) {
  validate_state(state);
  StarState s;
  s.ystar = reorder(y, state.order);
  s.zstar = reorder(state.Z, state.order);
  s.dstar = reorder_rows(state.D, state.order);
  s.C = state.C;
  s.alpha = state.alpha;
  s.order = state.order;
  return s;
}

ModelState StarState::to_model(bool with_z) const {
  const Ordering back = order.inverse();
  ModelState state;
  if (with_z) state.Z = reorder(zstar, back);
  state.D = reorder_rows(dstar, back);
  state.C = C;
  state.alpha = alpha;
  state.order = order;
  return state;
}

void StarState::swap_positions(Eigen::Index p, Eigen::Index q) {
  ystar.row(p).swap(ystar.row(q));
  ystar.col(p).swap(ystar.col(q));
  zstar.row(p).swap(zstar.row(q));
  zstar.col(p).swap(zstar.col(q));
  dstar.row(p).swap(dstar.row(q));
  order.swap_positions(static_cast<std::size_t>(p), static_cast<std::size_t>(q));
}

ModelState init_state(const CitationGraph& graph, const Hyperparams& h, Rng& rng) {
  return init_state(graph.adjacency(), topological_order(graph), h, rng);
}

ModelState init_state(const Adjacency& y, const Ordering& order, const Hyperparams& h, Rng& rng) {
  h.validate();
  const auto n = static_cast<Eigen::Index>(order.size());
  if (y.rows() != n || y.cols() != n) throw DimensionMismatch("adjacency does not match order");
  if (!is_upper_triangular(reorder(y, order)))
    throw ConfigError("initial order is not topological for the adjacency");
  const int K = h.K;

  ModelState state;
  state.order = order;
  state.alpha = draw_gamma(rng, h.shape, h.rate);
  state.D.resize(n, K);
  std::vector<double> conc(K, state.alpha), row(K);
  for (Eigen::Index r = 0; r < n; ++r) {
    draw_dirichlet(rng, conc, row);
    for (int i = 0; i < K; ++i) state.D(r, i) = row[i];
  }
  state.C.resize(K, K);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j) state.C(i, j) = draw_beta(rng, h.A(i, j), h.B(i, j));
  state.Z = LabelMatrix::Constant(n, n, kNoGroup);
  for (Eigen::Index p = 0; p < n; ++p) {
    const int r = order.node_at(p);
    for (int i = 0; i < K; ++i) row[i] = state.D(r, i);
    for (Eigen::Index q = 0; q < n; ++q) {
      if (p == q) continue;
      int z = draw_categorical(rng, row);
      if (z < 0) z = 0;  // unreachable: Dirichlet rows carry positive mass
      state.Z(r, order.node_at(q)) = z;
    }
  }
  return state;
}

RealMatrix update_C(const BlockCounts& counts, const Hyperparams& h, Rng& rng) {
  const int K = h.K;
  RealMatrix C(K, K);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j)
      C(i, j) = draw_beta(rng, static_cast<double>(counts.edges(i, j)) + h.A(i, j),
                          static_cast<double>(counts.non_edges(i, j)) + h.B(i, j));
  return C;
}

RealMatrix update_D(const CountMatrix& mcounts, double alpha, Rng& rng) {
  const auto n = mcounts.rows();
  const auto K = mcounts.cols();
  RealMatrix dstar(n, K);
  std::vector<double> conc(K), row(K);
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index i = 0; i < K; ++i) conc[i] = alpha + static_cast<double>(mcounts(p, i));
    draw_dirichlet(rng, conc, row);
    for (Eigen::Index i = 0; i < K; ++i) dstar(p, i) = row[i];
  }
  return dstar;
}

double alpha_log_conditional(double alpha, const RealMatrix& dstar, const Hyperparams& h) {
  if (!(alpha > 0.0)) return -std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(dstar.rows());
  const double K = static_cast<double>(dstar.cols());
  const double sum_log_d = dstar.array().log().sum();
  return n * std::lgamma(K * alpha) - n * K * std::lgamma(alpha) + alpha * sum_log_d +
         (h.shape - 1.0) * std::log(alpha) - h.rate * alpha;
}

AlphaMove update_alpha(double alpha, const RealMatrix& dstar, const Hyperparams& h, double s_alpha,
                       Rng& rng) {
  const double proposal = draw_normal(rng, alpha, s_alpha);
  if (!(proposal > 0.0)) return {alpha, false};
  const double u = draw_uniform(rng);
  if (proposal == alpha) return {alpha, true};
  const double log_ratio =
      alpha_log_conditional(proposal, dstar, h) - alpha_log_conditional(alpha, dstar, h);
  if (std::log(u) < log_ratio) return {proposal, true};
  return {alpha, false};
}

void upper_membership_weights(const StarState& s, Eigen::Index p, Eigen::Index q,
                              std::span<double> out) {
  const int partner = s.zstar(q, p);
  const bool edge = s.ystar(p, q) != 0;
  for (int i = 0; i < s.groups(); ++i) {
    const double c = s.C(i, partner);
    out[i] = (edge ? c : 1.0 - c) * s.dstar(p, i);
  }
}

void lower_membership_weights(const StarState& s, Eigen::Index p, Eigen::Index q,
                              std::span<double> out) {
  const int partner = s.zstar(p, q);
  const bool edge = s.ystar(p, q) != 0;
  for (int j = 0; j < s.groups(); ++j) {
    const double c = s.C(partner, j);
    out[j] = (edge ? c : 1.0 - c) * s.dstar(q, j);
  }
}

void update_Z_pair(StarState& s, Eigen::Index p, Eigen::Index q, Rng& rng) {
  double buffer[64];
  std::vector<double> heap;
  std::span<double> weights;
  if (s.groups() <= 64) {
    weights = std::span<double>(buffer, s.groups());
  } else {
    heap.resize(s.groups());
    weights = heap;
  }
  upper_membership_weights(s, p, q, weights);
  const int upper = draw_categorical(rng, weights);
  if (upper < 0)
    throw DegenerateWeights("all weights vanish for Z*(" + std::to_string(p + 1) + "," +
                            std::to_string(q + 1) + ")");
  s.zstar(p, q) = upper;
  lower_membership_weights(s, p, q, weights);
  const int lower = draw_categorical(rng, weights);
  if (lower < 0)
    throw DegenerateWeights("all weights vanish for Z*(" + std::to_string(q + 1) + "," +
                            std::to_string(p + 1) + ")");
  s.zstar(q, p) = lower;
}

double swap_acceptance_probability(const StarState& s, Eigen::Index selected,
                                   Eigen::Index neighbour) {
  const auto n = static_cast<Eigen::Index>(s.size());
  const Eigen::Index a = std::min(selected, neighbour);
  const Eigen::Index b = std::max(selected, neighbour);
  if (s.ystar(a, b)) return 0.0;
  // Non-edge likelihood of the dyad after the swap over before it.
  const double after = 1.0 - s.C(s.zstar(b, a), s.zstar(a, b));
  const double before = 1.0 - s.C(s.zstar(a, b), s.zstar(b, a));
  // The end positions have one neighbour, so a pair touching an end is
  // proposed at rate 1/n from the end and 1/(2n) from the inner side.
  double factor = 1.0;
  if (n > 2) {
    const auto is_end = [n](Eigen::Index p) { return p == 0 || p == n - 1; };
    if (is_end(selected))
      factor = 0.5;
    else if (is_end(neighbour))
      factor = 2.0;
  }
  if (before == 0.0) return after == 0.0 ? 0.0 : 1.0;
  return std::min(1.0, factor * after / before);
}

OrderMove update_order(StarState& s, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(s.size());
  OrderMove move;
  if (n < 2) return move;
  move.selected = std::min<Eigen::Index>(
      static_cast<Eigen::Index>(draw_uniform(rng) * static_cast<double>(n)), n - 1);
  if (move.selected == 0)
    move.neighbour = 1;
  else if (move.selected == n - 1)
    move.neighbour = n - 2;
  else
    move.neighbour = draw_uniform(rng) < 0.5 ? move.selected - 1 : move.selected + 1;
  const Eigen::Index a = std::min(move.selected, move.neighbour);
  const Eigen::Index b = std::max(move.selected, move.neighbour);
  if (s.ystar(a, b)) return move;
  move.attempted = true;
  move.accept_probability = swap_acceptance_probability(s, move.selected, move.neighbour);
  if (draw_uniform(rng) < move.accept_probability) {
    s.swap_positions(a, b);
    move.accepted = true;
  }
  return move;
}

double AcceptanceStats::alpha_rate() const {
  return alpha_proposed ? static_cast<double>(alpha_accepted) / static_cast<double>(alpha_proposed)
                        : 0.0;
}

double AcceptanceStats::swap_rate() const {
  return swap_attempted
             ? static_cast<double>(swap_accepted) / static_cast<double>(swap_attempted)
             : 0.0;
}

void sweep(StarState& s, const Hyperparams& h, const ChainConfig& cfg, Rng& rng,
           AcceptanceStats& stats) {
  const auto n = static_cast<Eigen::Index>(s.size());
  if (cfg.update.z)
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) update_Z_pair(s, p, q, rng);
  if (cfg.update.d) s.dstar = update_D(membership_counts(s.zstar, h.K), s.alpha, rng);
  if (cfg.update.c) s.C = update_C(block_counts(s.zstar, s.ystar, h.K), h, rng);
  if (cfg.update.alpha) {
    const auto move = update_alpha(s.alpha, s.dstar, h, cfg.s_alpha, rng);
    s.alpha = move.alpha;
    ++stats.alpha_proposed;
    stats.alpha_accepted += move.accepted;
  }
  if (cfg.update.order) {
    const std::int64_t swaps = cfg.order_swaps_per_sweep ? cfg.order_swaps_per_sweep : n;
    for (std::int64_t k = 0; k < swaps; ++k) {
      const auto move = update_order(s, rng);
      ++stats.swap_proposed;
      stats.swap_attempted += move.attempted;
      stats.swap_accepted += move.accepted;
    }
  }
}

Chain run_chain(const CitationGraph& graph, const Hyperparams& h, const ChainConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const ModelState initial = init_state(graph, h, rng);
  return run_chain(graph.adjacency(), initial, h, cfg, rng);
}

Chain run_chain(const Adjacency& y, const ModelState& initial, const Hyperparams& h,
                const ChainConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  return run_chain(y, initial, h, cfg, rng);
}

Chain run_chain(const Adjacency& y, const ModelState& initial, const Hyperparams& h,
                const ChainConfig& cfg, Rng& rng) {
  cfg.validate();
  h.validate();
  if (initial.groups() != h.K) throw DimensionMismatch("initial state has a different K");
  StarState s = StarState::from_model(initial, y);
  if (!is_upper_triangular(s.ystar))
    throw ConfigError("initial order is not topological for the adjacency");
  Chain chain;
  chain.config = cfg;
  chain.samples.reserve(static_cast<std::size_t>(cfg.iterations_retained));
  std::int64_t done = 0;
  for (; done < cfg.burn_in; ++done) sweep(s, h, cfg, rng, chain.acceptance);
  for (std::int64_t k = 0; k < cfg.iterations_retained; ++k) {
    for (std::int64_t t = 0; t < cfg.thin; ++t, ++done) sweep(s, h, cfg, rng, chain.acceptance);
    chain.samples.push_back(s.to_model(cfg.retain_z));
    chain.sweep_index.push_back(done);
    chain.log_joint_trace.push_back(
        log_joint_reordered(s.ystar, s.zstar, s.dstar, s.C, s.alpha, h));
  }
  return chain;
}

}  // namespace dagmm
