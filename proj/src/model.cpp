#include "dagmm/model.hpp"

#include <cmath>
#include <limits>

namespace dagmm {

namespace {

constexpr double kRowTolerance = 1e-9;

// A zero exponent contributes nothing even at the boundary (0 * log 0).
double xlogy(double coef, double x) { return coef == 0.0 ? 0.0 : coef * std::log(x); }

double log_beta_density(double x, double a, double b) {
  return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + xlogy(a - 1.0, x) +
         xlogy(b - 1.0, 1.0 - x);
}

}  // namespace

Hyperparams Hyperparams::defaults(int K) {
  Hyperparams h;
  h.K = K;
  h.A = RealMatrix::Ones(K, K);
  h.B = RealMatrix::Ones(K, K);
  return h;
}

void Hyperparams::validate() const {
  if (K < 1) throw ConfigError("K must be at least 1");
  if (A.rows() != K || A.cols() != K || B.rows() != K || B.cols() != K)
    throw ConfigError("Beta hyperparameter matrices must be KxK");
  if ((A.array() <= 0.0).any() || (B.array() <= 0.0).any())
    throw ConfigError("Beta hyperparameters must be positive");
  if (!(shape > 0.0) || !(rate > 0.0)) throw ConfigError("Gamma hyperparameters must be positive");
}

void normalize_rows(RealMatrix& d) {
  for (Eigen::Index r = 0; r < d.rows(); ++r) {
    if ((d.row(r).array() < 0.0).any()) throw ConfigError("negative membership probability");
    const double total = d.row(r).sum();
    if (!(total > 0.0)) throw ConfigError("membership row has no mass");
    d.row(r) /= total;
  }
}

void validate_state(const ModelState& state) {
  const auto n = static_cast<Eigen::Index>(state.order.size());
  const auto K = state.C.rows();
  if (state.C.cols() != K) throw DimensionMismatch("C must be square");
  if (state.D.rows() != n || state.D.cols() != K)
    throw DimensionMismatch("D must be n x K");
  if (state.Z.rows() != n || state.Z.cols() != n) throw DimensionMismatch("Z must be n x n");
  if ((state.C.array() < 0.0).any() || (state.C.array() > 1.0).any())
    throw ConfigError("C entries must lie in [0, 1]");
  for (Eigen::Index r = 0; r < n; ++r) {
    if ((state.D.row(r).array() < 0.0).any()) throw ConfigError("negative membership probability");
    if (std::abs(state.D.row(r).sum() - 1.0) > kRowTolerance)
      throw ConfigError("membership row " + std::to_string(r) + " does not sum to 1");
    for (Eigen::Index s = 0; s < n; ++s) {
      const int z = state.Z(r, s);
      if (r == s ? z != kNoGroup : (z < 0 || z >= K))
        throw ConfigError("Z entry out of range at (" + std::to_string(r) + ", " +
                          std::to_string(s) + ")");
    }
  }
}

double log_joint(const ModelState& state, const Adjacency& y, const Hyperparams& h) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const auto n = static_cast<Eigen::Index>(state.order.size());
  const int K = state.groups();
  if (y.rows() != n || y.cols() != n) throw DimensionMismatch("adjacency does not match state");
  if (h.K != K) throw DimensionMismatch("hyperparameters are for a different K");
  validate_state(state);
  if (!(state.alpha > 0.0)) return kNegInf;
  const Adjacency ystar = reorder(y, state.order);
  if (!is_upper_triangular(ystar)) return kNegInf;
  return log_joint_reordered(ystar, reorder(state.Z, state.order),
                             reorder_rows(state.D, state.order), state.C, state.alpha, h);
}

double log_joint_reordered(const Adjacency& ystar, const LabelMatrix& zstar, const RealMatrix& dstar,
                           const RealMatrix& C, double alpha, const Hyperparams& h) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (!(alpha > 0.0) || !is_upper_triangular(ystar)) return kNegInf;
  const auto n = ystar.rows();
  const int K = static_cast<int>(C.rows());
  double total = 0.0;
  for (Eigen::Index q = 1; q < n; ++q) {
    for (Eigen::Index p = 0; p < q; ++p) {
      const int i = zstar(p, q);
      const int j = zstar(q, p);
      const double c = C(i, j);
      total += ystar(p, q) ? std::log(c) : std::log1p(-c);
      total += std::log(dstar(p, i)) + std::log(dstar(q, j));
    }
  }
  for (Eigen::Index p = 0; p < n; ++p) {
    total += std::lgamma(K * alpha) - K * std::lgamma(alpha);
    for (int i = 0; i < K; ++i) total += xlogy(alpha - 1.0, dstar(p, i));
  }
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j) {
      total += log_beta_density(C(i, j), h.A(i, j), h.B(i, j));
    }
  total += h.shape * std::log(h.rate) - std::lgamma(h.shape) + (h.shape - 1.0) * std::log(alpha) -
           h.rate * alpha;
  return total;
}

BlockCounts block_counts(const LabelMatrix& zstar, const Adjacency& ystar, int K) {
  const auto n = zstar.rows();
  if (zstar.cols() != n || ystar.rows() != n || ystar.cols() != n)
    throw DimensionMismatch("block_counts: Z* and Y* must be matching square matrices");
  BlockCounts counts{CountMatrix::Zero(K, K), CountMatrix::Zero(K, K)};
  for (Eigen::Index q = 1; q < n; ++q)
    for (Eigen::Index p = 0; p < q; ++p) {
      auto& target = ystar(p, q) ? counts.edges : counts.non_edges;
      ++target(zstar(p, q), zstar(q, p));
    }
  return counts;
}

CountMatrix membership_counts(const LabelMatrix& zstar, int K) {
  const auto n = zstar.rows();
  CountMatrix counts = CountMatrix::Zero(n, K);
  for (Eigen::Index q = 0; q < n; ++q)
    for (Eigen::Index p = 0; p < n; ++p)
      if (p != q) ++counts(p, zstar(p, q));
  return counts;
}

}  // namespace dagmm
