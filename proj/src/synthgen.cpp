#include "dagmm/synthgen.hpp"

#include <cmath>

#include "dagmm/rng.hpp"

namespace dagmm {

void SynthSpec::validate() const {
  if (n < 1) throw ConfigError("n must be at least 1");
  if (K < 1) throw ConfigError("K must be at least 1");
  if (C_true.rows() != K || C_true.cols() != K) throw ConfigError("C_true must be KxK");
  if ((C_true.array() < 0.0).any() || (C_true.array() > 1.0).any())
    throw ConfigError("C_true entries must lie in [0, 1]");
  if (D_true) {
    if (D_true->rows() != n || D_true->cols() != K) throw ConfigError("D_true must be n x K");
    if ((D_true->array() < 0.0).any()) throw ConfigError("D_true entries must be nonnegative");
    for (Eigen::Index r = 0; r < n; ++r)
      if (std::abs(D_true->row(r).sum() - 1.0) > 1e-9)
        throw ConfigError("D_true rows must sum to 1");
  } else if (!(alpha_true > 0.0)) {
    throw ConfigError("alpha_true must be positive");
  }
  if (year_mode == YearMode::kPositionLinked && (base_year + 1 < 1800 || base_year + n > 2100))
    throw ConfigError("position-linked years fall outside 1800-2100");
}

std::string synthetic_node_id(int index, int n) {
  const std::string digits = std::to_string(index + 1);
  const std::size_t width = std::max<std::size_t>(3, std::to_string(n).size());
  return "v" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

RealMatrix near_hard_memberships(int n, int K, double purity, std::uint64_t seed,
                                 std::vector<int>* labels) {
  if (n < 1 || K < 1) throw ConfigError("near_hard_memberships needs n, K >= 1");
  if (!(purity >= 0.0 && purity <= 1.0)) throw ConfigError("purity must lie in [0, 1]");
  Rng rng(seed);
  const double rest = K > 1 ? (1.0 - purity) / (K - 1) : 0.0;
  RealMatrix d = RealMatrix::Constant(n, K, rest);
  if (labels) labels->assign(n, 0);
  for (int r = 0; r < n; ++r) {
    const int g = std::min(K - 1, static_cast<int>(draw_uniform(rng) * K));
    d(r, g) = K > 1 ? purity : 1.0;
    if (labels) (*labels)[r] = g;
  }
  return d;
}

RealMatrix planted_block_matrix(int K, double diag, double off) {
  RealMatrix c = RealMatrix::Constant(K, K, off);
  c.diagonal().setConstant(diag);
  return c;
}

SynthTruth generate(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const int n = spec.n;
  const int K = spec.K;
  SynthTruth truth;
  truth.C = spec.C_true;
  truth.alpha = spec.alpha_true;
  if (spec.D_true) {
    truth.D = *spec.D_true;
  } else {
    truth.D.resize(n, K);
    std::vector<double> conc(K, spec.alpha_true), row(K);
    for (int r = 0; r < n; ++r) {
      draw_dirichlet(rng, conc, row);
      for (int i = 0; i < K; ++i) truth.D(r, i) = row[i];
    }
  }
  truth.order = Ordering::identity(n);
  truth.Z = LabelMatrix::Constant(n, n, kNoGroup);

  std::vector<NodeMeta> nodes(n);
  for (int r = 0; r < n; ++r) {
    nodes[r].id = synthetic_node_id(r, n);
    if (spec.year_mode == YearMode::kPositionLinked) nodes[r].year = spec.base_year + n - (r + 1);
  }
  EdgeList edges;
  std::vector<double> wp(K), wq(K);
  for (int p = 0; p < n; ++p) {
    for (int i = 0; i < K; ++i) wp[i] = truth.D(p, i);
    for (int q = p + 1; q < n; ++q) {
      for (int i = 0; i < K; ++i) wq[i] = truth.D(q, i);
      const int zpq = draw_categorical(rng, wp);
      const int zqp = draw_categorical(rng, wq);
      truth.Z(p, q) = zpq;
      truth.Z(q, p) = zqp;
      if (draw_bernoulli(rng, truth.C(zpq, zqp))) edges.push_back({nodes[p].id, nodes[q].id});
    }
  }
  truth.graph = CitationGraph(std::move(nodes), edges);
  return truth;
}

}  // namespace dagmm
