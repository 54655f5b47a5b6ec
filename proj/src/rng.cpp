#include "dagmm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

namespace dagmm {

double draw_uniform(Rng& rng) {
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  return (static_cast<double>(rng() >> 11) + 0.5) * kScale;
}

double draw_normal(Rng& rng, double mean, double sd) {
  boost::random::normal_distribution<double> dist(mean, sd);
  return dist(rng);
}

double draw_log_gamma(Rng& rng, double shape) {
  if (shape >= 1.0) {
    boost::random::gamma_distribution<double> dist(shape, 1.0);
    return std::log(dist(rng));
  }
  // Gamma(a) = Gamma(a + 1) * U^(1/a)
  boost::random::gamma_distribution<double> dist(shape + 1.0, 1.0);
  const double g = dist(rng);
  return std::log(g) + std::log(draw_uniform(rng)) / shape;
}

double draw_gamma(Rng& rng, double shape, double rate) {
  return std::exp(draw_log_gamma(rng, shape)) / rate;
}

void draw_dirichlet(Rng& rng, std::span<const double> concentration, std::span<double> out) {
  const std::size_t k = concentration.size();
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = draw_log_gamma(rng, concentration[i]);
    top = std::max(top, out[i]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = std::exp(out[i] - top);
    total += out[i];
  }
  for (std::size_t i = 0; i < k; ++i) out[i] /= total;
}

double draw_beta(Rng& rng, double a, double b) {
  const double conc[2] = {a, b};
  double out[2];
  draw_dirichlet(rng, conc, out);
  return out[0];
}

int draw_categorical(Rng& rng, std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) return -1;
  const double u = draw_uniform(rng) * total;
  double acc = 0.0;
  int last_positive = -1;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = static_cast<int>(i);
    if (u < acc) return last_positive;
  }
  return last_positive;
}

bool draw_bernoulli(Rng& rng, double p) { return draw_uniform(rng) < p; }

}  // namespace dagmm
