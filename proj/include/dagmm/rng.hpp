#pragma once

#include <cstdint>
#include <span>

#include <boost/random/mersenne_twister.hpp>

namespace dagmm {

/// One generator per chain. mt19937_64 plus the Boost.Random distributions
/// used below are fully specified algorithms, so a seed reproduces the same
/// stream on every platform built against the same Boost release.
using Rng = boost::random::mt19937_64;

/// Uniform on the open interval (0, 1), 53 bits of resolution.
double draw_uniform(Rng& rng);
double draw_normal(Rng& rng, double mean, double sd);
/// Gamma with the given shape and rate (mean shape / rate).
double draw_gamma(Rng& rng, double shape, double rate);
/// log of a Gamma(shape, 1) draw; stays finite for shapes far below 1.
double draw_log_gamma(Rng& rng, double shape);
double draw_beta(Rng& rng, double a, double b);
/// Fills `out` with a Dirichlet(concentration) draw; entries sum to 1.
void draw_dirichlet(Rng& rng, std::span<const double> concentration, std::span<double> out);
/// Index drawn with probability proportional to `weights` (nonnegative).
/// Returns -1 when all weights are zero.
int draw_categorical(Rng& rng, std::span<const double> weights);
bool draw_bernoulli(Rng& rng, double p);

}  // namespace dagmm
