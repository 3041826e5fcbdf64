#pragma once

#include <pwae/autodiff.hpp>
#include <pwae/ball.hpp>

#include <span>
#include <utility>
#include <vector>

namespace pwae::hgauss {

/// Normalization constant of the hyperbolic Gaussian on the disk:
/// Z(sigma) = 2*pi*sqrt(pi/2)*sigma*exp(sigma^2/2)*erf(sigma/sqrt(2)).
double normalizer(double sigma);

/// Isotropic-per-block Gaussian on a product of ball blocks. Block
/// dimensions are restricted to 1 and 2, where the disk normalizer applies.
struct HyperGaussian {
  ball::LatentPoint mu;
  std::vector<double> sigma;  // one scale per block, >= 1e-4

  void validate() const;
};

/// Sum over blocks of -d(x_b, mu_b)^2 / (2 sigma_b^2) - log Z(sigma_b).
double log_pdf(const ball::LatentPoint& x, const HyperGaussian& g);

struct PriorSamplerConfig {
  double r_max = 5.0;  // geodesic radius cutoff of the uniform proposal
  double sigma = 1.0;  // prior scale
};

/// Inverse CDF of the radius that is uniform w.r.t. hyperbolic area on a
/// disk of geodesic radius r_max: r = acosh(1 + a (cosh r_max - 1)).
double radius_from_uniform(double a, double r_max);

/// 1-D counterpart with proposal density proportional to cosh r on
/// [0, r_max]: r = asinh(a sinh r_max).
double radius_from_uniform_1d(double a, double r_max);

/// Draws (r, phi) uniform w.r.t. hyperbolic area, r in [0, r_max],
/// phi in [0, 2*pi).
std::pair<double, double> sample_uniform_hyperbolic_disk(double r_max, Rng& rng);

/// Ball point at geodesic polar coordinates (r, phi):
/// norm tanh(sqrt(c) r / 2) / sqrt(c) in direction (cos phi, sin phi).
ball::BallPoint point_at_geodesic_polar(double r, double phi, const ball::BallConfig& cfg);

/// One 2-D block from the standard hyperbolic prior: uniform-disk proposal,
/// accepted with probability exp(-r^2 / (2 sigma^2)).
ball::BallPoint sample_prior_block(const PriorSamplerConfig& cfg, const ball::BallConfig& ball_cfg,
                                   Rng& rng);

/// 1-D block by the same rejection scheme on a geodesic interval.
ball::BallPoint sample_prior_block_1d(const PriorSamplerConfig& cfg,
                                      const ball::BallConfig& ball_cfg, Rng& rng);

/// Stacks independent low-dimensional blocks: floor(d/2) 2-D blocks plus a
/// trailing 1-D block when d is odd.
ball::LatentPoint sample_prior(int d, const PriorSamplerConfig& cfg,
                               const ball::BallConfig& ball_cfg, Rng& rng);

/// Same, with an explicit block-dimension layout (entries in {1, 2}).
ball::LatentPoint sample_prior(std::span<const int> block_dims, const PriorSamplerConfig& cfg,
                               const ball::BallConfig& ball_cfg, Rng& rng);

/// log_pdf with the mean blocks on tape; x and the scales stay fixed.
/// Used to differentiate the density w.r.t. mu.
ad::Var log_pdf_mu(std::span<const ad::Var> mu_blocks, const ball::LatentPoint& x,
                   std::span<const double> sigma, const ball::BallConfig& cfg);

}  // namespace pwae::hgauss
