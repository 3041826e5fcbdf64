#include <pwae/hgauss.hpp>

#include <pwae/ball_tape.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pwae::hgauss {

namespace {
constexpr double kSigmaFloor = 1e-4;
}

double normalizer(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("normalizer: sigma must be positive");
  const double pi = std::numbers::pi;
  return 2.0 * pi * std::sqrt(pi / 2.0) * sigma * std::exp(sigma * sigma / 2.0) *
         std::erf(sigma / std::sqrt(2.0));
}

void HyperGaussian::validate() const {
  if (mu.blocks.size() != sigma.size())
    throw std::invalid_argument("HyperGaussian: one sigma per block required");
  for (std::size_t b = 0; b < sigma.size(); ++b) {
    if (!(sigma[b] >= kSigmaFloor)) throw std::invalid_argument("HyperGaussian: sigma below floor");
    if (mu.blocks[b].dim() < 1 || mu.blocks[b].dim() > 2)
      throw std::invalid_argument("HyperGaussian: block dims must be 1 or 2");
  }
}

double log_pdf(const ball::LatentPoint& x, const HyperGaussian& g) {
  if (!x.same_structure(g.mu)) throw std::invalid_argument("log_pdf: structure mismatch");
  g.validate();
  double lp = 0.0;
  for (std::size_t b = 0; b < g.sigma.size(); ++b) {
    const double d = ball::distance(x.blocks[b], g.mu.blocks[b]);
    lp += -d * d / (2.0 * g.sigma[b] * g.sigma[b]) - std::log(normalizer(g.sigma[b]));
  }
  return lp;
}

double radius_from_uniform(double a, double r_max) {
  return std::acosh(1.0 + a * (std::cosh(r_max) - 1.0));
}

double radius_from_uniform_1d(double a, double r_max) {
  return std::asinh(a * std::sinh(r_max));
}

std::pair<double, double> sample_uniform_hyperbolic_disk(double r_max, Rng& rng) {
  if (!(r_max > 0.0)) throw std::invalid_argument("sample_uniform_hyperbolic_disk: r_max <= 0");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double phi = 2.0 * std::numbers::pi * unif(rng);
  const double r = radius_from_uniform(unif(rng), r_max);
  return {r, phi};
}

ball::BallPoint point_at_geodesic_polar(double r, double phi, const ball::BallConfig& cfg) {
  const double sc = std::sqrt(cfg.c);
  const double rho = std::tanh(sc * r / 2.0) / sc;
  return ball::BallPoint(Eigen::Vector2d(rho * std::cos(phi), rho * std::sin(phi)), cfg);
}

ball::BallPoint sample_prior_block(const PriorSamplerConfig& cfg, const ball::BallConfig& ball_cfg,
                                   Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double two_s2 = 2.0 * cfg.sigma * cfg.sigma;
  for (;;) {
    auto [r, phi] = sample_uniform_hyperbolic_disk(cfg.r_max, rng);
    // Acceptance ratio of the Gaussian radial target against the
    // area-uniform proposal; the bound M = 1 is attained at r = 0.
    if (unif(rng) < std::exp(-r * r / two_s2)) return point_at_geodesic_polar(r, phi, ball_cfg);
  }
}

ball::BallPoint sample_prior_block_1d(const PriorSamplerConfig& cfg,
                                      const ball::BallConfig& ball_cfg, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double two_s2 = 2.0 * cfg.sigma * cfg.sigma;
  const double sc = std::sqrt(ball_cfg.c);
  for (;;) {
    const double r = radius_from_uniform_1d(unif(rng), cfg.r_max);
    if (unif(rng) < std::exp(-r * r / two_s2)) {
      const double sign = unif(rng) < 0.5 ? -1.0 : 1.0;
      const double rho = std::tanh(sc * r / 2.0) / sc;
      return ball::BallPoint(Vec::Constant(1, sign * rho), ball_cfg);
    }
  }
}

ball::LatentPoint sample_prior(std::span<const int> block_dims, const PriorSamplerConfig& cfg,
                               const ball::BallConfig& ball_cfg, Rng& rng) {
  ball::LatentPoint z;
  z.blocks.reserve(block_dims.size());
  for (int m : block_dims) {
    if (m == 2)
      z.blocks.push_back(sample_prior_block(cfg, ball_cfg, rng));
    else if (m == 1)
      z.blocks.push_back(sample_prior_block_1d(cfg, ball_cfg, rng));
    else
      throw std::invalid_argument("sample_prior: block dims must be 1 or 2");
  }
  return z;
}

ball::LatentPoint sample_prior(int d, const PriorSamplerConfig& cfg,
                               const ball::BallConfig& ball_cfg, Rng& rng) {
  if (d < 1) throw std::invalid_argument("sample_prior: d must be positive");
  std::vector<int> dims(static_cast<std::size_t>(d / 2), 2);
  if (d % 2 == 1) dims.push_back(1);
  return sample_prior(dims, cfg, ball_cfg, rng);
}

ad::Var log_pdf_mu(std::span<const ad::Var> mu_blocks, const ball::LatentPoint& x,
                   std::span<const double> sigma, const ball::BallConfig& cfg) {
  if (mu_blocks.size() != x.blocks.size() || mu_blocks.size() != sigma.size())
    throw std::invalid_argument("log_pdf_mu: structure mismatch");
  ad::Tape& tape = *mu_blocks[0].tape;
  ad::Var lp = tape.constant(0.0);
  for (std::size_t b = 0; b < sigma.size(); ++b) {
    ad::Var xb = tape.leaf(ad::Tensor::vector(x.blocks[b].coords()), false);
    ad::Var d = ball::distance(xb, mu_blocks[b], cfg);
    lp = lp + square(d) * (-1.0 / (2.0 * sigma[b] * sigma[b])) -
         std::log(normalizer(sigma[b]));
  }
  return lp;
}

}  // namespace pwae::hgauss
