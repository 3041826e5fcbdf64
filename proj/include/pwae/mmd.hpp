#pragma once

#include <pwae/autodiff.hpp>
#include <pwae/ball.hpp>

#include <span>
#include <vector>

namespace pwae::mmd {

struct KernelParams {
  double lambda = 1.0;  // kernel scale, > 0

  void validate() const;
};

/// Geodesic Laplacian kernel on the product latent:
/// k(x, y) = exp(-lambda * sum_b d(x_b, y_b)). Symmetric, in (0, 1],
/// equals 1 iff x = y. The product-over-blocks form keeps the kernel
/// positive definite on the block structure.
double laplace_kernel(const ball::LatentPoint& x, const ball::LatentPoint& y,
                      const KernelParams& p);

/// Gram matrix k(x_i, x_j); symmetric with unit diagonal.
Mat gram(std::span<const ball::LatentPoint> points, const KernelParams& p);

/// Unbiased finite-sample estimate of MMD^2 between the two sample sets:
/// mean of off-diagonal kernel values within each set minus twice the mean
/// across sets. May be negative. Both sets must have the same size n >= 2.
double mmd_estimate(std::span<const ball::LatentPoint> prior,
                    std::span<const ball::LatentPoint> posterior, const KernelParams& p);

/// Latent code whose blocks live on a tape.
struct LatentVars {
  std::vector<ad::Var> blocks;
};

/// Tape version of mmd_estimate with the posterior samples differentiable
/// and the prior samples fixed. The value matches mmd_estimate on the
/// current posterior values; gradients flow to every posterior block.
ad::Var mmd_graph(ad::Tape& tape, std::span<const LatentVars> posterior,
                  std::span<const ball::LatentPoint> prior, const KernelParams& p,
                  const ball::BallConfig& cfg);

/// Euclidean counterpart used by the flat-latent ablation: Laplacian kernel
/// exp(-lambda ||x - y||) with rows of the two matrices as samples.
double mmd_estimate_euclidean(const Mat& prior, const Mat& posterior, const KernelParams& p);
ad::Var mmd_graph_euclidean(ad::Tape& tape, std::span<const ad::Var> posterior, const Mat& prior,
                            const KernelParams& p);

}  // namespace pwae::mmd
