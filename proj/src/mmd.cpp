#include <pwae/mmd.hpp>

#include <pwae/ball_tape.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pwae::mmd {

using ad::Tensor;
using ad::Var;

void KernelParams::validate() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("KernelParams: lambda must be positive");
}

double laplace_kernel(const ball::LatentPoint& x, const ball::LatentPoint& y,
                      const KernelParams& p) {
  p.validate();
  return std::exp(-p.lambda * ball::block_distance_sum(x, y));
}

Mat gram(std::span<const ball::LatentPoint> points, const KernelParams& p) {
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Mat g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double k = laplace_kernel(points[static_cast<std::size_t>(i)],
                                      points[static_cast<std::size_t>(j)], p);
      g(i, j) = k;
      g(j, i) = k;
    }
  }
  return g;
}

double mmd_estimate(std::span<const ball::LatentPoint> prior,
                    std::span<const ball::LatentPoint> posterior, const KernelParams& p) {
  const std::size_t n = prior.size();
  if (n != posterior.size() || n < 2)
    throw std::invalid_argument("mmd_estimate: need two sample sets of equal size n >= 2");
  p.validate();
  double s_pp = 0.0, s_qq = 0.0, s_pq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      s_pp += laplace_kernel(prior[i], prior[j], p);
      s_qq += laplace_kernel(posterior[i], posterior[j], p);
    }
    for (std::size_t j = 0; j < n; ++j) s_pq += laplace_kernel(prior[i], posterior[j], p);
  }
  const double nn = static_cast<double>(n);
  return 2.0 * s_pp / (nn * (nn - 1.0)) + 2.0 * s_qq / (nn * (nn - 1.0)) -
         2.0 * s_pq / (nn * nn);
}

namespace {

struct BlockConstants {
  Var coords;   // n x m
  Var alpha;    // n, entries 1 - c ||p_j||^2
  Var sqnorms;  // n
};

BlockConstants block_constants(ad::Tape& tape, const Mat& pts, double c) {
  BlockConstants out;
  out.coords = tape.leaf(Tensor::matrix(pts), false);
  Vec sq = pts.rowwise().squaredNorm();
  out.sqnorms = tape.leaf(Tensor::vector(sq), false);
  out.alpha = tape.leaf(Tensor::vector((1.0 - c * sq.array()).matrix()), false);
  return out;
}

// Geodesic distances from one on-tape point to every row of a fixed block,
// using ||p - x||^2 = ||p||^2 - 2 <p, x> + ||x||^2.
Var distances_to_rows(Var x, Var sx, Var ax, const BlockConstants& k, double c) {
  Var s = matmul(k.coords, x);
  Var sqd = (k.sqnorms - 2.0 * s) + sx;
  Var q = ((sqd / k.alpha) / ax) * (2.0 * c);
  return ball::distance_from_q(q, c);
}

}  // namespace

Var mmd_graph(ad::Tape& tape, std::span<const LatentVars> posterior,
              std::span<const ball::LatentPoint> prior, const KernelParams& p,
              const ball::BallConfig& cfg) {
  const std::size_t n = posterior.size();
  if (n != prior.size() || n < 2)
    throw std::invalid_argument("mmd_graph: need two sample sets of equal size n >= 2");
  p.validate();
  const double c = cfg.c;
  const std::size_t nblocks = prior[0].blocks.size();

  // The prior-prior term carries no gradient; evaluate it off tape.
  double s_pp = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s_pp += laplace_kernel(prior[i], prior[j], p);
  const double nn = static_cast<double>(n);
  const double pp_term = 2.0 * s_pp / (nn * (nn - 1.0));

  std::vector<BlockConstants> prior_const(nblocks), post_const(nblocks);
  for (std::size_t b = 0; b < nblocks; ++b) {
    const Eigen::Index m = prior[0].blocks[b].dim();
    Mat pc(n, m), qc(n, m);
    for (std::size_t i = 0; i < n; ++i) {
      pc.row(static_cast<Eigen::Index>(i)) = prior[i].blocks[b].coords().transpose();
      qc.row(static_cast<Eigen::Index>(i)) =
          posterior[i].blocks[b].value().to_vec().transpose();
    }
    prior_const[b] = block_constants(tape, pc, c);
    post_const[b] = block_constants(tape, qc, c);
  }

  Var s_cross, s_post;
  for (std::size_t i = 0; i < n; ++i) {
    Var d_prior, d_post;
    for (std::size_t b = 0; b < nblocks; ++b) {
      Var x = posterior[i].blocks[b];
      Var sx = ball::sq_norm(x);
      Var ax = 1.0 - c * sx;
      Var dp = distances_to_rows(x, sx, ax, prior_const[b], c);
      Var dq = distances_to_rows(x, sx, ax, post_const[b], c);
      d_prior = b == 0 ? dp : d_prior + dp;
      d_post = b == 0 ? dq : d_post + dq;
    }
    Var k_prior = exp(d_prior * (-p.lambda));
    Var k_post = exp(d_post * (-p.lambda));
    Var cross_i = sum(k_prior);
    // Drop the pairing of z_i with its own detached copy.
    Var post_i = sum(k_post) - tape.slice(k_post, static_cast<Eigen::Index>(i), 0, 1, 1);
    s_cross = i == 0 ? cross_i : s_cross + cross_i;
    s_post = i == 0 ? post_i : s_post + post_i;
  }

  // One side of each posterior-posterior pair is detached, which halves the
  // gradient; 2*T - value(T) restores it while keeping the value.
  Var t = s_post * (1.0 / (nn * (nn - 1.0)));
  Var post_term = 2.0 * t - t.value().scalar_value();
  return (post_term + s_cross * (-2.0 / (nn * nn))) + pp_term;
}

double mmd_estimate_euclidean(const Mat& prior, const Mat& posterior, const KernelParams& p) {
  const Eigen::Index n = prior.rows();
  if (n != posterior.rows() || n < 2)
    throw std::invalid_argument("mmd_estimate_euclidean: need equal sample counts n >= 2");
  p.validate();
  auto k = [&](const auto& a, const auto& b) { return std::exp(-p.lambda * (a - b).norm()); };
  double s_pp = 0.0, s_qq = 0.0, s_pq = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      s_pp += k(prior.row(i), prior.row(j));
      s_qq += k(posterior.row(i), posterior.row(j));
    }
    for (Eigen::Index j = 0; j < n; ++j) s_pq += k(prior.row(i), posterior.row(j));
  }
  const double nn = static_cast<double>(n);
  return 2.0 * s_pp / (nn * (nn - 1.0)) + 2.0 * s_qq / (nn * (nn - 1.0)) -
         2.0 * s_pq / (nn * nn);
}

Var mmd_graph_euclidean(ad::Tape& tape, std::span<const ad::Var> posterior, const Mat& prior,
                        const KernelParams& p) {
  const std::size_t n = posterior.size();
  if (static_cast<Eigen::Index>(n) != prior.rows() || n < 2)
    throw std::invalid_argument("mmd_graph_euclidean: need equal sample counts n >= 2");
  p.validate();

  Mat post_vals(n, prior.cols());
  for (std::size_t i = 0; i < n; ++i)
    post_vals.row(static_cast<Eigen::Index>(i)) = posterior[i].value().to_vec().transpose();

  const double nn = static_cast<double>(n);
  double s_pp = 0.0;
  for (Eigen::Index i = 0; i < prior.rows(); ++i)
    for (Eigen::Index j = i + 1; j < prior.rows(); ++j)
      s_pp += std::exp(-p.lambda * (prior.row(i) - prior.row(j)).norm());
  const double pp_term = 2.0 * s_pp / (nn * (nn - 1.0));

  auto side_constants = [&](const Mat& pts) {
    struct {
      Var coords, sqnorms;
    } out;
    out.coords = tape.leaf(Tensor::matrix(pts), false);
    out.sqnorms = tape.leaf(Tensor::vector(pts.rowwise().squaredNorm()), false);
    return out;
  };
  auto pc = side_constants(prior);
  auto qc = side_constants(post_vals);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  Var s_cross, s_post;
  for (std::size_t i = 0; i < n; ++i) {
    Var x = posterior[i];
    Var sx = ball::sq_norm(x);
    auto dist_vec = [&](const auto& side) {
      Var sqd = (side.sqnorms - 2.0 * matmul(side.coords, x)) + sx;
      return sqrt(clamp(sqd, 1e-18, kInf));
    };
    Var k_prior = exp(dist_vec(pc) * (-p.lambda));
    Var k_post = exp(dist_vec(qc) * (-p.lambda));
    Var cross_i = sum(k_prior);
    Var post_i = sum(k_post) - tape.slice(k_post, static_cast<Eigen::Index>(i), 0, 1, 1);
    s_cross = i == 0 ? cross_i : s_cross + cross_i;
    s_post = i == 0 ? post_i : s_post + post_i;
  }
  Var t = s_post * (1.0 / (nn * (nn - 1.0)));
  Var post_term = 2.0 * t - t.value().scalar_value();
  return (post_term + s_cross * (-2.0 / (nn * nn))) + pp_term;
}

}  // namespace pwae::mmd
