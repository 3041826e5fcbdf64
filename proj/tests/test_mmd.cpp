#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <pwae/hgauss.hpp>
#include <pwae/mmd.hpp>

#include "oracles.hpp"

#include <cmath>

using namespace pwae;
using namespace pwae::mmd;

namespace {
const ball::BallConfig kUnit{};
const KernelParams kDefault{};

ball::LatentPoint lp1(double x, double y) {
  return {{ball::BallPoint(Eigen::Vector2d(x, y), kUnit)}};
}

std::vector<ball::LatentPoint> prior_cloud(int n, int d, Rng& rng) {
  std::vector<ball::LatentPoint> out;
  out.reserve(n);
  hgauss::PriorSamplerConfig cfg;
  for (int i = 0; i < n; ++i) out.push_back(hgauss::sample_prior(d, cfg, kUnit, rng));
  return out;
}
}  // namespace

TEST_CASE("kernel point values") {
  ball::LatentPoint x = lp1(0.3, -0.2);
  CHECK(laplace_kernel(x, x, kDefault) == 1.0);

  CHECK(laplace_kernel(lp1(0.0, 0.0), lp1(0.5, 0.0), kDefault) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  ball::LatentPoint a{{lp1(0.0, 0.0).blocks[0], lp1(0.0, 0.0).blocks[0]}};
  ball::LatentPoint b{{lp1(0.5, 0.0).blocks[0], lp1(0.5, 0.0).blocks[0]}};
  CHECK(laplace_kernel(a, b, kDefault) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));

  CHECK_THROWS_AS(laplace_kernel(x, a, kDefault), std::invalid_argument);
  CHECK_THROWS_AS((KernelParams{0.0}).validate(), std::invalid_argument);
}

TEST_CASE("kernel symmetry and range") {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    ball::LatentPoint x{{oracle::random_point(2, 0.95, kUnit, rng)}};
    ball::LatentPoint y{{oracle::random_point(2, 0.95, kUnit, rng)}};
    const double kxy = laplace_kernel(x, y, kDefault);
    CHECK(kxy == laplace_kernel(y, x, kDefault));
    CHECK(kxy > 0.0);
    CHECK(kxy <= 1.0);
  }
}

TEST_CASE("two-sample estimate with identical pairs reduces to k(a,b) - 1") {
  ball::LatentPoint a = lp1(0.2, 0.1), b = lp1(-0.4, 0.3);
  std::vector<ball::LatentPoint> s = {a, b};
  const double k = laplace_kernel(a, b, kDefault);
  CHECK(mmd_estimate(s, s, kDefault) == doctest::Approx(k - 1.0).epsilon(1e-12));
  CHECK(mmd_estimate(s, s, kDefault) <= 0.0);
}

TEST_CASE("estimate requires n >= 2") {
  std::vector<ball::LatentPoint> one = {lp1(0.1, 0.1)};
  CHECK_THROWS_AS(mmd_estimate(one, one, kDefault), std::invalid_argument);
}

TEST_CASE("same-distribution estimate is near zero") {
  double acc = 0.0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    Rng rng(100 + s);
    auto a = prior_cloud(512, 2, rng);
    auto b = prior_cloud(512, 2, rng);
    acc += mmd_estimate(a, b, kDefault);
  }
  CHECK(std::abs(acc / seeds) < 0.05);
}

TEST_CASE("well separated clouds give a large estimate") {
  Rng rng(7);
  std::vector<ball::LatentPoint> a, b;
  // Tight cloud at the origin and one at geodesic distance 2 from it.
  ball::BallPoint center = hgauss::point_at_geodesic_polar(2.0, 0.0, kUnit);
  for (int i = 0; i < 128; ++i) {
    a.push_back({{ball::BallPoint(oracle::random_in_ball(2, 0.05, rng), kUnit)}});
    ball::BallPoint jitter(oracle::random_in_ball(2, 0.05, rng), kUnit);
    b.push_back({{ball::mobius_add(center, jitter)}});
  }
  CHECK(mmd_estimate(a, b, kDefault) > 0.3);
}

TEST_CASE("estimate is symmetric in its two sample sets") {
  Rng rng(9);
  auto a = prior_cloud(64, 4, rng);
  auto b = prior_cloud(64, 4, rng);
  CHECK(mmd_estimate(a, b, kDefault) == doctest::Approx(mmd_estimate(b, a, kDefault)).epsilon(1e-14));
}

TEST_CASE("same-set estimate identity") {
  Rng rng(11);
  auto a = prior_cloud(32, 2, rng);
  const std::size_t n = a.size();
  double off = 0.0, all = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double k = laplace_kernel(a[i], a[j], kDefault);
      all += k;
      if (i != j) off += k;
    }
  const double nn = static_cast<double>(n);
  const double expected = 2.0 * off / (nn * (nn - 1.0)) - 2.0 * all / (nn * nn);
  CHECK(mmd_estimate(a, a, kDefault) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("gram matrix basics") {
  std::vector<ball::LatentPoint> single = {lp1(0.3, 0.3)};
  Mat g1 = gram(single, kDefault);
  CHECK(g1.rows() == 1);
  CHECK(g1(0, 0) == 1.0);

  std::vector<ball::LatentPoint> dup = {lp1(0.3, 0.3), lp1(0.3, 0.3), lp1(-0.2, 0.1)};
  Mat g = gram(dup, kDefault);
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  CHECK(es.eigenvalues().minCoeff() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gram of prior samples is positive semidefinite") {
  Rng rng(13);
  auto pts = prior_cloud(200, 4, rng);
  Mat g = gram(pts, kDefault);
  CHECK((g - g.transpose()).norm() == 0.0);
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  CHECK(es.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("tape estimate matches the plain estimator") {
  Rng rng(15);
  for (int rep = 0; rep < 5; ++rep) {
    const int n = 24;
    auto prior = prior_cloud(n, 5, rng);
    auto post = prior_cloud(n, 5, rng);
    ad::Tape tape;
    std::vector<LatentVars> post_vars(n);
    for (int i = 0; i < n; ++i)
      for (const auto& blk : post[static_cast<std::size_t>(i)].blocks)
        post_vars[static_cast<std::size_t>(i)].blocks.push_back(
            tape.leaf(ad::Tensor::vector(blk.coords())));
    ad::Var est = mmd_graph(tape, post_vars, prior, kDefault, kUnit);
    CHECK(est.value().scalar_value() ==
          doctest::Approx(mmd_estimate(prior, post, kDefault)).epsilon(1e-9));
  }
}

TEST_CASE("tape estimate gradient matches central differences") {
  Rng rng(17);
  const int n = 8;
  auto prior = prior_cloud(n, 4, rng);

  // Posterior block coordinates as flat parameters, norms <= 0.8.
  std::vector<ad::Tensor> coords;
  std::vector<ad::Tensor*> params;
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < 2; ++b)
      coords.push_back(ad::Tensor::vector(oracle::random_in_ball(2, 0.8, rng)));
  for (auto& t : coords) params.push_back(&t);

  auto build = [&](ad::Tape& tape, std::vector<ad::Var>& vars) {
    std::vector<LatentVars> post(n);
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < 2; ++b) {
        vars.push_back(tape.leaf(coords[static_cast<std::size_t>(i * 2 + b)]));
        post[static_cast<std::size_t>(i)].blocks.push_back(vars.back());
      }
    return mmd_graph(tape, post, prior, kDefault, kUnit);
  };
  CHECK(ad::grad_check(build, params, 1e-5) < 1e-3);
}

TEST_CASE("euclidean variant matches its plain estimator and differentiates") {
  Rng rng(19);
  const int n = 8, d = 3;
  Mat prior(n, d), post(n, d);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) {
      prior(i, j) = gauss(rng);
      post(i, j) = gauss(rng);
    }

  std::vector<ad::Tensor> rows;
  std::vector<ad::Tensor*> params;
  for (int i = 0; i < n; ++i) rows.push_back(ad::Tensor::vector(post.row(i).transpose()));
  for (auto& t : rows) params.push_back(&t);

  auto build = [&](ad::Tape& tape, std::vector<ad::Var>& vars) {
    for (auto& r : rows) vars.push_back(tape.leaf(r));
    return mmd_graph_euclidean(tape, vars, prior, kDefault);
  };
  {
    ad::Tape tape;
    std::vector<ad::Var> vars;
    ad::Var est = build(tape, vars);
    CHECK(est.value().scalar_value() ==
          doctest::Approx(mmd_estimate_euclidean(prior, post, kDefault)).epsilon(1e-9));
  }
  CHECK(ad::grad_check(build, params, 1e-5) < 1e-3);
}
