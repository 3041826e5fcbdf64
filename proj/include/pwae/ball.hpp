#pragma once

#include <pwae/common.hpp>

#include <stdexcept>
#include <vector>

namespace pwae::ball {

/// Parameters of the Poincaré ball model: curvature magnitude `c` (the
/// manifold has constant curvature -c) and the boundary margin `eps`.
/// Every point is kept at sqrt(c)*||x|| <= 1 - eps by projection.
struct BallConfig {
  double c = 1.0;
  double eps = 1e-5;

  void validate() const {
    if (!(c > 0.0)) throw std::invalid_argument("BallConfig: c must be positive");
    if (!(eps > 0.0 && eps < 0.1)) throw std::invalid_argument("BallConfig: eps must be in (0, 0.1)");
  }
};

inline bool operator==(const BallConfig& a, const BallConfig& b) {
  return a.c == b.c && a.eps == b.eps;
}

/// A point of the open ball. Construction projects the raw coordinates onto
/// the eps-shrunk ball, so the invariant sqrt(c)*||coords|| <= 1 - eps holds
/// for every live instance.
class BallPoint {
 public:
  BallPoint() = default;
  BallPoint(Vec raw, const BallConfig& cfg);

  static BallPoint origin(Eigen::Index dim, const BallConfig& cfg);

  const Vec& coords() const { return coords_; }
  const BallConfig& config() const { return cfg_; }
  Eigen::Index dim() const { return coords_.size(); }
  double norm() const { return coords_.norm(); }

 private:
  Vec coords_;
  BallConfig cfg_;
};

using TangentVec = Vec;

/// Projects a raw vector onto the eps-shrunk ball: rescales to norm
/// (1-eps)/sqrt(c) when outside, identity otherwise. Idempotent.
BallPoint project(const Vec& raw, const BallConfig& cfg);

/// Möbius addition x ⊕ y.
BallPoint mobius_add(const BallPoint& x, const BallPoint& y);

/// Matrix-gyrovector product M^⊗ x. Defined as the origin when x = 0 or
/// Mx = 0 (continuity limit). M may be rectangular; columns must match dim(x).
BallPoint gyro_matvec(const Mat& M, const BallPoint& x);

/// Möbius scalar product r ⊗ x; equals diag(r,...,r)^⊗ x.
BallPoint mobius_scale(double r, const BallPoint& x);

/// Geodesic distance. The arccosh argument is evaluated in the cancellation
/// free form log1p(q + sqrt(q(q+2))) with q >= 0 clamped at zero.
double distance(const BallPoint& x, const BallPoint& y);

/// Exponential map at the origin and its inverse.
BallPoint exp0(const TangentVec& v, const BallConfig& cfg);
TangentVec log0(const BallPoint& x);

/// Conformal factor lambda_x = 2 / (1 - c*||x||^2); equals 2 at the origin.
double conformal_factor(const BallPoint& x);

/// Exponential map at x: follows the geodesic from x in direction v for a
/// parameter length scale*||v||. Reduces to exp0 at the origin and to the
/// identity for v = 0.
BallPoint exp_at(const BallPoint& x, const TangentVec& v, double scale = 1.0);

/// Product-manifold latent code: an ordered sequence of ball blocks.
struct LatentPoint {
  std::vector<BallPoint> blocks;

  Eigen::Index dim() const;
  bool same_structure(const LatentPoint& other) const;
};

/// Sum of per-block geodesic distances; requires matching block structure.
double block_distance_sum(const LatentPoint& a, const LatentPoint& b);

namespace detail {
double artanh(double x);  // argument clamped to |x| <= 1 - 1e-12
double acosh1p(double q);  // arccosh(1 + q) for q >= 0
void require_same_frame(const BallPoint& x, const BallPoint& y);
}  // namespace detail

}  // namespace pwae::ball
