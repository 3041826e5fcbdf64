#include <pwae/ball.hpp>

#include <cmath>

namespace pwae::ball {

namespace detail {

double artanh(double x) {
  constexpr double kLim = 1.0 - 1e-12;
  if (x > kLim) x = kLim;
  if (x < -kLim) x = -kLim;
  return 0.5 * (std::log1p(x) - std::log1p(-x));
}

double acosh1p(double q) {
  if (q < 0.0) q = 0.0;
  return std::log1p(q + std::sqrt(q * (q + 2.0)));
}

void require_same_frame(const BallPoint& x, const BallPoint& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("ball: dimension mismatch");
  if (!(x.config() == y.config())) throw std::invalid_argument("ball: config mismatch");
}

}  // namespace detail

BallPoint::BallPoint(Vec raw, const BallConfig& cfg) : coords_(std::move(raw)), cfg_(cfg) {
  cfg_.validate();
  const double sc = std::sqrt(cfg_.c);
  const double lim = (1.0 - cfg_.eps) / sc;
  const double n = coords_.norm();
  if (n > lim) coords_ *= lim / n;
}

BallPoint BallPoint::origin(Eigen::Index dim, const BallConfig& cfg) {
  return BallPoint(Vec::Zero(dim), cfg);
}

BallPoint project(const Vec& raw, const BallConfig& cfg) { return BallPoint(raw, cfg); }

BallPoint mobius_add(const BallPoint& x, const BallPoint& y) {
  detail::require_same_frame(x, y);
  const double c = x.config().c;
  const double xy = x.coords().dot(y.coords());
  const double xx = x.coords().squaredNorm();
  const double yy = y.coords().squaredNorm();
  const double den = 1.0 + 2.0 * c * xy + c * c * xx * yy;
  Vec num = (1.0 + 2.0 * c * xy + c * yy) * x.coords() + (1.0 - c * xx) * y.coords();
  return BallPoint(num / den, x.config());
}

BallPoint gyro_matvec(const Mat& M, const BallPoint& x) {
  if (M.cols() != x.dim()) throw std::invalid_argument("gyro_matvec: dimension mismatch");
  const double c = x.config().c;
  const double sc = std::sqrt(c);
  Vec mx = M * x.coords();
  const double nx = x.norm();
  const double nmx = mx.norm();
  if (nx < 1e-15 || nmx < 1e-15) return BallPoint::origin(M.rows(), x.config());
  const double coef = std::tanh(nmx / nx * detail::artanh(sc * nx)) / (sc * nmx);
  return BallPoint(coef * mx, x.config());
}

BallPoint mobius_scale(double r, const BallPoint& x) {
  const double c = x.config().c;
  const double sc = std::sqrt(c);
  const double nx = x.norm();
  if (nx < 1e-15) return x;
  const double coef = std::tanh(r * detail::artanh(sc * nx)) / (sc * nx);
  return BallPoint(coef * x.coords(), x.config());
}

double distance(const BallPoint& x, const BallPoint& y) {
  detail::require_same_frame(x, y);
  const double c = x.config().c;
  const double ax = 1.0 - c * x.coords().squaredNorm();
  const double ay = 1.0 - c * y.coords().squaredNorm();
  const double q = 2.0 * c * (x.coords() - y.coords()).squaredNorm() / (ax * ay);
  return detail::acosh1p(q) / std::sqrt(c);
}

BallPoint exp0(const TangentVec& v, const BallConfig& cfg) {
  cfg.validate();
  const double sc = std::sqrt(cfg.c);
  const double n = v.norm();
  if (n < 1e-15) return BallPoint::origin(v.size(), cfg);
  return BallPoint(std::tanh(sc * n) / (sc * n) * v, cfg);
}

TangentVec log0(const BallPoint& x) {
  const double sc = std::sqrt(x.config().c);
  const double n = x.norm();
  if (n < 1e-15) return Vec::Zero(x.dim());
  return detail::artanh(sc * n) / (sc * n) * x.coords();
}

double conformal_factor(const BallPoint& x) {
  return 2.0 / (1.0 - x.config().c * x.coords().squaredNorm());
}

BallPoint exp_at(const BallPoint& x, const TangentVec& v, double scale) {
  if (v.size() != x.dim()) throw std::invalid_argument("exp_at: dimension mismatch");
  const double sc = std::sqrt(x.config().c);
  const double nv = v.norm();
  if (nv * std::abs(scale) < 1e-15) return x;
  const double lam = conformal_factor(x);
  const double coef = std::tanh(sc * lam * nv * scale / 2.0) / (sc * nv);
  BallPoint w(coef * v, x.config());
  return mobius_add(x, w);
}

Eigen::Index LatentPoint::dim() const {
  Eigen::Index d = 0;
  for (const auto& b : blocks) d += b.dim();
  return d;
}

bool LatentPoint::same_structure(const LatentPoint& other) const {
  if (blocks.size() != other.blocks.size()) return false;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].dim() != other.blocks[i].dim()) return false;
    if (!(blocks[i].config() == other.blocks[i].config())) return false;
  }
  return true;
}

double block_distance_sum(const LatentPoint& a, const LatentPoint& b) {
  if (!a.same_structure(b)) throw std::invalid_argument("LatentPoint: structure mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) s += distance(a.blocks[i], b.blocks[i]);
  return s;
}

}  // namespace pwae::ball
