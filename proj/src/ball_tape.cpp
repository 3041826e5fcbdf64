#include <pwae/ball_tape.hpp>

#include <cmath>
#include <limits>

namespace pwae::ball {

using ad::Var;

namespace {
constexpr double kNormFloor = 1e-24;   // tanh(x)/x == 1 below this in f64
constexpr double kQFloor = 1e-14;
const double kInf = std::numeric_limits<double>::infinity();
}  // namespace

Var sq_norm(Var x) { return sum(square(x)); }

Var mobius_add(Var x, Var y, const BallConfig& cfg) {
  const double c = cfg.c;
  Var xy = sum(x * y);
  Var xx = sq_norm(x);
  Var yy = sq_norm(y);
  Var cross = 2.0 * c * xy;
  Var num = (cross + c * yy + 1.0) * x + (1.0 - c * xx) * y;
  Var den = cross + (c * c) * (xx * yy) + 1.0;
  return project(num / den, cfg);
}

Var mobius_scale(Var r, Var x, const BallConfig& cfg) {
  const double sc = std::sqrt(cfg.c);
  Var n = clamp(l2norm(x), kNormFloor, kInf);
  Var coef = tanh(r * artanh(sc * n)) / (sc * n);
  return project(coef * x, cfg);
}

Var gyro_matvec(Var M, Var x, const BallConfig& cfg) {
  const double sc = std::sqrt(cfg.c);
  Var mx = matmul(M, x);
  Var nx = clamp(l2norm(x), kNormFloor, kInf);
  Var nmx = clamp(l2norm(mx), kNormFloor, kInf);
  Var coef = tanh((nmx / nx) * artanh(sc * nx)) / (sc * nmx);
  return project(coef * mx, cfg);
}

Var exp0(Var v, const BallConfig& cfg) {
  const double sc = std::sqrt(cfg.c);
  Var n = clamp(l2norm(v), kNormFloor, kInf);
  Var coef = tanh(sc * n) / (sc * n);
  return project(coef * v, cfg);
}

Var log0(Var x, const BallConfig& cfg) {
  const double sc = std::sqrt(cfg.c);
  Var n = clamp(l2norm(x), kNormFloor, kInf);
  return (artanh(sc * n) / (sc * n)) * x;
}

Var distance_from_q(Var q, double c) {
  q = clamp(q, kQFloor, kInf);
  Var root = sqrt(q * (q + 2.0));
  return log(q + root + 1.0) * (1.0 / std::sqrt(c));
}

Var distance(Var x, Var y, const BallConfig& cfg) {
  const double c = cfg.c;
  Var ax = 1.0 - c * sq_norm(x);
  Var ay = 1.0 - c * sq_norm(y);
  Var q = (2.0 * c) * sq_norm(x - y) / (ax * ay);
  return distance_from_q(q, c);
}

Var project(Var x, const BallConfig& cfg) {
  const double sc = std::sqrt(cfg.c);
  const double lim = (1.0 - cfg.eps) / sc;
  const double n = x.value().map().norm();
  if (n <= lim) return x;
  Var nv = l2norm(x);
  return (x * lim) / nv;
}

}  // namespace pwae::ball
