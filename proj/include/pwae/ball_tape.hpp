#pragma once

#include <pwae/autodiff.hpp>
#include <pwae/ball.hpp>

namespace pwae::ball {

// Differentiable counterparts of the ball operations, built from tape
// primitives. Forward values agree with the plain functions; near-singular
// spots (zero tangents, coincident points) are handled with zero-gradient
// clamps so the limits stated for the plain ops carry over.

ad::Var sq_norm(ad::Var x);  // sum(square(x))

ad::Var mobius_add(ad::Var x, ad::Var y, const BallConfig& cfg);
ad::Var mobius_scale(ad::Var r, ad::Var x, const BallConfig& cfg);
ad::Var gyro_matvec(ad::Var M, ad::Var x, const BallConfig& cfg);
ad::Var exp0(ad::Var v, const BallConfig& cfg);
ad::Var log0(ad::Var x, const BallConfig& cfg);
ad::Var distance(ad::Var x, ad::Var y, const BallConfig& cfg);

/// Geodesic distance from the arccosh argument offset q >= 0:
/// d = log1p(q + sqrt(q(q+2))) / sqrt(c). q is clamped below at 1e-14,
/// which zeroes the gradient for numerically coincident points.
ad::Var distance_from_q(ad::Var q, double c);

/// Trace-time projection: emits a rescale only when the current value lies
/// outside the eps-shrunk ball, otherwise returns x unchanged.
ad::Var project(ad::Var x, const BallConfig& cfg);

}  // namespace pwae::ball
