#pragma once

#include "chl/mink.hpp"

namespace chl {

// A point of the unit sphere bundle over complex hyperbolic n-space, carried as
// a group lift g: the bundle point is (z, v) = (g e0, g e1), with the common
// U(1) phase quotiented only through the distance function.
struct BundlePoint {
  int n;
  CMat lift;

  CVec z() const { return lift.col(0); }
  CVec v() const { return lift.col(1); }
};

BundlePoint base_point(int n);                       // (e0, e1), identity lift
BundlePoint act(const CMat& g, const BundlePoint& q);
BundlePoint geodesic_flow(const BundlePoint& q, double t);
BundlePoint horocycle_flow(const BundlePoint& q, double s, int sign);

// max over the defining constraints: |<z,z>+1|, |<z,v>|, |<v,v>-1|,
// |lift e0 - z|, |lift e1 - v| (the last two vanish by construction) and the
// group membership residual of the lift.
double point_residual(const BundlePoint& q);

// Tangent vector at q in the left-invariant frame; coeffs indexed by the
// pinned frame order (X, V-, V+, W-_j, Z-_j, W+_j, Z+_j), length 4n-1.
struct FrameTangent {
  BundlePoint base;
  Eigen::VectorXd coeffs;

  double frame_norm() const { return coeffs.norm(); }
};

// Diagonal transport factors of the frame under time-t geodesic transport:
// X -> 1, V- -> e^{2t}, V+ -> e^{-2t}, slow minus -> e^{t}, slow plus -> e^{-t}.
Eigen::VectorXd transport_factors(int n, double t);

// Base moves by the geodesic flow; coefficients multiply by transport_factors.
FrameTangent pushforward_frame(const FrameTangent& w, double t);

// The same transport computed with no closed form: conjugate each frame
// element by the time-t flow matrix and re-decompose in the frame; returns the
// (4n-1)x(4n-1) matrix whose column i holds the coefficients of the
// transported i-th frame direction. Used to cross-check pushforward_frame.
Eigen::MatrixXd transport_matrix_conjugation(int n, double t);

// U(1)-minimized ambient distance between bundle points:
// min_theta sqrt(|z1 - e^{i theta} z2|^2 + |v1 - e^{i theta} v2|^2),
// evaluated in closed form (the optimal phase aligns the cross terms).
double bundle_distance(const BundlePoint& q1, const BundlePoint& q2);

}  // namespace chl
