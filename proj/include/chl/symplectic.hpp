#pragma once

#include "chl/flows.hpp"

#include <vector>

namespace chl {

// A point of the punctured cotangent bundle: unit covector plus fiber radius.
struct CotangentPoint {
  BundlePoint q;
  double tau = 1.0;
};

// Exponential chart anchored at a CotangentPoint: s holds the 4n-1
// coefficients along the ordered frame basis, u = log(tau/tau0).
struct ChartCoords {
  Eigen::VectorXd s;
  double u = 0.0;
};

inline constexpr double kChartRadius = 0.5;

// Throws std::invalid_argument when |s|_2 + |u| exceeds the chart radius.
CotangentPoint chart_to_point(const CotangentPoint& base, const ChartCoords& c);

// Frame coefficients of a group element D near the identity, after
// iteratively removing the isotropy component (right-multiplying by its
// inverse exponential).  Throws std::runtime_error on non-convergence.
Eigen::VectorXd chart_decompose(const CMat& D, int n);

// Inverse of chart_to_point.  Not radius-restricted: it is also used to
// measure displacements beyond the nominal chart radius.
ChartCoords point_to_chart(const CotangentPoint& base, const CotangentPoint& p);

// Tautological one-form paired with every chart direction at chart offset c
// (a 4n-vector: frame coefficients then u).  The pairing with the u
// direction vanishes identically because the base point does not move.
Eigen::VectorXd alpha_form(const CotangentPoint& base, const Eigen::VectorXd& c);

struct SymplecticFormAt {
  Eigen::MatrixXd omega;      // 4n x 4n antisymmetric, at c = 0
  Eigen::VectorXd alpha;      // tautological form at c = 0
  double antisym_residual = 0.0;
};

// omega = d(alpha) by central differences of step fd_step (exact inner
// derivative, outer differences).  Requires fd_step in [1e-6, 1e-3].
SymplecticFormAt symplectic_form_at(const CotangentPoint& base, double fd_step = 1e-4);

struct StraightenMap {
  Eigen::MatrixXd S;          // (y, eta) -> chart coordinates
  Eigen::MatrixXd L;          // chart coordinates -> (y, eta); L = S^{-1}
  double symplectic_residual = 0.0;   // max |S^T omega S - J_std|
  double image_residual = 0.0;        // coordinate-subspace alignment
  double pairing_condition = 1.0;     // condition number of the slow pairing block
};

// Canonical symplectic matrix of (y_1..y_2n, eta_1..eta_2n).
Eigen::MatrixXd standard_symplectic_matrix(int n);

// Linear symplectic change of coordinates built from the measured form:
// y_1 along V+, y_2..y_{2n-1} along the slow plus directions, y_2n along X,
// eta_1 along V-, eta_2..eta_{2n-1} solving the slow pairing system,
// eta_2n along the dilation direction.
StraightenMap straighten(const CotangentPoint& base);

struct SlowRectangle {
  CotangentPoint base;
  StraightenMap map;
  double alpha = 0.0;
  double center = 0.0;   // offset of the thin coordinate (eta_1 or y_1)
  int sign = -1;         // -1: thin in eta_1, flow forward; +1: thin in y_1, flow backward
};

// Validates 0 < alpha <= chart radius, |center| <= alpha, sign in {-1,+1}.
SlowRectangle make_slow_rectangle(const CotangentPoint& base, const StraightenMap& map,
                                  double alpha, double center, int sign);

// Deterministic low-discrepancy (y, eta) samples of
// {sum |w_i| <= alpha, |w_thin - center| <= slab_width}: the center point,
// the two slab endpoints, the cross-polytope corners, then Halton fill.
// Samples for smaller m are a prefix of samples for larger m.
std::vector<Eigen::VectorXd> rectangle_sample_coords(const SlowRectangle& rect, int m,
                                                     double slab_width);

// Maps (y, eta) samples through S into the chart and onto points;
// slab width alpha^2.
std::vector<CotangentPoint> rectangle_samples(const SlowRectangle& rect, int m);

// sqrt(bundle_distance^2 + (difference of log tau)^2).
double weighted_distance(const CotangentPoint& a, const CotangentPoint& b);

// Chart-metric distance: norm of the frame coefficients of the relative
// group element, combined with the log tau difference.
double intrinsic_distance(const CotangentPoint& a, const CotangentPoint& b);

enum class RectangleMetric { ambient, chart };

// Max pairwise distance of the flowed samples (sign -: forward time t,
// sign +: backward).  Requires t >= 0.  Nondecreasing in m.
double propagated_diameter(const SlowRectangle& rect, double t, int m);

// Same measurement with an explicit slab width and metric choice (the wide
// slab plus chart metric is the control showing the fast-direction growth).
double propagated_diameter_custom(const SlowRectangle& rect, double t, int m,
                                  double slab_width, RectangleMetric metric);

}  // namespace chl
