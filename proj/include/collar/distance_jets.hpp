#pragma once

#include "collar/geometry.hpp"

namespace collar {

struct DistanceJetOptions {
  // Base finite-difference step for first derivatives; 0 selects
  // max(1e-4, 1e-3*|x|). Higher orders widen the step to balance truncation
  // against cancellation in the projection solves.
  double step = 0.0;
  double proj_tol = 1e-12;
  // When positive, the stencil must stay within this collar radius.
  double collar_radius = 0.0;
  int threads = 0;
};

// Brute-force jet of the signed distance function at x: central differences
// with two-level Richardson extrapolation, order-dependent steps, and a
// shared cache of projection solves. This is the oracle every derivative
// identity of the distance function is checked against.
Jet distance_jet_numeric(const ScalarField& f, const Vec& x, int order,
                         const DistanceJetOptions& opts = {});

double distance_fd_step(int derivative_order, const Vec& x, double base_step);

struct EikonalReport {
  double residual = 0.0;    // | |grad delta| - 1 |
  double normal_gap = 0.0;  // | grad delta - unit normal at the foot |
  double signed_value = 0.0;
};

// |grad delta|^2 = 1 near the boundary; the numeric gradient is also checked
// against the unit normal at the nearest boundary point.
EikonalReport eikonal_residual(const ScalarField& f, const Vec& x,
                               const DistanceJetOptions& opts = {});

}  // namespace collar
