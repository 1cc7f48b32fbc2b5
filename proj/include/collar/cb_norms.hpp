#pragma once

#include <vector>

#include "collar/geometry.hpp"

namespace collar {

// Boundary-adapted norm over frame coordinates at a sample p:
//   |f|^2_{C_b^k(p)} = sum_{k'=0..k} sum_{j'=0..min(k-k',k')}
//                      sum_{I in I_{k'-j'}, n not in I} |d^{k'} f / dy_I dy_n^{j'}|^2
// computed from the adapted jet. Each unordered tangential combination is
// counted once.
double cb_norm(const BoundarySample& sample, int k);

// Intermediate norms between C_b^{k-1} and C_b^k (k >= 2j >= 0):
//   |f|^2_{C_b^{k,j}} = |f|^2_{C_b^{k-1}} +
//       sum_{j'=j..floor(k/2)} sum_{I in I_{k-2j'}, n not in I}
//       |d^{k-j'} f / dy_I dy_n^{j'}|^2
double cb_intermediate_norm(const BoundarySample& sample, int k, int j);

// Partial sum of the C_b^k terms restricted to total derivative order
// >= min_order; min_order 0 recovers the norm squared itself. Exposed because
// the diagnostics use derivative-only variants of the same index set.
double cb_squared(const Jet& adapted_jet, int k, int min_order = 0);

// The uniformity quantity behind the main diagnostic: the C_b index set
// restricted to derivative orders 2..m, divided by |grad rho(p)|. On the
// boundary this is the defining-function-invariant part of the norm.
double uniformity_ratio(const BoundarySample& sample, int m);

// Extrinsic boundary norm: per-sample root sum of squared Cartesian partials
// through order k, and the sup over a sample set (a lower bound for the true
// sup on a noncompact boundary).
double extrinsic_sample_value(const BoundarySample& sample, int k);
double extrinsic_boundary_norm(const std::vector<BoundarySample>& samples, int k);

struct HDiagnostics {
  double h_value = 0.0;         // 1/|grad rho(p)|, the boundary identity
  double h_extrapolated = 0.0;  // limit of delta/rho along the normal line
  // Derivative-only ratios |h|_{C_b^k(p)} / h(p) for k = 0..m-2 (the order-0
  // term is excluded, so a constant h reports zeros).
  std::vector<double> ratios;
  double fit_residual = 0.0;
  Jet h_adapted;  // adapted-frame jet of h at p, order m-2
};

// Estimates derivatives of h = delta/rho near p by evaluating on planes
// y_n = s for the given normal offsets (where rho does not vanish),
// differentiating tangentially, and extrapolating s -> 0.
HDiagnostics h_diagnostics(const ScalarField& f, const BoundarySample& sample, int m,
                           const std::vector<double>& offsets);

}  // namespace collar
