#pragma once

#include <vector>

#include "collar/distance_jets.hpp"
#include "collar/geometry.hpp"

namespace collar {

// Tangential Hessian of the signed distance at a boundary sample and its
// spectral data. Principal curvatures are the eigenvalues, sorted descending;
// the normal direction always carries eigenvalue zero. Signs follow the
// outward-positive distance convention: the unit circle bounding a disk has
// curvature +1.
struct ShapeData {
  Mat tangential_hessian;    // (n-1)x(n-1), = Hess_tang(rho)/|grad rho|
  Vec principal_curvatures;  // descending
  Mat eigenvectors;          // (n-1)x(n-1), columns, in frame coordinates
  double eigen_gap = 0.0;    // smallest eigenvalue separation
};

ShapeData tangential_hessian(const BoundarySample& sample);

struct UnpProbe {
  Vec base;
  Vec probe;
  double offset = 0.0;
  bool projected = false;
  bool unique = false;
  double foot_gap = 0.0;  // |foot - base|
};

struct ReachReport {
  double sup_curvature = 0.0;  // sup over samples of the spectral radius
  double reach = 0.0;          // 1/sup, infinity flagging below
  bool infinite = false;       // zero curvature everywhere sampled
  std::vector<double> spectral_radii;
  std::vector<UnpProbe> within_probes;  // at 0.9*reach, expected to return
  std::vector<UnpProbe> beyond_probes;  // at 1.5*reach, reported only
};

// reach = (sup spectral radius of the tangential distance Hessian)^{-1},
// cross-checked empirically: probes p +- s*normal with s = 0.9*reach must
// project uniquely back to p.
ReachReport reach_estimate(const ScalarField& f, const std::vector<BoundarySample>& samples,
                           unsigned seed = 42, int probe_count = 10);

// Third derivative of the signed distance at the boundary from rho jets:
//   d^3 delta / dy_j dy_k dy_l = |grad rho|^{-1} rho_{jkl}
//     - |grad rho|^{-2} (rho_{jn} rho_{kl} + rho_{kn} rho_{jl} + rho_{ln} rho_{jk})
// for tangential j,k,l; fully symmetric in (j,k,l).
double third_order_invariant(const BoundarySample& sample, int j, int k, int l);

// Full Cartesian Hessian of the signed distance at a collar point, assembled
// from boundary data at the foot:
//   Hess delta(x) = H_b (Id + delta(x) H_b)^{-1},  H_b = Hess delta(pi(x)).
Mat hessian_offset(const ScalarField& f, const Vec& x, const ProjectionOptions& opts = {});

// kappa(s) = kappa0 / (1 + s*kappa0); pole guarded at |1+s*kappa0| > 1e-6.
double kappa_offset(double kappa0, double s);

// mu_I(s) = prod_j (1 + s*kappa_j), the Jacobian factor along a normal line.
double mu_product(const std::vector<double>& kappas, double s);

struct PropagationOptions {
  double eigen_gap_floor = 1e-6;  // relative to ||H||
  DistanceJetOptions oracle;      // fallback / k=4 base derivatives
};

// d^k delta(0', s)/dy_I for tangential I in the eigenvector-aligned frame at
// the sample. |I| = 3 uses the closed form mu_I(s)^{-1} d^3 delta(p); |I| = 4
// adds the integral term, evaluated by a fixed 16-point Gauss rule on [0,s].
double propagate_tangential_derivative(const ScalarField& f, const BoundarySample& sample,
                                       const MultiIndex& I, double s,
                                       const PropagationOptions& opts = {});

// Residual of the differentiated eikonal identity at p:
//   sum_j sum_{0<|J|<|I|} (d/dy_j d^{|J|}delta/dy_J)(d/dy_j d^{k-|J|}delta/dy_{I\J})
//     + 2 d/dy_n (d^k delta/dy_I) = 0
// with every distance derivative taken from the numeric oracle (order k+1).
double normal_identity_residual(const ScalarField& f, const BoundarySample& sample,
                                const MultiIndex& I, int k,
                                const DistanceJetOptions& opts = {});

}  // namespace collar
