#pragma once

#include <optional>
#include <vector>

#include "collar/curvature.hpp"

namespace collar {

// Complex coordinates ride on pairs of real ones: z_j = x_{2j} + i*x_{2j+1}
// (0-based), so a field on C^n lives in R^{2n}.

CVec wirtinger_gradient(const Vec& real_gradient);

// d^2/dz_j dzbar_k from the real Hessian; the result is Hermitian for real
// input and is symmetrized against rounding.
CMat wirtinger_from_real(const Mat& real_hessian);

// Complex Hessian of rho (analytic jets) or of the signed distance (collar
// route: gradient = normal at the foot, Hessian by the offset formula).
CMat wirtinger_hessian(const ScalarField& f, const Vec& x, bool use_distance);

struct TangentDecomposition {
  CVec tau;                      // complex-tangential part
  CVec nu;                       // multiple of the conjugate gradient
  double tangency_residual = 0;  // |sum_j w_j tau_j|
  double pairing_magnitude = 0;  // |sum_j w_j v_j|
  double half_nu_norm = 0;       // (1/2)|nu|; equals the pairing when |w|=1/2
};

// v = tau + nu with sum_j w_j tau_j = 0 and nu parallel to conj(w).
TangentDecomposition complex_tangent_decompose(const CVec& dz_gradient, const CVec& v);

// Minimum over samples and unit complex tangents of
//   (Levi form of rho)(t,t) / (|grad rho| |t|^2).
// Nonpositive output means the strict pseudoconvexity hypothesis fails.
double strict_psc_constant(const std::vector<BoundarySample>& samples);

// Exponent selection: strict case needs C(lambda/4 - C2) > 4 C2^2, the collar
// case C(lambda/4 - C2)/2 >= 4 C2^2. Returns the threshold solution scaled by
// (1+margin), floored at `floor_value` when the bound degenerates (C2 = 0).
double choose_lambda(double C, double C2, bool strict, double margin = 0.1,
                     double floor_value = 1.0);

// rho_lambda = e^{lambda * delta} - 1. Values are defined wherever projection
// converges; gradient and complex Hessian use the collar formulas and require
// |delta| below the collar radius when one is set.
class PshDefiningFunction {
 public:
  PshDefiningFunction(const ScalarField& f, double lambda, double collar_radius = 0.0)
      : f_(&f), lambda_(lambda), collar_(collar_radius) {}

  double lambda() const { return lambda_; }
  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  CMat complex_hessian(const Vec& x) const;

 private:
  void check_collar(double delta) const;
  const ScalarField* f_;
  double lambda_;
  double collar_;
};

// M_eps(a,b) = (a + b + s_eps(a-b))/2 with s_eps a C^inf convex even
// smoothing of |.| that equals |.| outside [-eps, eps]; convex and
// nondecreasing in each argument, so it preserves plurisubharmonicity.
class SmoothedMax {
 public:
  explicit SmoothedMax(double eps);
  double eps() const { return eps_; }
  double smoothing(double u) const;  // s_eps(u)
  double operator()(double a, double b) const {
    return 0.5 * (a + b + smoothing(a - b));
  }

 private:
  double eps_;
  double inv_mass_;  // 1 / integral of the unnormalized bump
};

struct GlobalExtension {
  const PshDefiningFunction* psh;
  double interior_level;  // A < 0
  SmoothedMax max;

  double value(const Vec& x) const { return max(psh->value(x), interior_level); }
};

// Smoothed-max extension of rho_lambda by the interior level A.
GlobalExtension global_extension(const PshDefiningFunction& psh, double A, double eps);

struct LeviData {
  int complex_dim = 0;
  double C = 0.0;       // strict pseudoconvexity constant
  double C2 = 0.0;      // sup |d^2 delta / dz_j dzbar_k| over samples
  double lambda = 0.0;
  bool strict = true;
  double A = 0.0;
  bool A_estimated = false;
  double min_eigenvalue = 0.0;
  bool certified = false;
  std::vector<std::pair<Vec, double>> certification;  // (point, min eigenvalue)
};

// Full pipeline: C from the samples, C2 from the boundary distance Hessians,
// lambda selection, and pointwise PSD certification of rho_lambda at the
// given collar points.
LeviData psh_analyze(const ScalarField& f, const std::vector<BoundarySample>& samples,
                     const std::vector<Vec>& certification_points, bool strict,
                     double collar_radius, double lambda_override = 0.0,
                     std::optional<double> interior_level = std::nullopt,
                     const std::vector<Vec>& interior_probes = {});

}  // namespace collar
