#include <Eigen/Dense>
#include <cmath>

#include "collar/complex_hessian.hpp"

namespace collar {

namespace {

using Complex = std::complex<double>;

void require_even(int dim) {
  if (dim % 2 != 0)
    throw domain_error("complex operations require an even real dimension");
}

// 32-point Gauss-Legendre on [0,1].
struct GaussRule {
  double nodes[32];
  double weights[32];
  GaussRule() {
    // Newton iteration on Legendre polynomials, standard construction.
    int n = 32;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      nodes[i] = 0.5 * (1.0 - x);  // map to [0,1], ascending
      weights[i] = 0.5 * 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GaussRule& gauss32() {
  static const GaussRule rule;
  return rule;
}

double bump(double v) {  // even C^inf bump on (-1,1)
  double w = 1.0 - v * v;
  return w > 0.0 ? std::exp(-1.0 / w) : 0.0;
}

// Orthonormal basis (columns) of the orthogonal complement of `axis` in C^n.
CMat hermitian_complement(const CVec& axis) {
  int n = static_cast<int>(axis.size());
  CVec c = axis / axis.norm();
  int drop = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(c[i]) > std::abs(c[drop])) drop = i;
  CMat basis(n, n - 1);
  int col = 0;
  for (int i = 0; i < n; ++i) {
    if (i == drop) continue;
    CVec v = CVec::Zero(n);
    v[i] = 1.0;
    v -= c * (c.adjoint() * v)(0);
    for (int k = 0; k < col; ++k) v -= basis.col(k) * (basis.col(k).adjoint() * v)(0);
    double norm = v.norm();
    if (norm < 1e-12) throw domain_error("degenerate complex tangent basis");
    basis.col(col++) = v / norm;
  }
  return basis;
}

}  // namespace

CVec wirtinger_gradient(const Vec& real_gradient) {
  require_even(static_cast<int>(real_gradient.size()));
  int n = static_cast<int>(real_gradient.size()) / 2;
  CVec w(n);
  for (int j = 0; j < n; ++j)
    w[j] = 0.5 * Complex(real_gradient[2 * j], -real_gradient[2 * j + 1]);
  return w;
}

CMat wirtinger_from_real(const Mat& real_hessian) {
  require_even(static_cast<int>(real_hessian.rows()));
  int n = static_cast<int>(real_hessian.rows()) / 2;
  CMat L(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      double re = real_hessian(2 * j, 2 * k) + real_hessian(2 * j + 1, 2 * k + 1);
      double im = real_hessian(2 * j, 2 * k + 1) - real_hessian(2 * j + 1, 2 * k);
      L(j, k) = 0.25 * Complex(re, im);
    }
  }
  return 0.5 * (L + CMat(L.adjoint()));
}

CMat wirtinger_hessian(const ScalarField& f, const Vec& x, bool use_distance) {
  require_even(f.dim());
  if (!use_distance) return wirtinger_from_real(f.jet(x, 2).hessian());
  return wirtinger_from_real(hessian_offset(f, x));
}

TangentDecomposition complex_tangent_decompose(const CVec& dz_gradient, const CVec& v) {
  double w2 = dz_gradient.squaredNorm();
  if (!(w2 > 0.0)) throw domain_error("zero complex gradient");
  Complex pairing = dz_gradient.transpose() * v;  // sum_j w_j v_j (no conjugation)
  Complex c = pairing / w2;
  TangentDecomposition out;
  out.nu = c * dz_gradient.conjugate();
  out.tau = v - out.nu;
  out.tangency_residual = std::abs(Complex(dz_gradient.transpose() * out.tau));
  out.pairing_magnitude = std::abs(pairing);
  out.half_nu_norm = 0.5 * out.nu.norm();
  return out;
}

double strict_psc_constant(const std::vector<BoundarySample>& samples) {
  if (samples.empty()) throw domain_error("strict pseudoconvexity needs samples");
  double c = std::numeric_limits<double>::infinity();
  for (const BoundarySample& s : samples) {
    CVec w = wirtinger_gradient(s.jet.gradient());
    CMat levi = wirtinger_from_real(s.jet.hessian());
    CMat tangents = hermitian_complement(w.conjugate());
    CMat restricted = tangents.adjoint() * levi * tangents;
    double lmin = hermitian_min_eigenvalue(restricted);
    c = std::min(c, lmin / s.grad_norm);
  }
  return c;
}

double choose_lambda(double C, double C2, bool strict, double margin, double floor_value) {
  if (!(C > 0.0)) throw domain_error("lambda selection requires C > 0");
  if (C2 < 0.0) throw domain_error("C2 must be nonnegative");
  double base = strict ? 4.0 * (C2 + 4.0 * C2 * C2 / C) : 4.0 * (C2 + 8.0 * C2 * C2 / C);
  double lambda = std::max((1.0 + margin) * base, floor_value);
  double lhs = strict ? C * (0.25 * lambda - C2) : 0.5 * C * (0.25 * lambda - C2);
  double rhs = 4.0 * C2 * C2;
  bool ok = strict ? (lhs > rhs) : (lhs >= rhs);
  if (!ok) throw domain_error("selected lambda fails the positivity inequality");
  return lambda;
}

void PshDefiningFunction::check_collar(double delta) const {
  if (collar_ > 0.0 && std::abs(delta) >= collar_)
    throw domain_error("psh field derivative requested outside the collar");
}

double PshDefiningFunction::value(const Vec& x) const {
  ProjectionOptions proj;
  proj.probe_uniqueness = false;
  double delta = boundary_project(*f_, x, proj).signed_value;
  return std::expm1(lambda_ * delta);
}

Vec PshDefiningFunction::gradient(const Vec& x) const {
  ProjectionOptions proj;
  proj.probe_uniqueness = false;
  DistanceEval d = boundary_project(*f_, x, proj);
  check_collar(d.signed_value);
  Vec g = f_->jet(d.foot, 1).gradient();
  return (lambda_ * std::exp(lambda_ * d.signed_value) / g.norm()) * g;
}

CMat PshDefiningFunction::complex_hessian(const Vec& x) const {
  require_even(f_->dim());
  ProjectionOptions proj;
  proj.probe_uniqueness = false;
  DistanceEval d = boundary_project(*f_, x, proj);
  check_collar(d.signed_value);

  Vec g = f_->jet(d.foot, 1).gradient();
  Vec grad_delta = g / g.norm();
  Mat hess_delta = hessian_offset(*f_, x, proj);

  CVec w = wirtinger_gradient(grad_delta);
  CMat levi = wirtinger_from_real(hess_delta);
  double scale = lambda_ * std::exp(lambda_ * d.signed_value);
  CMat out = scale * (levi + lambda_ * (w * w.adjoint()));
  return 0.5 * (out + CMat(out.adjoint()));
}

SmoothedMax::SmoothedMax(double eps) : eps_(eps) {
  if (!(eps > 0.0)) throw domain_error("smoothing width must be positive");
  const GaussRule& g = gauss32();
  double mass = 0.0;
  for (int i = 0; i < 32; ++i) {
    double v = -1.0 + 2.0 * g.nodes[i];
    mass += 2.0 * g.weights[i] * bump(v);
  }
  inv_mass_ = 1.0 / mass;  // in the scaled variable v = t/eps
}

double SmoothedMax::smoothing(double u) const {
  double a = std::abs(u);
  if (a >= eps_) return a;
  // integral of |u - t| phi(t) dt, split at the kink t = u.
  const GaussRule& g = gauss32();
  double acc = 0.0;
  double lo = -eps_, hi = u;
  for (int i = 0; i < 32; ++i) {
    double t = lo + (hi - lo) * g.nodes[i];
    acc += (hi - lo) * g.weights[i] * (u - t) * bump(t / eps_);
  }
  lo = u;
  hi = eps_;
  for (int i = 0; i < 32; ++i) {
    double t = lo + (hi - lo) * g.nodes[i];
    acc += (hi - lo) * g.weights[i] * (t - u) * bump(t / eps_);
  }
  return acc * inv_mass_ / eps_;
}

GlobalExtension global_extension(const PshDefiningFunction& psh, double A, double eps) {
  if (!(A < 0.0)) throw domain_error("interior level A must be negative");
  if (!(eps < 0.5 * std::abs(A)))
    throw domain_error("smoothing width must be below |A|/2");
  return GlobalExtension{&psh, A, SmoothedMax(eps)};
}

LeviData psh_analyze(const ScalarField& f, const std::vector<BoundarySample>& samples,
                     const std::vector<Vec>& certification_points, bool strict,
                     double collar_radius, double lambda_override,
                     std::optional<double> interior_level,
                     const std::vector<Vec>& interior_probes) {
  require_even(f.dim());
  LeviData data;
  data.complex_dim = f.dim() / 2;
  data.strict = strict;
  data.C = strict_psc_constant(samples);

  // C2: entrywise sup of the boundary complex Hessian of the distance,
  // from the analytic route Hess delta(p) = Q [H 0; 0 0] Q^T.
  double c2 = 0.0;
  for (const BoundarySample& s : samples) {
    ShapeData shape = tangential_hessian(s);
    int n = f.dim();
    Mat blocks = Mat::Zero(n, n);
    blocks.topLeftCorner(n - 1, n - 1) = shape.tangential_hessian;
    Mat hess = s.frame.Q * blocks * s.frame.Q.transpose();
    CMat levi = wirtinger_from_real(hess);
    c2 = std::max(c2, levi.cwiseAbs().maxCoeff());
  }
  data.C2 = c2;

  data.lambda = lambda_override > 0.0 ? lambda_override
                                      : choose_lambda(data.C, data.C2, strict);

  if (interior_level.has_value()) {
    data.A = *interior_level;
    data.A_estimated = false;
  } else {
    double a = -std::max(collar_radius, 1e-3);
    ProjectionOptions proj;
    proj.probe_uniqueness = false;
    for (const Vec& q : interior_probes) {
      try {
        double delta = boundary_project(f, q, proj).signed_value;
        if (delta < -collar_radius) a = std::max(a, delta);
      } catch (const std::exception&) {
      }
    }
    data.A = a;
    data.A_estimated = true;
  }

  PshDefiningFunction psh(f, data.lambda, collar_radius);
  double min_eig = std::numeric_limits<double>::infinity();
  std::vector<double> eigs(certification_points.size());
  parallel_for(certification_points.size(), [&](std::size_t i) {
    eigs[i] = hermitian_min_eigenvalue(psh.complex_hessian(certification_points[i]));
  });
  for (std::size_t i = 0; i < certification_points.size(); ++i) {
    data.certification.emplace_back(certification_points[i], eigs[i]);
    min_eig = std::min(min_eig, eigs[i]);
  }
  data.min_eigenvalue = certification_points.empty() ? 0.0 : min_eig;
  data.certified = data.min_eigenvalue >= 0.0;
  return data;
}

}  // namespace collar
