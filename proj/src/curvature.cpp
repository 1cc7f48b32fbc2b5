#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "collar/curvature.hpp"

namespace collar {

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
const double kGaussNodes[16] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
    -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
    -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
    0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
    0.9894009349916499};
const double kGaussWeights[16] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
    0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
    0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
    0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
    0.0271524594117541};

Mat boundary_distance_hessian(const BoundarySample& sample, const ShapeData& shape) {
  int n = sample.frame.dim();
  Mat blocks = Mat::Zero(n, n);
  blocks.topLeftCorner(n - 1, n - 1) = shape.tangential_hessian;
  return sample.frame.Q * blocks * sample.frame.Q.transpose();
}

// Frame whose tangential block diagonalizes the tangential Hessian.
Mat eigen_aligned_frame(const BoundarySample& sample, const ShapeData& shape) {
  int n = sample.frame.dim();
  Mat block = Mat::Identity(n, n);
  block.topLeftCorner(n - 1, n - 1) = shape.eigenvectors;
  return sample.frame.Q * block;
}

double third_invariant_from_jet(const Jet& adapted, double grad_norm, int j, int k, int l) {
  int n = adapted.dim();
  auto d2 = [&](int a, int b) {
    std::vector<int> e(n, 0);
    ++e[a];
    ++e[b];
    return adapted.derivative(e);
  };
  std::vector<int> e3(n, 0);
  ++e3[j];
  ++e3[k];
  ++e3[l];
  double rho3 = adapted.derivative(e3);
  int nn = n - 1;
  double cross = d2(j, nn) * d2(k, l) + d2(k, nn) * d2(j, l) + d2(l, nn) * d2(j, k);
  return rho3 / grad_norm - cross / (grad_norm * grad_norm);
}

}  // namespace

ShapeData tangential_hessian(const BoundarySample& sample) {
  int n = sample.frame.dim();
  if (sample.jet_adapted.order() < 2)
    throw order_exceeded("tangential Hessian requires a jet of order >= 2");
  Mat h(n - 1, n - 1);
  for (int j = 0; j < n - 1; ++j) {
    for (int k = j; k < n - 1; ++k) {
      std::vector<int> e(n, 0);
      ++e[j];
      ++e[k];
      double v = sample.jet_adapted.derivative(e) / sample.grad_norm;
      h(j, k) = v;
      h(k, j) = v;
    }
  }
  SymmetricEigen eig = symmetric_eigen(h);
  return ShapeData{h, eig.eigenvalues, eig.eigenvectors, eig.min_gap};
}

ReachReport reach_estimate(const ScalarField& f, const std::vector<BoundarySample>& samples,
                           unsigned seed, int probe_count) {
  if (samples.empty()) throw domain_error("reach estimate requires samples");
  ReachReport rep;
  rep.spectral_radii.reserve(samples.size());
  for (const BoundarySample& s : samples) {
    ShapeData shape = tangential_hessian(s);
    double radius = 0.0;
    for (int i = 0; i < shape.principal_curvatures.size(); ++i)
      radius = std::max(radius, std::abs(shape.principal_curvatures[i]));
    rep.spectral_radii.push_back(radius);
    rep.sup_curvature = std::max(rep.sup_curvature, radius);
  }
  if (rep.sup_curvature <= 0.0) {
    rep.infinite = true;
    rep.reach = std::numeric_limits<double>::infinity();
    return rep;
  }
  rep.reach = 1.0 / rep.sup_curvature;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
  ProjectionOptions proj;
  proj.tol = 1e-10;
  int count = std::min<std::size_t>(probe_count, samples.size());
  for (int i = 0; i < count; ++i) {
    const BoundarySample& s = samples[pick(rng)];
    for (double side : {+1.0, -1.0}) {
      for (double factor : {0.9, 1.5}) {
        UnpProbe probe;
        probe.base = s.point;
        probe.offset = side * factor * rep.reach;
        probe.probe = s.point + probe.offset * s.frame.normal();
        try {
          DistanceEval d = boundary_project(f, probe.probe, proj);
          probe.projected = true;
          probe.unique = d.unique;
          probe.foot_gap = (d.foot - s.point).norm();
        } catch (const std::exception&) {
          probe.projected = false;
        }
        (factor < 1.0 ? rep.within_probes : rep.beyond_probes).push_back(probe);
      }
    }
  }
  return rep;
}

double third_order_invariant(const BoundarySample& sample, int j, int k, int l) {
  if (sample.jet_adapted.order() < 3)
    throw order_exceeded("third-order invariant requires a jet of order >= 3");
  return third_invariant_from_jet(sample.jet_adapted, sample.grad_norm, j, k, l);
}

Mat hessian_offset(const ScalarField& f, const Vec& x, const ProjectionOptions& opts) {
  DistanceEval d = boundary_project(f, x, opts);
  BoundarySample foot = make_boundary_sample(f, d.foot, 2, std::max(opts.tol, 1e-9));
  ShapeData shape = tangential_hessian(foot);
  for (int i = 0; i < shape.principal_curvatures.size(); ++i) {
    if (std::abs(1.0 + d.signed_value * shape.principal_curvatures[i]) <= 1e-6)
      throw singular_evaluation("hessian offset pole: 1 + delta*kappa vanished");
  }
  int n = f.dim();
  Mat hb = boundary_distance_hessian(foot, shape);
  Mat shifted = Mat::Identity(n, n) + d.signed_value * hb;
  Mat result = hb * shifted.inverse();
  return 0.5 * (result + result.transpose());
}

double kappa_offset(double kappa0, double s) {
  double denom = 1.0 + s * kappa0;
  if (std::abs(denom) <= 1e-6)
    throw singular_evaluation("curvature propagation pole: 1 + s*kappa vanished");
  return kappa0 / denom;
}

double mu_product(const std::vector<double>& kappas, double s) {
  double mu = 1.0;
  for (double k : kappas) {
    double factor = 1.0 + s * k;
    if (std::abs(factor) <= 1e-6)
      throw singular_evaluation("mu product pole: 1 + s*kappa vanished");
    mu *= factor;
  }
  return mu;
}

double propagate_tangential_derivative(const ScalarField& f, const BoundarySample& sample,
                                       const MultiIndex& I, double s,
                                       const PropagationOptions& opts) {
  int n = f.dim();
  int k = I.length();
  if (k != 3 && k != 4)
    throw domain_error("propagation supports tangential multi-indices of length 3 or 4");
  for (int i = 0; i < k; ++i)
    if (I[i] >= n - 1) throw domain_error("propagation index must be tangential");

  ShapeData shape = tangential_hessian(sample);
  double hnorm = shape.tangential_hessian.norm();
  bool aligned_ok = n - 1 <= 1 || shape.eigen_gap > opts.eigen_gap_floor * std::max(hnorm, 1e-300);

  std::vector<double> kappas(shape.principal_curvatures.data(),
                             shape.principal_curvatures.data() + (n - 1));

  if (!aligned_ok) {
    // Degenerate spectrum: the diagonalized form is unreliable, fall back to
    // the finite-difference oracle on the normal line.
    DistanceJetOptions djo = opts.oracle;
    Vec x = sample.point + s * sample.frame.normal();
    Jet oracle = distance_jet_numeric(f, x, k, djo);
    Mat frame = eigen_aligned_frame(sample, shape);
    return oracle.rotated(frame).derivative(I.exponents(n));
  }

  Mat frame = eigen_aligned_frame(sample, shape);
  Jet adapted_eigen = sample.jet.rotated(frame);

  std::vector<double> mu_kappas;
  for (int i = 0; i < k; ++i) mu_kappas.push_back(kappas[I[i]]);
  double mu_s = mu_product(mu_kappas, s);

  if (k == 3) {
    double base = third_invariant_from_jet(adapted_eigen, sample.grad_norm, I[0], I[1], I[2]);
    return base / mu_s;
  }

  // k = 4: base fourth derivative from the oracle, integral term from
  // propagated third derivatives.
  Jet base_jet = distance_jet_numeric(f, sample.point, 4, opts.oracle);
  double base4 = base_jet.rotated(frame).derivative(I.exponents(n));

  auto third_at = [&](const MultiIndex& T, double t) {
    std::vector<double> ks;
    for (int i = 0; i < T.length(); ++i) ks.push_back(kappas[T[i]]);
    double base = third_invariant_from_jet(adapted_eigen, sample.grad_norm, T[0], T[1], T[2]);
    return base / mu_product(ks, t);
  };

  auto integrand = [&](double t) {
    double g = 0.0;
    for (const auto& [J, K] : slot_subsets(I, 2)) {
      // tangential contractions
      for (int j = 0; j < n - 1; ++j)
        g += third_at(J.appended(j), t) * third_at(K.appended(j), t);
      // normal contraction: d/dy_n of the propagated second derivatives;
      // off-diagonal pairs stay zero in the eigen frame.
      double dj = (J[0] == J[1]) ? -std::pow(kappa_offset(kappas[J[0]], t), 2) : 0.0;
      double dk = (K[0] == K[1]) ? -std::pow(kappa_offset(kappas[K[0]], t), 2) : 0.0;
      g += dj * dk;
    }
    return mu_product(mu_kappas, t) * g;
  };

  double integral = 0.0;
  for (int q = 0; q < 16; ++q) {
    double t = 0.5 * s * (kGaussNodes[q] + 1.0);
    integral += kGaussWeights[q] * integrand(t);
  }
  integral *= 0.5 * s;

  return (base4 - 0.5 * integral) / mu_s;
}

double normal_identity_residual(const ScalarField& f, const BoundarySample& sample,
                                const MultiIndex& I, int k,
                                const DistanceJetOptions& opts) {
  if (k != I.length()) throw domain_error("identity order must match |I|");
  if (k < 1 || k > 3) throw order_exceeded("identity residual supports k <= 3");
  int n = f.dim();
  Jet oracle = distance_jet_numeric(f, sample.point, k + 1, opts);
  Jet adapted = oracle.rotated(sample.frame.Q);

  auto deriv = [&](const MultiIndex& m, int extra_var) {
    std::vector<int> e = m.exponents(n);
    ++e[extra_var];
    return adapted.derivative(e);
  };

  double acc = 0.0;
  for (int sz = 1; sz < k; ++sz) {
    for (const auto& [J, K] : slot_subsets(I, sz)) {
      for (int j = 0; j < n; ++j) acc += deriv(J, j) * deriv(K, j);
    }
  }
  acc += 2.0 * deriv(I, n - 1);
  return std::abs(acc);
}

}  // namespace collar
