#include <Eigen/Dense>
#include <cmath>

#include "collar/cb_norms.hpp"

namespace collar {

double cb_squared(const Jet& adapted_jet, int k, int min_order) {
  int n = adapted_jet.dim();
  double acc = 0.0;
  for (int kp = min_order; kp <= k; ++kp) {
    int jmax = std::min(k - kp, kp);
    for (int jp = 0; jp <= jmax; ++jp) {
      for (const MultiIndex& I : increasing_multi_indices(n - 1, kp - jp)) {
        double v = adapted_derivative(adapted_jet, I, jp);
        acc += v * v;
      }
    }
  }
  return acc;
}

double cb_norm(const BoundarySample& sample, int k) {
  if (k > sample.jet_adapted.order())
    throw order_exceeded("C_b norm order exceeds the sample jet order");
  return std::sqrt(cb_squared(sample.jet_adapted, k));
}

double cb_intermediate_norm(const BoundarySample& sample, int k, int j) {
  if (k < 1 || j < 0 || k < 2 * j)
    throw domain_error("intermediate norm requires k >= 2j >= 0, k >= 1");
  if (k > sample.jet_adapted.order())
    throw order_exceeded("C_b norm order exceeds the sample jet order");
  int n = sample.jet_adapted.dim();
  double acc = cb_squared(sample.jet_adapted, k - 1);
  for (int jp = j; jp <= k / 2; ++jp) {
    for (const MultiIndex& I : increasing_multi_indices(n - 1, k - 2 * jp)) {
      double v = adapted_derivative(sample.jet_adapted, I, jp);
      acc += v * v;
    }
  }
  return std::sqrt(acc);
}

double uniformity_ratio(const BoundarySample& sample, int m) {
  return std::sqrt(cb_squared(sample.jet_adapted, m, /*min_order=*/2)) / sample.grad_norm;
}

double extrinsic_sample_value(const BoundarySample& sample, int k) {
  if (k > sample.jet.order())
    throw order_exceeded("extrinsic norm order exceeds the sample jet order");
  int n = sample.jet.dim();
  double acc = 0.0;
  for (int j = 0; j <= k; ++j) {
    for (const MultiIndex& I : increasing_multi_indices(n, j)) {
      double v = sample.jet.derivative(I);
      acc += v * v;
    }
  }
  return std::sqrt(acc);
}

double extrinsic_boundary_norm(const std::vector<BoundarySample>& samples, int k) {
  double sup = 0.0;
  for (const BoundarySample& s : samples)
    sup = std::max(sup, extrinsic_sample_value(s, k));
  return sup;
}

HDiagnostics h_diagnostics(const ScalarField& f, const BoundarySample& sample, int m,
                           const std::vector<double>& offsets) {
  if (m < 2) throw domain_error("h diagnostics require m >= 2");
  if (offsets.size() < 2) throw domain_error("h diagnostics require >= 2 offsets");
  int order = m - 2;
  int n = f.dim();
  const Vec& p = sample.point;
  const Mat& Q = sample.frame.Q;

  ProjectionOptions proj;
  proj.tol = 1e-12;
  proj.probe_uniqueness = false;

  double smin = std::abs(offsets[0]);
  double smax_abs = std::abs(offsets[0]);
  for (double s : offsets) {
    smin = std::min(smin, std::abs(s));
    smax_abs = std::max(smax_abs, std::abs(s));
  }
  // Tangential step small enough that the stencil stays on the offset plane's
  // side of the zero set: curvature pulls it back by ~kappa t^2/2.
  double kappa_est = 1e-12;
  for (const MultiIndex& I : increasing_multi_indices(n - 1, 2))
    kappa_est = std::max(
        kappa_est, std::abs(adapted_derivative(sample.jet_adapted, I, 0)) / sample.grad_norm);
  double t_step = std::min(0.3 * std::sqrt(smin / kappa_est), 4.0 * smax_abs);

  auto h_at = [&](const Vec& y_prime, double s) {
    Vec q = p + Q.leftCols(n - 1) * y_prime + s * Q.col(n - 1);
    double rho = f.value(q);
    if (std::abs(rho) < 0.1 * sample.grad_norm * smin)
      throw singular_evaluation("rho vanishes at an h-diagnostic offset point");
    double delta = boundary_project(f, q, proj).signed_value;
    return delta / rho;
  };

  // Tangential mixed partial at (0', s) by tensor central differences with
  // one Richardson level.
  const auto tangential_partial = [&](const std::vector<int>& exps, double s) {
    auto stencil_eval = [&](double step) {
      std::vector<std::pair<Vec, double>> nodes;
      nodes.emplace_back(Vec::Zero(n - 1), 1.0);
      double scale = 1.0;
      static const std::vector<std::vector<std::pair<int, double>>> st = {
          {{0, 1.0}},
          {{-1, -0.5}, {1, 0.5}},
          {{-1, 1.0}, {0, -2.0}, {1, 1.0}},
      };
      for (int axis = 0; axis < n - 1; ++axis) {
        int mm = exps[axis];
        if (mm == 0) continue;
        scale /= std::pow(step, mm);
        std::vector<std::pair<Vec, double>> next;
        for (const auto& [pt, wt] : nodes) {
          for (const auto& [off, sw] : st[mm]) {
            Vec yp = pt;
            yp[axis] += off * step;
            next.emplace_back(std::move(yp), wt * sw);
          }
        }
        nodes.swap(next);
      }
      double acc = 0.0;
      for (const auto& [pt, wt] : nodes) acc += wt * h_at(pt, s);
      return acc * scale;
    };
    double coarse = stencil_eval(t_step);
    double fine = stencil_eval(0.5 * t_step);
    return (4.0 * fine - coarse) / 3.0;
  };

  const JetSpace& hsp = JetSpace::get(n, order);
  Jet h_jet(p, hsp);
  const double smax = smax_abs;

  double worst_residual = 0.0;
  double h0_from_fit = 0.0;

  const JetSpace& tang_sp = JetSpace::get(std::max(n - 1, 1), order);
  for (int ti = 0; ti < tang_sp.size(); ++ti) {
    std::vector<int> texps = tang_sp.exponent(ti);
    int tdeg = tang_sp.degree(ti);
    if (tdeg > order) continue;

    Vec values(static_cast<int>(offsets.size()));
    for (std::size_t si = 0; si < offsets.size(); ++si)
      values[static_cast<int>(si)] = tangential_partial(texps, offsets[si]);

    int bmax = order - tdeg;
    int fit_deg = std::min<int>(bmax + 1, static_cast<int>(offsets.size()) - 1);
    fit_deg = std::min(fit_deg, 3);
    Mat V(static_cast<int>(offsets.size()), fit_deg + 1);
    for (std::size_t si = 0; si < offsets.size(); ++si) {
      double u = offsets[si] / smax;
      double pw = 1.0;
      for (int b = 0; b <= fit_deg; ++b) {
        V(static_cast<int>(si), b) = pw;
        pw *= u;
      }
    }
    Vec coef = V.colPivHouseholderQr().solve(values);
    double residual = (V * coef - values).norm() /
                      std::max(1.0, values.cwiseAbs().maxCoeff());
    worst_residual = std::max(worst_residual, residual);

    if (tdeg == 0) h0_from_fit = coef[0];
    for (int b = 0; b <= bmax && b <= fit_deg; ++b) {
      std::vector<int> exps(n, 0);
      for (int axis = 0; axis < n - 1; ++axis) exps[axis] = texps[axis];
      exps[n - 1] = b;
      h_jet.partials()[hsp.index_of(exps)] =
          coef[b] * factorial(b) / std::pow(smax, b);
    }
  }

  if (worst_residual > 1e-3)
    throw convergence_error("h extrapolation failed: offset fit residual " +
                            std::to_string(worst_residual));

  HDiagnostics out;
  out.h_value = 1.0 / sample.grad_norm;
  out.h_extrapolated = h0_from_fit;
  out.fit_residual = worst_residual;
  out.h_adapted = h_jet;
  for (int k = 0; k <= order; ++k)
    out.ratios.push_back(std::sqrt(cb_squared(h_jet, k, /*min_order=*/1)) / out.h_value);
  return out;
}

}  // namespace collar
