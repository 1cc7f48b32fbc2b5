#include "collar/frame.hpp"

#include <cmath>

namespace collar {

AdaptedFrame frame_from_gradient(const Vec& point, const Vec& gradient) {
  int n = static_cast<int>(gradient.size());
  double norm = gradient.norm();
  if (!(norm > 0.0)) throw domain_error("zero gradient: no adapted frame");
  Vec nu = gradient / norm;

  Mat Q = Mat::Identity(n, n);
  double sign = nu[n - 1] >= 0.0 ? 1.0 : -1.0;
  Vec w = nu;
  w[n - 1] += sign;
  double wn2 = w.squaredNorm();
  if (wn2 > 1e-30) {
    Q -= (2.0 / wn2) * (w * w.transpose());
    // Householder maps nu to -sign*e_n; flip the last column so it equals nu.
    if (sign > 0.0) Q.col(n - 1) = -Q.col(n - 1);
  }
  // wn2 ~ 0 cannot happen for unit nu (|w| >= 1), kept as a guard.
  if ((Q.col(n - 1) - nu).norm() > 1e-12) Q.col(n - 1) = nu;
  return AdaptedFrame{point, Q};
}

double frame_derivative(const Jet& jet, const AdaptedFrame& frame, const MultiIndex& I,
                        int normal_count) {
  if (I.length() + normal_count > jet.order())
    throw order_exceeded("frame derivative order exceeds jet order");
  Jet rotated = jet.rotated(frame.Q);
  return adapted_derivative(rotated, I, normal_count);
}

double adapted_derivative(const Jet& rotated_jet, const MultiIndex& I, int normal_count) {
  int n = rotated_jet.dim();
  std::vector<int> exps = I.exponents(n);
  exps[n - 1] += normal_count;
  return rotated_jet.derivative(exps);
}

SymmetricEigen symmetric_eigen(const Mat& m) {
  int n = static_cast<int>(m.rows());
  Mat a = m;
  Mat v = Mat::Identity(n, n);
  const int max_sweeps = 30;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-12 * std::max(1.0, a.norm())) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        double theta = 0.5 * (a(q, q) - a(p, p)) / apq;
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int i = 0; i < n; ++i) {
          double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          double api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
        for (int i = 0; i < n; ++i) {
          double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  SymmetricEigen out;
  out.eigenvalues = a.diagonal();
  out.eigenvectors = v;
  // sort descending, deterministic
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (out.eigenvalues[i] != out.eigenvalues[j])
      return out.eigenvalues[i] > out.eigenvalues[j];
    return i < j;
  });
  Vec vals(n);
  Mat vecs(n, n);
  for (int i = 0; i < n; ++i) {
    vals[i] = out.eigenvalues[order[i]];
    vecs.col(i) = out.eigenvectors.col(order[i]);
    // fix sign: the largest-magnitude component is positive
    int arg = 0;
    for (int r = 1; r < n; ++r)
      if (std::abs(vecs(r, i)) > std::abs(vecs(arg, i))) arg = r;
    if (vecs(arg, i) < 0.0) vecs.col(i) = -vecs.col(i);
  }
  out.eigenvalues = vals;
  out.eigenvectors = vecs;
  out.min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < n; ++i)
    out.min_gap = std::min(out.min_gap, vals[i] - vals[i + 1]);
  if (n <= 1) out.min_gap = std::numeric_limits<double>::infinity();
  return out;
}

double hermitian_min_eigenvalue(const CMat& m) {
  int n = static_cast<int>(m.rows());
  Mat embed(2 * n, 2 * n);
  embed.topLeftCorner(n, n) = m.real();
  embed.topRightCorner(n, n) = -m.imag();
  embed.bottomLeftCorner(n, n) = m.imag();
  embed.bottomRightCorner(n, n) = m.real();
  SymmetricEigen e = symmetric_eigen(embed);
  return e.eigenvalues[2 * n - 1];
}

}  // namespace collar
