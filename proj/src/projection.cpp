#include <Eigen/Dense>
#include <cmath>

#include "collar/geometry.hpp"

namespace collar {

namespace {

struct Foot {
  Vec y;
  double distance;
  int iterations;
  double constraint_residual;
  double tangency_residual;
};

// Newton on the KKT system of: minimize |x-y|^2 subject to rho(y)=0.
std::optional<Foot> solve_foot(const ScalarField& f, const Vec& x, Vec y,
                               const ProjectionOptions& opts) {
  int n = f.dim();
  double scale = 1.0 + x.norm();

  for (int step = 0; step < opts.flow_steps; ++step) {
    Jet j1 = f.jet(y, 1);
    Vec g = j1.gradient();
    double g2 = g.squaredNorm();
    if (g2 < 1e-24) return std::nullopt;
    y -= (j1.value() / g2) * g;
  }

  Jet j1 = f.jet(y, 1);
  Vec g = j1.gradient();
  double g2 = g.squaredNorm();
  if (g2 < 1e-24) return std::nullopt;
  double lambda = (x - y).dot(g) / g2;

  auto kkt_norm = [&](const Vec& yy, double ll) {
    Jet j = f.jet(yy, 1);
    Vec grad = j.gradient();
    Vec r = (yy - x) + ll * grad;
    return std::sqrt(r.squaredNorm() + j.value() * j.value());
  };

  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    Jet j2 = f.jet(y, 2);
    Vec grad = j2.gradient();
    double gn = grad.norm();
    if (gn < 1e-12) return std::nullopt;
    Vec residual_y = (y - x) + lambda * grad;
    double residual_c = j2.value();

    Vec nu = grad / gn;
    Vec diff = x - y;
    double tangency = (diff - diff.dot(nu) * nu).norm();
    bool converged = std::abs(residual_c) <= opts.tol * std::max(1.0, gn) &&
                     tangency <= opts.tol * std::max(diff.norm(), 1e-9 * scale);
    if (converged && it >= 1) {
      return Foot{y, diff.norm(), it, std::abs(residual_c), tangency};
    }

    Eigen::MatrixXd J(n + 1, n + 1);
    J.setZero();
    J.topLeftCorner(n, n) = Mat::Identity(n, n) + lambda * j2.hessian();
    J.topRightCorner(n, 1) = grad;
    J.bottomLeftCorner(1, n) = grad.transpose();
    Vec rhs(n + 1);
    rhs.head(n) = -residual_y;
    rhs[n] = -residual_c;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    if (!lu.isInvertible()) {
      // fall back to a gradient-flow step
      y -= (residual_c / (gn * gn)) * grad;
      continue;
    }
    Vec delta = lu.solve(rhs);

    double before = std::sqrt(residual_y.squaredNorm() + residual_c * residual_c);
    double t = 1.0;
    Vec y_new;
    double lambda_new = lambda;
    for (int damp = 0; damp < 12; ++damp) {
      y_new = y + t * delta.head(n);
      lambda_new = lambda + t * delta[n];
      bool ok = true;
      double after = 0.0;
      try {
        after = kkt_norm(y_new, lambda_new);
      } catch (const singular_evaluation&) {
        ok = false;
      } catch (const domain_error&) {
        ok = false;
      }
      if (ok && (after < before || t < 1e-3)) break;
      t *= 0.5;
    }
    y = y_new;
    lambda = lambda_new;
  }
  return std::nullopt;
}

}  // namespace

DistanceEval boundary_project(const ScalarField& f, const Vec& x,
                              const ProjectionOptions& opts, double collar_radius) {
  int n = f.dim();
  double rho_x;
  try {
    rho_x = f.value(x);
  } catch (const singular_evaluation& e) {
    throw convergence_error(std::string("cannot evaluate field at query: ") + e.what());
  }

  std::vector<Vec> seeds;
  seeds.push_back(x);
  std::optional<Foot> best = solve_foot(f, x, x, opts);
  double dist0 = best ? best->distance : 1.0 + x.norm();

  if (opts.probe_uniqueness) {
    double eta = opts.perturbation_scale * dist0 + 1e-6 * (1.0 + x.norm());
    for (int i = 0; i < n; ++i) {
      for (double s : {+1.0, -1.0}) {
        Vec seed = x;
        seed[i] += s * eta;
        seeds.push_back(seed);
      }
    }
  }

  std::vector<Foot> feet;
  if (best) feet.push_back(*best);
  for (std::size_t i = 1; i < seeds.size(); ++i) {
    try {
      if (auto foot = solve_foot(f, x, seeds[i], opts)) feet.push_back(*foot);
    } catch (const singular_evaluation&) {
    } catch (const domain_error&) {
    }
  }
  if (feet.empty())
    throw convergence_error("boundary projection did not converge within budget");

  std::size_t nearest = 0;
  for (std::size_t i = 1; i < feet.size(); ++i)
    if (feet[i].distance < feet[nearest].distance) nearest = i;

  const Foot& foot = feet[nearest];
  double dist_tol = opts.tol * std::max(1.0, foot.distance);
  double pos_tol = 10.0 * opts.tol * std::max(1.0, foot.distance);
  bool unique = true;
  for (const Foot& other : feet) {
    if (std::abs(other.distance - foot.distance) < std::max(dist_tol, 1e-9 * foot.distance) &&
        (other.y - foot.y).norm() > pos_tol)
      unique = false;
  }

  DistanceEval out;
  out.query = x;
  out.foot = foot.y;
  double sign = rho_x > 0.0 ? 1.0 : (rho_x < 0.0 ? -1.0 : 0.0);
  out.signed_value = sign == 0.0 ? 0.0 : sign * foot.distance;
  if (sign == 0.0 && foot.distance > opts.tol * (1.0 + x.norm()))
    out.signed_value = foot.distance;  // rho(x)=0 off the zero set does not occur
  out.unique = unique;
  out.newton_iterations = foot.iterations;
  out.constraint_residual = foot.constraint_residual;
  out.tangency_residual = foot.tangency_residual;
  out.in_collar = collar_radius > 0.0 && foot.distance < collar_radius;
  return out;
}

double signed_distance(const ScalarField& f, const Vec& x, double tol) {
  ProjectionOptions opts;
  opts.tol = tol;
  opts.probe_uniqueness = false;
  return boundary_project(f, x, opts).signed_value;
}

BoundarySample make_boundary_sample(const ScalarField& f, const Vec& p, int order,
                                    double proj_tol) {
  Jet jet = f.jet(p, order);
  Vec grad = jet.gradient();
  double gn = grad.norm();
  if (!(gn > 0.0)) throw domain_error("zero gradient at boundary sample");
  if (std::abs(jet.value()) > proj_tol * std::max(1.0, gn))
    throw domain_error("point is not on the boundary to the requested tolerance");
  AdaptedFrame frame = frame_from_gradient(p, grad);
  Jet adapted = jet.rotated(frame.Q);
  return BoundarySample{p, frame, jet, adapted, gn};
}

}  // namespace collar
