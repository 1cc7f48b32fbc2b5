#include <cmath>

#include "collar/sobolev.hpp"

namespace collar {

namespace {

using PointFn = std::function<double(const Vec&)>;

// (T_j w)(x) with the frame supplied by the caller; directional derivative by
// central differences.
double apply_T(const PointFn& w, const AdaptedFrame& frame, double weight_t, const Vec& x,
               int j, double h) {
  Vec dir = frame.Q.col(j);
  double dw = (w(x + h * dir) - w(x - h * dir)) / (2.0 * h);
  double lphi = 2.0 * weight_t * dir.dot(x);
  return dw - lphi * w(x);
}

}  // namespace

AdaptedFrame collar_frame(const ScalarField& f, const Vec& x) {
  ProjectionOptions proj;
  proj.probe_uniqueness = false;
  DistanceEval d = boundary_project(f, x, proj);
  Vec g = f.jet(d.foot, 1).gradient();
  AdaptedFrame frame = frame_from_gradient(d.foot, g);
  frame.origin = x;
  return frame;
}

double tangential_operator_apply(const ScalarField& f, double weight_t,
                                 const ScalarField& u, const Vec& x, int j) {
  AdaptedFrame frame = collar_frame(f, x);
  Vec dir = frame.Q.col(j);
  double du = u.jet(x, 1).gradient().dot(dir);
  double lphi = 2.0 * weight_t * dir.dot(x);
  return du - lphi * u.value(x);
}

WeightedNormResult weighted_sobolev_norm(const ScalarField& domain, const ScalarField& u,
                                         const WeightedNormSpec& spec,
                                         const PartitionData& cover, double collar_eps,
                                         int threads) {
  if (spec.p < 1.0) throw domain_error("weighted norm requires p >= 1");
  int n = domain.dim();
  const Box& box = spec.truncation;
  if (box.dim() != n) throw domain_error("truncation dimension mismatch");

  struct Node {
    Vec x;
    double weight;  // cell volume * exp(-phi_t)
    AdaptedFrame frame;
  };

  auto build_nodes = [&](int per_axis) {
    std::vector<Vec> raw;
    Vec w = box.widths();
    double cell = 1.0;
    for (int i = 0; i < n; ++i) cell *= w[i] / per_axis;
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(per_axis);
    raw.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
      Vec x(n);
      std::size_t rem = idx;
      for (int i = 0; i < n; ++i) {
        int c = static_cast<int>(rem % per_axis);
        rem /= per_axis;
        x[i] = box.min[i] + (c + 0.5) * w[i] / per_axis;
      }
      raw.push_back(std::move(x));
    }

    ProjectionOptions proj;
    proj.probe_uniqueness = false;
    std::vector<int> keep(raw.size(), 0);
    std::vector<double> delta(raw.size(), 0.0);
    parallel_for(
        raw.size(),
        [&](std::size_t i) {
          try {
            delta[i] = boundary_project(domain, raw[i], proj).signed_value;
            keep[i] = delta[i] > -collar_eps && delta[i] < 0.0;
          } catch (const std::exception&) {
            keep[i] = 0;
          }
        },
        threads);

    std::vector<Node> nodes;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (!keep[i]) continue;
      Node node;
      node.x = raw[i];
      node.weight = cell * std::exp(-spec.weight_t * raw[i].squaredNorm());
      nodes.push_back(std::move(node));
    }
    if (spec.k >= 1) {
      parallel_for(
          nodes.size(), [&](std::size_t i) { nodes[i].frame = collar_frame(domain, nodes[i].x); },
          threads);
    }
    return nodes;
  };

  // Support containment: u must vanish on the truncation shell.
  {
    double interior_max = 0.0, shell_max = 0.0;
    Vec w = box.widths();
    int scan = 8;
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(scan + 1);
    for (std::size_t idx = 0; idx < total; ++idx) {
      Vec x(n);
      std::size_t rem = idx;
      bool on_shell = false;
      for (int i = 0; i < n; ++i) {
        int c = static_cast<int>(rem % (scan + 1));
        rem /= (scan + 1);
        x[i] = box.min[i] + c * w[i] / scan;
        if (c == 0 || c == scan) on_shell = true;
      }
      double v = std::abs(u.value(x));
      (on_shell ? shell_max : interior_max) = std::max(on_shell ? shell_max : interior_max, v);
    }
    if (shell_max > 1e-9 * std::max(interior_max, 1e-300))
      throw domain_error("u is not supported inside the truncation window");
  }

  auto norm_p_sum = [&](const std::vector<Node>& nodes) {
    // per-center, per-alpha accumulation in fixed order
    double acc = 0.0;
    int m = static_cast<int>(cover.centers.size());
    std::vector<double> per_center(m, 0.0);
    parallel_for(
        static_cast<std::size_t>(m),
        [&](std::size_t jc) {
          const Vec& pj = cover.centers[jc];
          PointFn vj = [&](const Vec& x) {
            double d = (x - pj).norm();
            if (d >= cover.radius) return 0.0;
            double num = cutoff_profile(d / cover.radius);
            if (num <= 0.0) return 0.0;
            double den = 0.0;
            for (const Vec& pk : cover.centers) {
              double dk = (x - pk).norm();
              if (dk < cover.radius) den += cutoff_profile(dk / cover.radius);
            }
            return u.value(x) * num / den;
          };

          // enumerate alpha with |alpha| <= k over operators T_1..T_n
          std::vector<std::vector<int>> alphas{{}};
          for (int len = 1; len <= spec.k; ++len) {
            std::vector<std::vector<int>> next;
            for (const auto& a : alphas) {
              if (static_cast<int>(a.size()) != len - 1) continue;
              for (int dir = 0; dir < n; ++dir) {
                auto b = a;
                b.push_back(dir);
                next.push_back(std::move(b));
              }
            }
            for (auto& b : next) alphas.push_back(std::move(b));
          }

          double local = 0.0;
          for (const Node& node : nodes) {
            if ((node.x - pj).norm() >= cover.radius + 1e-12) continue;
            for (const auto& alpha : alphas) {
              // apply T_{alpha_1} ... T_{alpha_m} to v_j at node.x
              PointFn w = vj;
              double h = 1e-4 * (1.0 + node.x.norm());
              for (std::size_t ai = alpha.size(); ai-- > 1;) {
                PointFn inner = w;
                int dir = alpha[ai];
                double step = h * 10.0;  // nested levels widen the step
                w = [this_f = &domain, inner, dir, step, t = spec.weight_t](const Vec& y) {
                  AdaptedFrame fr = collar_frame(*this_f, y);
                  return apply_T(inner, fr, t, y, dir, step);
                };
              }
              double val;
              if (alpha.empty()) {
                val = w(node.x);
              } else {
                val = apply_T(w, node.frame, spec.weight_t, node.x, alpha[0], h);
              }
              local += std::pow(std::abs(val), spec.p) * node.weight;
            }
          }
          per_center[jc] = local;
        },
        threads);
    for (int jc = 0; jc < m; ++jc) acc += per_center[jc];
    return acc;
  };

  std::vector<Node> nodes = build_nodes(spec.grid_per_axis);
  WeightedNormResult out;
  out.nodes_used = static_cast<int>(nodes.size());
  double psum = norm_p_sum(nodes);
  out.value = std::pow(psum, 1.0 / spec.p);

  // direct and partition-reconstructed L^p of u over the same nodes
  double direct = 0.0, recon = 0.0;
  for (const Node& node : nodes) {
    double uv = u.value(node.x);
    direct += std::pow(std::abs(uv), spec.p) * node.weight;
    double sum_chi = 0.0;
    for (const Vec& pk : cover.centers) {
      double dk = (node.x - pk).norm();
      if (dk < cover.radius) sum_chi += cutoff_profile(dk / cover.radius);
    }
    double parts = 0.0;
    if (sum_chi > 0.0) {
      for (const Vec& pk : cover.centers) {
        double dk = (node.x - pk).norm();
        if (dk < cover.radius) parts += uv * cutoff_profile(dk / cover.radius) / sum_chi;
      }
    }
    recon += std::pow(std::abs(parts), spec.p) * node.weight;
  }
  out.direct_lp = std::pow(direct, 1.0 / spec.p);
  out.reconstructed_lp = std::pow(recon, 1.0 / spec.p);

  // quadrature error from one coarsening
  int coarse_axis = std::max(8, spec.grid_per_axis / 2);
  std::vector<Node> coarse = build_nodes(coarse_axis);
  double coarse_value = std::pow(norm_p_sum(coarse), 1.0 / spec.p);
  out.quadrature_error =
      std::abs(out.value - coarse_value) / std::max(out.value, 1e-300);
  return out;
}

}  // namespace collar
