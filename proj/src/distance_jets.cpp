#include <array>
#include <cmath>
#include <cstring>
#include <map>

#include "collar/distance_jets.hpp"

namespace collar {

namespace {

// 1D central stencils of O(h^2) accuracy, offsets in units of h.
struct StencilTerm {
  int offset;
  double weight;
};

const std::vector<StencilTerm>& central_stencil(int m) {
  static const std::vector<std::vector<StencilTerm>> stencils = {
      {{0, 1.0}},
      {{-1, -0.5}, {1, 0.5}},
      {{-1, 1.0}, {0, -2.0}, {1, 1.0}},
      {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}},
      {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}},
  };
  if (m < 0 || m >= static_cast<int>(stencils.size()))
    throw order_exceeded("numeric distance jets support orders 0..4");
  return stencils[m];
}

class DistanceCache {
 public:
  DistanceCache(const ScalarField& f, double tol) : f_(f) {
    opts_.tol = tol;
    opts_.probe_uniqueness = false;
  }

  double at(const Vec& x) {
    std::array<std::int64_t, 8> key{};
    for (int i = 0; i < x.size(); ++i) {
      std::int64_t bits;
      double v = x[i];
      static_assert(sizeof(bits) == sizeof(v));
      std::memcpy(&bits, &v, sizeof(bits));
      key[i] = bits;
    }
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    double d = boundary_project(f_, x, opts_).signed_value;
    cache_.emplace(key, d);
    return d;
  }

 private:
  const ScalarField& f_;
  ProjectionOptions opts_;
  std::map<std::array<std::int64_t, 8>, double> cache_;
};

}  // namespace

double distance_fd_step(int derivative_order, const Vec& x, double base_step) {
  // Cancellation floors per order: projection noise ~1e-13 divided by h^m
  // must stay below the truncation target.
  static const double floors[] = {1e-4, 1e-4, 6e-4, 2.5e-3, 7e-3};
  int m = std::min(std::max(derivative_order, 1), 4);
  if (base_step > 0.0) return base_step * (floors[m] / floors[1]);
  double h1 = std::max(floors[1], 1e-3 * x.norm());
  if (m == 1) return h1;
  // Noise scales with |x|; widen higher-order steps by the square root of
  // the first-order inflation.
  return floors[m] * std::sqrt(h1 / floors[1]);
}

Jet distance_jet_numeric(const ScalarField& f, const Vec& x, int order,
                         const DistanceJetOptions& opts) {
  int n = f.dim();
  const JetSpace& sp = JetSpace::get(n, order);
  Jet jet(x, sp);
  DistanceCache cache(f, opts.proj_tol);

  double center = cache.at(x);
  jet.partials()[0] = center;

  if (opts.collar_radius > 0.0) {
    double hmax = distance_fd_step(std::min(order, 4), x, opts.step);
    if (std::abs(center) + 2.0 * hmax >= opts.collar_radius)
      throw domain_error("finite-difference stencil leaves the certified collar");
  }

  for (int idx = 1; idx < sp.size(); ++idx) {
    const std::vector<int>& exps = sp.exponent(idx);
    int total = sp.degree(idx);
    double h = distance_fd_step(total, x, opts.step);

    // Tensor product of per-axis central stencils, evaluated at step h.
    auto apply = [&](double step) {
      std::vector<std::pair<Vec, double>> nodes;
      nodes.emplace_back(x, 1.0);
      double scale = 1.0;
      for (int axis = 0; axis < n; ++axis) {
        int m = exps[axis];
        if (m == 0) continue;
        const auto& st = central_stencil(m);
        scale /= std::pow(step, m);
        std::vector<std::pair<Vec, double>> next;
        next.reserve(nodes.size() * st.size());
        for (const auto& [pt, wt] : nodes) {
          for (const auto& term : st) {
            Vec p = pt;
            p[axis] += term.offset * step;
            next.emplace_back(std::move(p), wt * term.weight);
          }
        }
        nodes.swap(next);
      }
      double acc = 0.0;
      for (const auto& [pt, wt] : nodes) acc += wt * cache.at(pt);
      return acc * scale;
    };

    double coarse = apply(h);
    double fine = apply(0.5 * h);
    jet.partials()[idx] = (4.0 * fine - coarse) / 3.0;
  }
  return jet;
}

EikonalReport eikonal_residual(const ScalarField& f, const Vec& x,
                               const DistanceJetOptions& opts) {
  Jet grad_jet = distance_jet_numeric(f, x, 1, opts);
  Vec grad = grad_jet.gradient();

  ProjectionOptions proj;
  proj.tol = opts.proj_tol;
  proj.probe_uniqueness = false;
  DistanceEval d = boundary_project(f, x, proj);
  Vec g_foot = f.jet(d.foot, 1).gradient();
  Vec nu = g_foot / g_foot.norm();

  EikonalReport rep;
  rep.residual = std::abs(grad.norm() - 1.0);
  rep.normal_gap = (grad - nu).norm();
  rep.signed_value = d.signed_value;
  return rep;
}

}  // namespace collar
