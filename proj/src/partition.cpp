#include <cmath>

#include "collar/partition.hpp"

namespace collar {

namespace {

double exp_kernel(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

}  // namespace

double cutoff_profile(double s) {
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  double u = 2.0 * s - 1.0;  // in (0,1)
  double a = exp_kernel(1.0 - u);
  double b = exp_kernel(u);
  return a / (a + b);
}

double cutoff(const Vec& offset, double r) { return cutoff_profile(offset.norm() / r); }

PartitionData lattice_cover(double r, const Box& region) {
  if (!(r > 0.0)) throw domain_error("cover radius must be positive");
  int n = region.dim();
  if (n < 1) throw domain_error("empty region");
  double spacing = r / std::sqrt(static_cast<double>(n));

  std::vector<long> lo(n), hi(n);
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    lo[i] = static_cast<long>(std::floor(region.min[i] / spacing + 1e-12));
    hi[i] = static_cast<long>(std::ceil(region.max[i] / spacing - 1e-12));
    if (hi[i] < lo[i]) throw domain_error("empty region");
    total *= static_cast<std::size_t>(hi[i] - lo[i] + 1);
  }

  PartitionData data;
  data.radius = r;
  data.spacing = spacing;
  data.region = region;
  int root = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  data.overlap_bound = 1;
  for (int i = 0; i < n; ++i) data.overlap_bound *= 2 * root + 1;

  data.centers.reserve(total);
  std::vector<long> idx(lo);
  for (;;) {
    Vec p(n);
    for (int i = 0; i < n; ++i) p[i] = idx[i] * spacing;
    data.centers.push_back(p);
    int axis = n - 1;
    while (axis >= 0) {
      if (++idx[axis] <= hi[axis]) break;
      idx[axis] = lo[axis];
      --axis;
    }
    if (axis < 0) break;
  }
  return data;
}

PartitionData restrict_to_collar(const PartitionData& cover, const ScalarField& f,
                                 double eps) {
  ProjectionOptions proj;
  proj.probe_uniqueness = false;
  PartitionData out = cover;
  out.centers.clear();
  for (const Vec& p : cover.centers) {
    bool keep = true;
    try {
      double delta = boundary_project(f, p, proj).signed_value;
      // ball B(p, r) meets {x in Omega : delta(x) < eps} only if delta(p) is
      // within (-eps - r, r)
      keep = delta > -eps - cover.radius && delta < cover.radius;
    } catch (const std::exception&) {
      keep = false;
    }
    if (keep) out.centers.push_back(p);
  }
  return out;
}

std::vector<std::pair<int, double>> partition_functions(const PartitionData& cover,
                                                        const Vec& x) {
  std::vector<std::pair<int, double>> raw;
  double total = 0.0;
  for (int j = 0; j < static_cast<int>(cover.centers.size()); ++j) {
    double d = (x - cover.centers[j]).norm();
    if (d >= cover.radius) continue;
    double c = cutoff_profile(d / cover.radius);
    if (c <= 0.0) continue;
    raw.emplace_back(j, c);
    total += c;
  }
  if (!(total > 0.0)) throw domain_error("point not covered by the partition");
  for (auto& [j, c] : raw) c /= total;
  return raw;
}

double choose_cover_radius(const std::vector<BoundarySample>& collar_samples,
                           double reach, double cap) {
  double r = std::isfinite(reach) ? 0.25 * reach : cap;
  r = std::min(r, cap);
  const double floor_r = 1e-6 * cap;
  const double max_angle = M_PI / 4.0;
  while (r > floor_r) {
    bool ok = true;
    for (std::size_t i = 0; i < collar_samples.size() && ok; ++i) {
      for (std::size_t j = i + 1; j < collar_samples.size() && ok; ++j) {
        double d = (collar_samples[i].point - collar_samples[j].point).norm();
        if (d > 2.0 * r) continue;
        double c = collar_samples[i].frame.normal().dot(collar_samples[j].frame.normal());
        if (std::acos(std::clamp(c, -1.0, 1.0)) >= max_angle) ok = false;
      }
    }
    if (ok) return r;
    r *= 0.5;
  }
  throw domain_error("no admissible cover radius above the floor");
}

}  // namespace collar
