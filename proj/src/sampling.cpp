#include <algorithm>
#include <cmath>
#include <random>

#include "collar/geometry.hpp"

namespace collar {

namespace {

bool lex_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

std::vector<int> axis_counts(const Box& region, int total_target) {
  int n = region.dim();
  Vec w = region.widths();
  double volume = 1.0;
  for (int i = 0; i < n; ++i) volume *= std::max(w[i], 1e-12);
  double c = std::pow(static_cast<double>(total_target) / volume, 1.0 / n);
  std::vector<int> counts(n);
  for (int i = 0; i < n; ++i) {
    int m = static_cast<int>(std::lround(std::max(w[i], 1e-12) * c));
    m = std::max(m, 3);
    if (m % 2 == 0) ++m;  // odd, inclusive of the region center
    counts[i] = m;
  }
  return counts;
}

}  // namespace

std::vector<BoundarySample> sample_boundary(const ScalarField& f, const Box& region,
                                            const SamplingOptions& opts) {
  int n = f.dim();
  if (region.dim() != n) throw domain_error("region dimension mismatch");

  std::vector<int> counts = axis_counts(region, std::max(1, opts.grid_scale) * opts.target);
  std::size_t total = 1;
  for (int c : counts) total *= static_cast<std::size_t>(c);

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  std::vector<Vec> seeds(total);
  Vec w = region.widths();
  for (std::size_t idx = 0; idx < total; ++idx) {
    Vec p(n);
    std::size_t rem = idx;
    for (int i = 0; i < n; ++i) {
      int ci = static_cast<int>(rem % counts[i]);
      rem /= counts[i];
      double t = counts[i] == 1 ? 0.5 : static_cast<double>(ci) / (counts[i] - 1);
      p[i] = region.min[i] + t * w[i];
      if (opts.jitter > 0.0) p[i] += opts.jitter * unit(rng) * w[i] / counts[i];
    }
    seeds[idx] = p;
  }

  ProjectionOptions proj;
  proj.tol = opts.proj_tol;
  proj.probe_uniqueness = false;

  std::vector<std::optional<Vec>> feet(total);
  parallel_for(
      total,
      [&](std::size_t i) {
        try {
          DistanceEval d = boundary_project(f, seeds[i], proj);
          if (region.contains(d.foot, 1e-9 * (1.0 + w.norm()))) feet[i] = d.foot;
        } catch (const std::exception&) {
          // seed failed to project; skip
        }
      },
      opts.threads);

  std::vector<Vec> candidates;
  candidates.reserve(total);
  for (auto& foot : feet)
    if (foot) candidates.push_back(std::move(*foot));
  if (candidates.empty()) throw domain_error("no boundary found in region");

  std::sort(candidates.begin(), candidates.end(), lex_less);
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [&](const Vec& a, const Vec& b) {
                                 return (a - b).norm() <= 1e-12 * (1.0 + w.norm());
                               }),
                   candidates.end());

  // Farthest-point traversal: quasi-uniform, deterministic.
  int want = std::min<std::size_t>(opts.target, candidates.size());
  std::vector<char> picked(candidates.size(), 0);
  std::vector<double> dist(candidates.size(), std::numeric_limits<double>::infinity());
  std::vector<Vec> selected;
  selected.reserve(want);
  std::size_t current = 0;  // lexicographically smallest
  picked[current] = 1;
  selected.push_back(candidates[current]);
  while (static_cast<int>(selected.size()) < want) {
    double best = -1.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (picked[i]) continue;
      double d = (candidates[i] - selected.back()).norm();
      if (d < dist[i]) dist[i] = d;
      if (dist[i] > best) {
        best = dist[i];
        arg = i;
      }
    }
    if (best < 0.0) break;  // exhausted
    if (opts.min_spacing > 0.0 && best < opts.min_spacing) break;
    picked[arg] = 1;
    selected.push_back(candidates[arg]);
  }

  std::sort(selected.begin(), selected.end(), lex_less);

  std::vector<BoundarySample> samples(selected.size());
  std::vector<char> ok(selected.size(), 0);
  parallel_for(
      selected.size(),
      [&](std::size_t i) {
        try {
          samples[i] = make_boundary_sample(f, selected[i], opts.jet_order,
                                            std::max(opts.proj_tol, 1e-9));
          ok[i] = 1;
        } catch (const std::exception&) {
          ok[i] = 0;
        }
      },
      opts.threads);

  std::vector<BoundarySample> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (ok[i]) out.push_back(std::move(samples[i]));
  if (out.empty()) throw domain_error("no boundary found in region");
  return out;
}

}  // namespace collar
