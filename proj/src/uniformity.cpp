#include <algorithm>
#include <cmath>

#include "collar/uniformity.hpp"

namespace collar {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kBounded: return "BOUNDED";
    case Verdict::kDivergent: return "DIVERGENT";
    case Verdict::kInconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

GrowthFit growth_fit(const std::vector<double>& radii, const std::vector<double>& values) {
  GrowthFit fit;
  if (radii.size() != values.size() || radii.empty()) {
    fit.degenerate = true;
    return fit;
  }
  double amax = 0.0;
  for (double r : radii) amax = std::max(amax, std::log1p(r));
  const double half_decade = 0.5 * std::log(10.0);
  double lo = amax - half_decade;

  std::vector<std::pair<double, double>> window;  // (log(1+r), value)
  for (std::size_t i = 0; i < radii.size(); ++i) {
    double a = std::log1p(radii[i]);
    if (a >= lo) window.emplace_back(a, values[i]);
  }
  double amin_w = amax;
  for (auto& [a, v] : window) amin_w = std::min(amin_w, a);
  double spread = amax - amin_w;
  if (window.size() < 2 || spread < 0.2) {
    fit.degenerate = true;
    return fit;
  }

  int bins = std::clamp(static_cast<int>(std::lround(spread / 0.15)), 3, 8);
  std::vector<double> bin_max(bins, -1.0);
  std::vector<double> bin_center(bins, 0.0);
  for (int b = 0; b < bins; ++b)
    bin_center[b] = amin_w + (b + 0.5) * spread / bins;
  for (const auto& [a, v] : window) {
    int b = std::min(bins - 1, static_cast<int>((a - amin_w) / spread * bins));
    bin_max[b] = std::max(bin_max[b], v);
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int used = 0;
  for (int b = 0; b < bins; ++b) {
    if (bin_max[b] <= 1e-300) continue;  // empty bin or vanishing envelope
    double x = bin_center[b];
    double y = std::log(bin_max[b]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  fit.points_used = used;
  if (used < 2) {
    fit.degenerate = true;
    return fit;
  }
  double denom = used * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) {
    fit.degenerate = true;
    return fit;
  }
  fit.slope = (used * sxy - sx * sy) / denom;
  return fit;
}

UniformityReport uniformity_report(const std::vector<BoundarySample>& samples, int m,
                                   const std::vector<BoundarySample>* doubled,
                                   const UniformityOptions& opts) {
  if (samples.empty()) throw domain_error("uniformity report requires samples");
  UniformityReport rep;
  rep.order = m;
  rep.records.reserve(samples.size());

  std::vector<double> radii, ratios;
  for (const BoundarySample& s : samples) {
    SampleNormRecord rec;
    rec.point = s.point;
    rec.grad_norm = s.grad_norm;
    for (int k = 0; k <= m; ++k) {
      double v = cb_norm(s, k);
      rec.cb_values.push_back(v);
      rec.ratios.push_back(v / s.grad_norm);
    }
    rec.uniformity_ratio = uniformity_ratio(s, m);
    rec.h_value = 1.0 / s.grad_norm;
    radii.push_back(s.point.norm());
    ratios.push_back(rec.uniformity_ratio);
    rep.sup_ratio = std::max(rep.sup_ratio, rec.uniformity_ratio);
    rep.records.push_back(std::move(rec));
  }

  rep.growth = growth_fit(radii, ratios);

  if (doubled != nullptr && !doubled->empty()) {
    rep.doubling_checked = true;
    for (const BoundarySample& s : *doubled)
      rep.sup_ratio_doubled = std::max(rep.sup_ratio_doubled, uniformity_ratio(s, m));
    rep.doubling_change = std::abs(rep.sup_ratio_doubled - rep.sup_ratio) /
                          std::max(rep.sup_ratio, 1e-300);
  }

  if (!rep.growth.degenerate && rep.growth.slope > opts.slope_threshold) {
    rep.verdict = Verdict::kDivergent;
  } else if (rep.doubling_checked) {
    rep.verdict = rep.doubling_change <= opts.stability_tol ? Verdict::kBounded
                                                            : Verdict::kInconclusive;
  } else {
    rep.verdict = Verdict::kInconclusive;
  }
  return rep;
}

}  // namespace collar
