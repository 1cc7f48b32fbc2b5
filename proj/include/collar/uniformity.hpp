#pragma once

#include <optional>
#include <string>
#include <vector>

#include "collar/cb_norms.hpp"

namespace collar {

enum class Verdict { kBounded, kDivergent, kInconclusive };

std::string to_string(Verdict v);

struct GrowthFit {
  double slope = 0.0;
  int points_used = 0;
  bool degenerate = false;  // no usable radial spread; slope reported as 0
};

// Least-squares slope of log(value) against log(1+|p|), fitted to per-bin
// maxima over the outermost half-decade of |p|. Binned envelopes keep the fit
// stable when the ratio oscillates along an unbounded boundary.
GrowthFit growth_fit(const std::vector<double>& radii, const std::vector<double>& values);

struct SampleNormRecord {
  Vec point;
  double grad_norm = 0.0;
  std::vector<double> cb_values;  // |rho|_{C_b^k}, k = 0..m
  std::vector<double> ratios;     // cb_values[k] / grad_norm
  double uniformity_ratio = 0.0;  // derivative-order >= 2 part at order m
  double h_value = 0.0;           // 1/grad_norm
};

struct UniformityReport {
  int order = 0;
  std::vector<SampleNormRecord> records;
  double sup_ratio = 0.0;
  GrowthFit growth;
  bool doubling_checked = false;
  double sup_ratio_doubled = 0.0;
  double doubling_change = 0.0;
  Verdict verdict = Verdict::kInconclusive;
};

// Thresholds for the verdict: DIVERGENT when the fitted growth exponent
// exceeds slope_threshold; BOUNDED additionally requires the sup to be stable
// under region doubling (relative change <= stability_tol).
struct UniformityOptions {
  double slope_threshold = 0.1;
  double stability_tol = 0.05;
};

UniformityReport uniformity_report(const std::vector<BoundarySample>& samples, int m,
                                   const std::vector<BoundarySample>* doubled = nullptr,
                                   const UniformityOptions& opts = {});

}  // namespace collar
