#pragma once

#include <optional>
#include <string>

#include "collar/complex_hessian.hpp"
#include "collar/domfile.hpp"
#include "collar/uniformity.hpp"

namespace collar {

struct AnalyzeConfig {
  int order = 2;
  int samples = 512;
  unsigned seed = 42;
  double tol = 1e-10;
  double fd_step = 0.0;  // 0 = automatic
  bool strict = false;
  bool growth_fit = true;
  int threads = 0;
  bool timing = false;  // timing is kept out of the report unless requested
};

struct AnalysisOutcome {
  UniformityReport uniformity;
  ReachReport reach;
  std::vector<Vec> curvature_spectra_points;
  std::vector<Vec> curvature_spectra;
  Verdict verdict = Verdict::kInconclusive;
  double elapsed_ms = 0.0;
};

AnalysisOutcome run_analysis(const DomainSpec& spec, const AnalyzeConfig& config);

// Deterministic JSON serialization (schema shipped in data/report.schema.json,
// versioned). Timing is included only when config.timing is set so that
// reports are byte-identical across thread counts.
std::string render_report_json(const DomainSpec& spec, const AnalyzeConfig& config,
                               const AnalysisOutcome& outcome);

}  // namespace collar
