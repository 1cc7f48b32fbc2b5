#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "collar/uniformity.hpp"

namespace collar {

// Built-in example domains with their expected verdicts per order. Probes
// are generated per strategy: plain region sampling, a sweep along a line in
// the boundary, or points aligned with the extrema of an oscillating
// derivative (where the divergence envelope is attained).
struct CorpusCase {
  std::string name;
  std::string description;
  int dim = 0;
  int complex_dim = 0;
  std::string rho;
  std::vector<std::pair<std::string, std::string>> branches;  // (guard, rho)
  Box region;
  int default_samples = 384;
  std::map<int, Verdict> expected;            // order -> verdict
  std::optional<Verdict> expected_extrinsic;  // extrinsic C^2 growth, when relevant
  std::vector<int> aligned_orders;            // orders using aligned probes
  bool line_sweep = false;                    // probes on a line in the boundary
};

const std::vector<CorpusCase>& corpus_cases();
const CorpusCase& corpus_case(const std::string& name);

ScalarField corpus_field(const CorpusCase& c, int max_jet_order = 6);

// Probes for one order at the given sampling scale; doubled=true enlarges the
// region (or sweep range) by a factor of two for the stability check.
std::vector<BoundarySample> corpus_probes(const CorpusCase& c, const ScalarField& field,
                                          int order, int target, unsigned seed,
                                          bool doubled, int threads = 0);

struct CorpusOrderResult {
  int order = 0;
  Verdict verdict = Verdict::kInconclusive;
  double sup_ratio = 0.0;
  double slope = 0.0;
  bool matches = true;
};

struct CorpusRunResult {
  std::string name;
  std::vector<CorpusOrderResult> orders;
  std::optional<Verdict> extrinsic_verdict;
  double extrinsic_slope = 0.0;
  bool matches_expected = true;
};

struct CorpusRunOptions {
  int samples = 384;
  unsigned seed = 42;
  int threads = 0;
  int max_order = 0;  // 0: run every expected order
};

CorpusRunResult run_corpus_case(const CorpusCase& c, const CorpusRunOptions& opts = {});

struct ProjectiveDecay {
  int order = 0;
  // slope of log |grad^k rho| vs log(1+|p|), k = 1..m (envelope-binned)
  std::vector<double> gradient_slopes;
  // slope of log(|grad^k rho| / |grad rho|), k = 2..m; -inf when the level
  // vanishes identically on the samples
  std::vector<double> ratio_slopes;
  bool projective = false;
};

// Radial decay diagnostic: a defining function pulled back from a projective
// C^m domain satisfies |grad^k rho|/|grad rho| <~ (1+|x|^2)^{-(k-1)/2}; the
// verdict checks the fitted exponents against -(k-1) within `tol`.
ProjectiveDecay projective_decay_fit(const std::vector<BoundarySample>& samples, int m,
                                     double tol = 0.2);

}  // namespace collar
