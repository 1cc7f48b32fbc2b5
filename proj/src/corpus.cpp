#include <cmath>

#include "collar/corpus.hpp"

namespace collar {

namespace {

Box box2(double x0, double x1, double y0, double y1) {
  Box b;
  b.min = Vec(2);
  b.max = Vec(2);
  b.min << x0, y0;
  b.max << x1, y1;
  return b;
}

// Degree-12 truncations of sin(x)/x and sin(x^2)/x^2; remainders at |x|=0.1
// are below 1e-15.
const char* kSincSeries =
    "1 - x^2/6 + x^4/120 - x^6/5040 + x^8/362880 - x^10/39916800 + x^12/6227020800";
const char* kSincSquareSeries = "1 - x^4/6 + x^8/120 - x^12/5040";

std::vector<CorpusCase> build_cases() {
  std::vector<CorpusCase> cases;

  {
    CorpusCase c;
    c.name = "circle";
    c.description = "unit circle, analytic control";
    c.dim = 2;
    c.rho = "x^2 + y^2 - 1";
    c.region = box2(-2, 2, -2, 2);
    c.expected = {{2, Verdict::kBounded}, {3, Verdict::kBounded}, {4, Verdict::kBounded}};
    cases.push_back(c);
  }
  {
    CorpusCase c;
    c.name = "circle2";
    c.description = "circle of radius 2, analytic control";
    c.dim = 2;
    c.rho = "x^2 + y^2 - 4";
    c.region = box2(-3, 3, -3, 3);
    c.expected = {{2, Verdict::kBounded}};
    cases.push_back(c);
  }
  {
    CorpusCase c;
    c.name = "sphere";
    c.description = "unit sphere in R^3, analytic control";
    c.dim = 3;
    c.rho = "x^2 + y^2 + z^2 - 1";
    c.region.min = Vec(3);
    c.region.max = Vec(3);
    c.region.min << -2, -2, -2;
    c.region.max << 2, 2, 2;
    c.expected = {{2, Verdict::kBounded}, {3, Verdict::kBounded}};
    cases.push_back(c);
  }
  {
    CorpusCase c;
    c.name = "halfplane";
    c.description = "flat boundary, distance equals the defining function";
    c.dim = 2;
    c.rho = "y";
    c.region = box2(-3, 3, -1, 1);
    c.expected = {{2, Verdict::kBounded}, {3, Verdict::kBounded}, {4, Verdict::kBounded}};
    cases.push_back(c);
  }
  {
    CorpusCase c;
    c.name = "omega1";
    c.description = "y < sin(x)/x: uniformly C^m for every m";
    c.dim = 2;
    c.rho = "y - sin(x)/x";
    c.branches = {{"abs(x) < 0.1", std::string("y - (") + kSincSeries + ")"}};
    c.region = box2(-200, 200, -5, 5);
    c.default_samples = 512;
    c.expected = {{2, Verdict::kBounded}, {3, Verdict::kBounded}, {4, Verdict::kBounded}};
    cases.push_back(c);
  }
  {
    CorpusCase c;
    c.name = "omega2";
    c.description = "y < sin(x^2)/x^2: uniformly C^2 but not C^3";
    c.dim = 2;
    c.rho = "y - sin(x^2)/x^2";
    c.branches = {{"abs(x) < 0.1", std::string("y - (") + kSincSquareSeries + ")"}};
    c.region = box2(-40, 40, -3, 3);
    c.default_samples = 512;
    c.expected = {{2, Verdict::kBounded}, {3, Verdict::kDivergent}};
    c.aligned_orders = {3};
    cases.push_back(c);
  }
  {
    CorpusCase c;
    c.name = "counterexample";
    c.description = "z < x y^2: C^inf domain with no uniformly C^2 defining function";
    c.dim = 3;
    c.rho = "z - x*y^2";
    c.region.min = Vec(3);
    c.region.max = Vec(3);
    c.region.min << 1, -1, -1;
    c.region.max << 64, 1, 1;
    c.expected = {{2, Verdict::kDivergent}};
    c.line_sweep = true;
    cases.push_back(c);
  }
  {
    CorpusCase c;
    c.name = "rho1h";
    c.description = "omega1 rescaled by e^{x^2}: loses the C_b^3 bound";
    c.dim = 2;
    c.rho = "(y - sin(x)/x)*exp(x^2)";
    c.branches = {
        {"abs(x) < 0.1", std::string("(y - (") + kSincSeries + "))*exp(x^2)"}};
    c.region = box2(-12, 12, -3, 3);
    c.expected = {{2, Verdict::kBounded}, {3, Verdict::kDivergent}};
    cases.push_back(c);
  }
  {
    CorpusCase c;
    c.name = "rho2h";
    c.description = "omega2 rescaled by e^{x^2}: C_b^2 bounded, extrinsic C^2 infinite";
    c.dim = 2;
    c.rho = "(y - sin(x^2)/x^2)*exp(x^2)";
    c.branches = {
        {"abs(x) < 0.1", std::string("(y - (") + kSincSquareSeries + "))*exp(x^2)"}};
    c.region = box2(-12, 12, -3, 3);
    c.expected = {{2, Verdict::kBounded}};
    c.expected_extrinsic = Verdict::kDivergent;
    cases.push_back(c);
  }
  {
    CorpusCase c;
    c.name = "tube";
    c.description = "tube |z'|^2 + (Im z_n)^2 < 1 in C^2";
    c.dim = 4;
    c.complex_dim = 2;
    c.rho = "x1^2 + x2^2 + x4^2 - 1";
    c.region.min = Vec(4);
    c.region.max = Vec(4);
    c.region.min << -1.5, -1.5, -3, -1.5;
    c.region.max << 1.5, 1.5, 3, 1.5;
    c.expected = {{2, Verdict::kBounded}};
    cases.push_back(c);
  }
  return cases;
}

std::vector<BoundarySample> line_sweep_probes(const ScalarField& field, int order,
                                              int target, double xmax) {
  // feet (x, 0, 0) on the counterexample boundary, geometric sweep 1..xmax.
  std::vector<BoundarySample> out;
  int count = std::max(target, 8);
  for (int i = 0; i < count; ++i) {
    double x = std::pow(xmax, static_cast<double>(i) / (count - 1));
    Vec p(3);
    p << x, 0.0, 0.0;
    out.push_back(make_boundary_sample(field, p, order, 1e-9));
  }
  return out;
}

std::vector<BoundarySample> aligned_probes(const ScalarField& field, int order, int target,
                                           double xmin, double xmax) {
  // x = sqrt(k*pi): sin(x^2) = 0 and |cos(x^2)| = 1, the divergence envelope.
  std::vector<BoundarySample> out;
  long kmin = static_cast<long>(std::ceil(xmin * xmin / M_PI));
  long kmax = static_cast<long>(std::floor(xmax * xmax / M_PI));
  if (kmax <= kmin) throw domain_error("aligned probe range is empty");
  int count = std::max(target, 8);
  for (int i = 0; i < count; ++i) {
    long k = kmin + static_cast<long>((kmax - kmin) * static_cast<double>(i) / (count - 1));
    double x = std::sqrt(static_cast<double>(k) * M_PI);
    Vec p(2);
    p << x, 0.0;
    out.push_back(make_boundary_sample(field, p, order, 1e-9));
  }
  return out;
}

}  // namespace

const std::vector<CorpusCase>& corpus_cases() {
  static const std::vector<CorpusCase> cases = build_cases();
  return cases;
}

const CorpusCase& corpus_case(const std::string& name) {
  for (const CorpusCase& c : corpus_cases())
    if (c.name == name) return c;
  throw domain_error("unknown corpus case '" + name + "'");
}

ScalarField corpus_field(const CorpusCase& c, int max_jet_order) {
  return make_field(c.dim, c.rho, c.branches, max_jet_order);
}

std::vector<BoundarySample> corpus_probes(const CorpusCase& c, const ScalarField& field,
                                          int order, int target, unsigned seed,
                                          bool doubled, int threads) {
  if (c.line_sweep) {
    double xmax = c.region.max[0] * (doubled ? 2.0 : 1.0);
    return line_sweep_probes(field, order, std::min(target, 64), xmax);
  }
  bool aligned = std::find(c.aligned_orders.begin(), c.aligned_orders.end(), order) !=
                 c.aligned_orders.end();
  if (aligned) {
    double xmax = c.region.max[0] * (doubled ? 2.0 : 1.0);
    return aligned_probes(field, order, std::min(target, 64), 5.0, xmax);
  }
  SamplingOptions opts;
  opts.target = target;
  opts.jet_order = order;
  opts.seed = seed;
  opts.threads = threads;
  Box region = doubled ? c.region.scaled(2.0) : c.region;
  return sample_boundary(field, region, opts);
}

CorpusRunResult run_corpus_case(const CorpusCase& c, const CorpusRunOptions& opts) {
  CorpusRunResult result;
  result.name = c.name;
  ScalarField field = corpus_field(c);
  int samples = opts.samples > 0 ? opts.samples : c.default_samples;

  for (const auto& [order, expected] : c.expected) {
    if (opts.max_order > 0 && order > opts.max_order) continue;
    auto probes = corpus_probes(c, field, order, samples, opts.seed, false, opts.threads);
    auto probes2 = corpus_probes(c, field, order, samples, opts.seed, true, opts.threads);
    UniformityReport rep = uniformity_report(probes, order, &probes2);

    CorpusOrderResult r;
    r.order = order;
    r.verdict = rep.verdict;
    r.sup_ratio = rep.sup_ratio;
    r.slope = rep.growth.degenerate ? 0.0 : rep.growth.slope;
    r.matches = rep.verdict == expected;
    result.matches_expected = result.matches_expected && r.matches;
    result.orders.push_back(r);
  }

  if (c.expected_extrinsic.has_value()) {
    auto probes = corpus_probes(c, field, 2, samples, opts.seed, false, opts.threads);
    std::vector<double> radii, values;
    for (const BoundarySample& s : probes) {
      radii.push_back(s.point.norm());
      values.push_back(extrinsic_sample_value(s, 2));
    }
    GrowthFit fit = growth_fit(radii, values);
    result.extrinsic_slope = fit.degenerate ? 0.0 : fit.slope;
    result.extrinsic_verdict =
        (!fit.degenerate && fit.slope > 0.1) ? Verdict::kDivergent : Verdict::kBounded;
    result.matches_expected =
        result.matches_expected && (*result.extrinsic_verdict == *c.expected_extrinsic);
  }
  return result;
}

ProjectiveDecay projective_decay_fit(const std::vector<BoundarySample>& samples, int m,
                                     double tol) {
  if (samples.empty()) throw domain_error("projective decay fit requires samples");
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (const BoundarySample& s : samples) {
    double r = s.point.norm();
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  if (rmax < 10.0 * std::max(rmin, 1e-6))
    throw domain_error("insufficient radial span: samples must cover a decade of |x|");

  int n = samples.front().point.size();
  auto level_norm = [&](const BoundarySample& s, int k) {
    double acc = 0.0;
    for (const MultiIndex& I : increasing_multi_indices(n, k)) {
      double v = s.jet.derivative(I);
      acc += v * v;
    }
    return std::sqrt(acc);
  };

  // envelope slope over the full outer decade
  auto envelope_slope = [&](const std::vector<double>& radii,
                            const std::vector<double>& values) {
    double amax = 0.0;
    for (double r : radii) amax = std::max(amax, std::log1p(r));
    double lo = amax - std::log(10.0);
    int bins = 6;
    std::vector<double> bin_max(bins, -1.0);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      double a = std::log1p(radii[i]);
      if (a < lo) continue;
      int b = std::min(bins - 1, static_cast<int>((a - lo) / (amax - lo) * bins));
      bin_max[b] = std::max(bin_max[b], values[i]);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    bool any_positive = false;
    for (int b = 0; b < bins; ++b) {
      if (bin_max[b] < 0.0) continue;
      if (bin_max[b] <= 1e-300) continue;
      any_positive = true;
      double x = lo + (b + 0.5) * (amax - lo) / bins;
      double y = std::log(bin_max[b]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++used;
    }
    if (!any_positive) return -std::numeric_limits<double>::infinity();
    if (used < 2) return 0.0;
    return (used * sxy - sx * sy) / (used * sxx - sx * sx);
  };

  std::vector<double> radii;
  for (const BoundarySample& s : samples) radii.push_back(s.point.norm());

  ProjectiveDecay out;
  out.order = m;
  std::vector<double> grad1;
  for (const BoundarySample& s : samples) grad1.push_back(level_norm(s, 1));
  out.gradient_slopes.push_back(envelope_slope(radii, grad1));

  out.projective = true;
  for (int k = 2; k <= m; ++k) {
    std::vector<double> level, ratio;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      double v = level_norm(samples[i], k);
      level.push_back(v);
      ratio.push_back(v / grad1[i]);
    }
    out.gradient_slopes.push_back(envelope_slope(radii, level));
    double slope = envelope_slope(radii, ratio);
    out.ratio_slopes.push_back(slope);
    if (!(slope <= -(k - 1) + tol)) out.projective = false;
  }
  return out;
}

}  // namespace collar
