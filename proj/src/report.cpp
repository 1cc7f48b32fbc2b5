#include <chrono>

#include <json.hpp>

#include "collar/curvature.hpp"
#include "collar/report.hpp"

namespace collar {

namespace {

nlohmann::ordered_json vec_to_json(const Vec& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

AnalysisOutcome run_analysis(const DomainSpec& spec, const AnalyzeConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  if (!spec.has_region) throw domain_error("analysis requires a region in the spec");
  ScalarField field = field_from_spec(spec);

  SamplingOptions sopts;
  sopts.target = config.samples;
  sopts.jet_order = std::max(config.order, 2);
  sopts.seed = config.seed;
  sopts.proj_tol = config.tol;
  sopts.threads = config.threads;

  AnalysisOutcome out;
  auto samples = sample_boundary(field, spec.region, sopts);
  auto doubled = sample_boundary(field, spec.region.scaled(2.0), sopts);
  out.uniformity = uniformity_report(samples, config.order, &doubled);
  out.reach = reach_estimate(field, samples, config.seed);
  for (const BoundarySample& s : samples) {
    ShapeData shape = tangential_hessian(s);
    out.curvature_spectra_points.push_back(s.point);
    out.curvature_spectra.push_back(shape.principal_curvatures);
  }
  out.verdict = out.uniformity.verdict;
  out.elapsed_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return out;
}

std::string render_report_json(const DomainSpec& spec, const AnalyzeConfig& config,
                               const AnalysisOutcome& outcome) {
  nlohmann::ordered_json j;
  j["version"] = "1";
  j["spec"] = {{"name", spec.name},
               {"digest", digest_hex(spec.digest)},
               {"dim", spec.dim}};
  j["configuration"] = {{"order", config.order}, {"samples", config.samples},
                        {"seed", config.seed},   {"tol", config.tol},
                        {"fd_step", config.fd_step}, {"strict", config.strict},
                        {"growth_fit", config.growth_fit}};

  nlohmann::ordered_json samples = nlohmann::ordered_json::array();
  const auto& records = outcome.uniformity.records;
  for (std::size_t i = 0; i < records.size(); ++i) {
    nlohmann::ordered_json rec;
    rec["point"] = vec_to_json(records[i].point);
    rec["grad_norm"] = records[i].grad_norm;
    rec["ratios"] = records[i].ratios;
    rec["uniformity_ratio"] = records[i].uniformity_ratio;
    if (i < outcome.curvature_spectra.size())
      rec["curvatures"] = vec_to_json(outcome.curvature_spectra[i]);
    samples.push_back(std::move(rec));
  }
  j["samples"] = std::move(samples);

  nlohmann::ordered_json agg;
  agg["sup_uniformity_ratio"] = outcome.uniformity.sup_ratio;
  agg["doubling_change"] = outcome.uniformity.doubling_change;
  if (config.growth_fit) {
    agg["growth"] = {{"slope", outcome.uniformity.growth.slope},
                     {"points_used", outcome.uniformity.growth.points_used},
                     {"degenerate", outcome.uniformity.growth.degenerate}};
  }
  agg["reach_infinite"] = outcome.reach.infinite;
  if (outcome.reach.infinite)
    agg["reach"] = nullptr;
  else
    agg["reach"] = outcome.reach.reach;
  agg["verdict"] = to_string(outcome.verdict);
  j["aggregates"] = std::move(agg);

  if (config.timing)
    j["timing_ms"] = outcome.elapsed_ms;
  else
    j["timing_ms"] = nullptr;

  return j.dump(2) + "\n";
}

}  // namespace collar
