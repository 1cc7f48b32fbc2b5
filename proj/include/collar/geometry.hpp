#pragma once

#include <optional>
#include <vector>

#include "collar/field.hpp"
#include "collar/frame.hpp"

namespace collar {

struct ProjectionOptions {
  double tol = 1e-10;
  int max_iterations = 80;
  int flow_steps = 3;
  // Multi-start probing for non-unique nearest points (2n+1 seeds).
  bool probe_uniqueness = true;
  double perturbation_scale = 0.1;
};

// Result of projecting a query point to the zero set of rho.
struct DistanceEval {
  Vec query;
  Vec foot;
  double signed_value = 0.0;
  bool unique = true;
  bool in_collar = false;  // |signed_value| < collar_radius when one was given
  int newton_iterations = 0;
  double constraint_residual = 0.0;
  double tangency_residual = 0.0;
};

// Nearest-point projection by Lagrange-Newton on minimize |x-y|^2 subject to
// rho(y)=0, seeded with damped gradient-flow steps. The signed value carries
// the sign of rho(x): negative inside, positive outside.
DistanceEval boundary_project(const ScalarField& f, const Vec& x,
                              const ProjectionOptions& opts = {},
                              double collar_radius = 0.0);

double signed_distance(const ScalarField& f, const Vec& x, double tol = 1e-10);

// A certified boundary point with adapted frame and jets of rho.
struct BoundarySample {
  Vec point;
  AdaptedFrame frame;
  Jet jet;          // Cartesian jet of rho at point
  Jet jet_adapted;  // the same jet in frame coordinates
  double grad_norm = 0.0;
};

BoundarySample make_boundary_sample(const ScalarField& f, const Vec& p, int order,
                                    double proj_tol = 1e-10);

struct SamplingOptions {
  int target = 512;
  int jet_order = 3;
  unsigned seed = 42;
  double min_spacing = 0.0;   // stop early if the next pick would be closer
  double jitter = 0.0;        // seed-grid jitter in cell units (seeded RNG)
  int grid_scale = 4;         // seed count ~ grid_scale * target
  double proj_tol = 1e-10;
  int threads = 0;
};

// Quasi-uniform boundary sampling: project a seed grid, then select
// `target` feet by farthest-point traversal; output sorted lexicographically,
// so it is deterministic and thread-count independent.
std::vector<BoundarySample> sample_boundary(const ScalarField& f, const Box& region,
                                            const SamplingOptions& opts = {});

}  // namespace collar
