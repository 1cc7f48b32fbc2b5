#pragma once

#include <vector>

#include "collar/geometry.hpp"

namespace collar {

// C^inf cutoff profile: 1 for s <= 1/2, 0 for s >= 1, a quotient smoothstep
// with exp(-1/u) kernels in between (all derivatives vanish at the joints).
double cutoff_profile(double s);

// chi(x) = profile(|x|/r)
double cutoff(const Vec& offset, double r);

struct PartitionData {
  double radius = 0.0;
  double spacing = 0.0;  // r / sqrt(n)
  std::vector<Vec> centers;
  int overlap_bound = 0;  // (2*ceil(sqrt(n)) + 1)^n
  Box region;
};

// Lattice cover of the region with centers at integral multiples of
// r/sqrt(n) (boundary-inclusive), enumerated lexicographically. Every point
// of the region is within r/2 of some center.
PartitionData lattice_cover(double r, const Box& region);

// Keep only centers whose ball B(p_j, r) can meet the collar
// {x in Omega : delta(x) < eps}; chi_j keep their full-lattice normalization
// semantics because the dropped cutoffs vanish on the collar.
PartitionData restrict_to_collar(const PartitionData& cover, const ScalarField& f,
                                 double eps);

// chi_j(x) = chi(x - p_j) / sum_k chi(x - p_k) over the cover's centers; only
// centers with |x - p_j| < r contribute. Throws if no center covers x.
std::vector<std::pair<int, double>> partition_functions(const PartitionData& cover,
                                                        const Vec& x);

// Largest r <= reach/4 (or <= cap when the reach is infinite) such that the
// boundary normal varies by less than 45 degrees between samples at distance
// <= 2r: level sets stay graphs over the cover balls.
double choose_cover_radius(const std::vector<BoundarySample>& collar_samples,
                           double reach, double cap = 1.0);

}  // namespace collar
