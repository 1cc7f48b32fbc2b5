#pragma once

#include <functional>

#include "collar/partition.hpp"

namespace collar {

// Frame L_1..L_{n-1}, L_n = nu at a collar point: the adapted frame carried
// over from the foot of x, constant along normals.
AdaptedFrame collar_frame(const ScalarField& f, const Vec& x);

// (T_j u)(x) = (L_j u)(x) - (L_j phi_t)(x) u(x) with phi_t = t |x|^2.
// For j < n the first-order part is tangential to the level sets of delta.
double tangential_operator_apply(const ScalarField& f, double weight_t,
                                 const ScalarField& u, const Vec& x, int j);

struct WeightedNormSpec {
  int k = 0;          // derivative order
  double p = 2.0;     // exponent, >= 1
  double weight_t = 1.0;
  int grid_per_axis = 48;
  Box truncation;     // bounded quadrature window containing supp(u)
};

struct WeightedNormResult {
  double value = 0.0;             // (sum_j sum_{|alpha|<=k} ||T^alpha v_j||_p^p)^{1/p}
  double direct_lp = 0.0;         // plain weighted L^p of u over the collar
  double reconstructed_lp = 0.0;  // u evaluated through sum_j chi_j u at the nodes
  double quadrature_error = 0.0;  // relative change under one grid coarsening
  int nodes_used = 0;
};

// Desk-scale weighted Sobolev norm over the collar Omega_eps = {delta in
// (-eps, 0)}: midpoint quadrature on the truncation grid, weight e^{-t|x|^2},
// v_j = u * chi_j, T^alpha applied by nested directional differencing.
// Partial sums accumulate in fixed order.
WeightedNormResult weighted_sobolev_norm(const ScalarField& domain, const ScalarField& u,
                                         const WeightedNormSpec& spec,
                                         const PartitionData& cover, double collar_eps,
                                         int threads = 0);

}  // namespace collar
