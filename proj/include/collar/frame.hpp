#pragma once

#include "collar/common.hpp"
#include "collar/multi_index.hpp"
#include "collar/taylor.hpp"

namespace collar {

// Orthonormal coordinates at a boundary point whose last axis is the unit
// outward normal; the first n-1 columns span the tangent plane. Built by a
// deterministic Householder reflection, no random tangent basis.
struct AdaptedFrame {
  Vec origin;
  Mat Q;  // columns y_1..y_n, Q.col(n-1) = normal

  int dim() const { return static_cast<int>(Q.rows()); }
  Vec normal() const { return Q.col(Q.cols() - 1); }
  Vec tangent(int j) const { return Q.col(j); }
};

// Frame from a (nonzero) gradient; the normal is gradient/|gradient|.
AdaptedFrame frame_from_gradient(const Vec& point, const Vec& gradient);

// Mixed partial d^{|I|+j} f / dy_I dy_n^j in frame coordinates y = Q^T(x-p),
// with I over tangential slots. Contracts the Cartesian jet with the frame.
double frame_derivative(const Jet& jet, const AdaptedFrame& frame, const MultiIndex& I,
                        int normal_count);

// Same, reading from a jet already rotated into the frame.
double adapted_derivative(const Jet& rotated_jet, const MultiIndex& I, int normal_count);

// Eigenvalues/vectors of a symmetric matrix by cyclic Jacobi rotations
// (threshold 1e-12, 30-sweep cap). Eigenvalues are sorted descending and the
// decomposition is deterministic.
struct SymmetricEigen {
  Vec eigenvalues;
  Mat eigenvectors;  // columns
  double min_gap = 0.0;
};

SymmetricEigen symmetric_eigen(const Mat& m);

// Minimum eigenvalue of a Hermitian matrix via the real symmetric embedding
// [[Re, -Im], [Im, Re]].
double hermitian_min_eigenvalue(const CMat& m);

}  // namespace collar
