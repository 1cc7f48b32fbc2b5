#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "collar/common.hpp"
#include "collar/multi_index.hpp"

namespace collar {

// Index space for truncated multivariate Taylor polynomials in `dim`
// variables up to total degree `order`. Monomials are enumerated in graded
// lexicographic order (index 0 is the constant term). Spaces are cached and
// immutable, so they are safe to share between threads.
class JetSpace {
 public:
  static const JetSpace& get(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(exponents_.size()); }

  const std::vector<int>& exponent(int idx) const { return exponents_[idx]; }
  int degree(int idx) const { return degrees_[idx]; }
  int index_of(const std::vector<int>& exps) const;
  int variable_index(int var) const { return var_index_[var]; }

  // Triples (ia, ib, ic) with exponent(ia)+exponent(ib) = exponent(ic); the
  // complete truncated convolution stencil.
  const std::vector<std::array<int, 3>>& product_table() const { return products_; }

 private:
  JetSpace(int dim, int order);

  std::int64_t pack(const std::vector<int>& exps) const;

  int dim_;
  int order_;
  std::vector<std::vector<int>> exponents_;
  std::vector<int> degrees_;
  std::vector<int> var_index_;
  std::unordered_map<std::int64_t, int> lookup_;
  std::vector<std::array<int, 3>> products_;
};

// Value of a truncated multivariate Taylor expansion: coefficient c[idx] is
// the coefficient of the monomial (x - x0)^exponent(idx). Arithmetic is exact
// on polynomials up to the truncation order.
class TaylorScalar {
 public:
  TaylorScalar() : space_(nullptr) {}
  explicit TaylorScalar(const JetSpace& space, double value = 0.0)
      : space_(&space), c_(Vec::Zero(space.size())) {
    c_[0] = value;
  }

  static TaylorScalar variable(const JetSpace& space, int var, double base_value) {
    TaylorScalar t(space, base_value);
    if (space.order() >= 1) t.c_[space.variable_index(var)] = 1.0;
    return t;
  }

  const JetSpace& space() const { return *space_; }
  double value() const { return c_[0]; }
  const Vec& coeffs() const { return c_; }
  Vec& coeffs() { return c_; }

  TaylorScalar operator-() const {
    TaylorScalar r = *this;
    r.c_ = -r.c_;
    return r;
  }

  friend TaylorScalar operator+(const TaylorScalar& a, const TaylorScalar& b) {
    TaylorScalar r = a;
    r.c_ += b.c_;
    return r;
  }
  friend TaylorScalar operator-(const TaylorScalar& a, const TaylorScalar& b) {
    TaylorScalar r = a;
    r.c_ -= b.c_;
    return r;
  }
  friend TaylorScalar operator*(const TaylorScalar& a, const TaylorScalar& b);
  friend TaylorScalar operator/(const TaylorScalar& a, const TaylorScalar& b);

  friend TaylorScalar operator+(const TaylorScalar& a, double s) {
    TaylorScalar r = a;
    r.c_[0] += s;
    return r;
  }
  friend TaylorScalar operator*(double s, const TaylorScalar& a) {
    TaylorScalar r = a;
    r.c_ *= s;
    return r;
  }

 private:
  const JetSpace* space_;
  Vec c_;
};

// Composition with a univariate analytic function given by its Taylor
// coefficients at u.value(): g_coeffs[j] = g^(j)(u0)/j!.
TaylorScalar compose_univariate(const Vec& g_coeffs, const TaylorScalar& u);

TaylorScalar ts_sin(const TaylorScalar& u);
TaylorScalar ts_cos(const TaylorScalar& u);
TaylorScalar ts_tan(const TaylorScalar& u);
TaylorScalar ts_exp(const TaylorScalar& u);
TaylorScalar ts_log(const TaylorScalar& u);
TaylorScalar ts_sqrt(const TaylorScalar& u);
TaylorScalar ts_atan(const TaylorScalar& u);
TaylorScalar ts_pow_int(const TaylorScalar& u, long long e);
TaylorScalar ts_pow_real(const TaylorScalar& u, double e);

// Mixed partial derivatives of a scalar function at a point, stored once per
// increasing multi-index (dense over the jet space, multiplicity implied).
class Jet {
 public:
  Jet() : space_(nullptr) {}
  Jet(Vec base_point, const JetSpace& space)
      : x_(std::move(base_point)), space_(&space), partials_(Vec::Zero(space.size())) {}

  // Converts Taylor coefficients into mixed partials (multiply by the
  // exponent factorial).
  static Jet from_taylor(Vec base_point, const TaylorScalar& t);

  const Vec& point() const { return x_; }
  int dim() const { return space_->dim(); }
  int order() const { return space_->order(); }
  const JetSpace& space() const { return *space_; }
  const Vec& partials() const { return partials_; }
  Vec& partials() { return partials_; }

  double value() const { return partials_[0]; }

  // Mixed partial for a variable-id tuple; order of the tuple is irrelevant.
  double derivative(const MultiIndex& index) const;
  double derivative(const std::vector<int>& exps) const;

  Vec gradient() const;
  Mat hessian() const;

  TaylorScalar to_taylor() const;

  // The same jet expressed in coordinates y = Q^T (x - p): substitutes the
  // linear change of variables into the truncated polynomial.
  Jet rotated(const Mat& rotation) const;

 private:
  Vec x_;
  const JetSpace* space_;
  Vec partials_;
};

}  // namespace collar
