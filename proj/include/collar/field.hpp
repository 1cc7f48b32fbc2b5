#pragma once

#include <optional>
#include <string>
#include <vector>

#include "collar/expression.hpp"
#include "collar/taylor.hpp"

namespace collar {

// Piecewise scalar field over R^n. At a point, the first branch whose guard
// holds is evaluated; guarded branches precede the unguarded default. The
// field is immutable after construction.
class ScalarField {
 public:
  struct Branch {
    Guard guard;
    ExprPtr expr;
    std::string source;
  };

  ScalarField(int dim, std::vector<Branch> branches, int max_jet_order = 6)
      : dim_(dim), branches_(std::move(branches)), max_jet_order_(max_jet_order) {}

  int dim() const { return dim_; }
  int max_jet_order() const { return max_jet_order_; }
  const std::vector<Branch>& branches() const { return branches_; }

  const Branch& active_branch(const Vec& x) const;

  double value(const Vec& x) const;
  Jet jet(const Vec& x, int order) const;

  Vec gradient(const Vec& x) const { return jet(x, 1).gradient(); }

 private:
  int dim_;
  std::vector<Branch> branches_;
  int max_jet_order_;
};

// Parses a single-branch field from expression source.
ScalarField parse_field(const std::string& text, int dim, int max_jet_order = 6);

// Field with guarded branches (checked in order) in front of the default
// expression.
ScalarField make_field(int dim, const std::string& default_expr,
                       const std::vector<std::pair<std::string, std::string>>& guarded,
                       int max_jet_order = 6);

struct FieldValidation {
  double max_disagreement = 0.0;
  int probes_checked = 0;
  bool passed = true;
  struct Worst {
    Vec point;
    int branch_a = -1;
    int branch_b = -1;
  };
  std::optional<Worst> worst;
};

// Cross-branch consistency: at each probe, all branches that evaluate are
// compared pairwise; the report carries the maximum disagreement. Probes are
// expected to straddle the guard boundaries.
FieldValidation validate_field(const ScalarField& field, const std::vector<Vec>& probes,
                               double tol);

// g * f for positive smooth g, used by the rescaling diagnostics; both factors
// keep their own guards.
ScalarField scaled_field(const ScalarField& f, const std::string& factor_expr);

}  // namespace collar
