#include "collar/field.hpp"

#include <cmath>

namespace collar {

const ScalarField::Branch& ScalarField::active_branch(const Vec& x) const {
  for (const Branch& b : branches_)
    if (b.guard.holds(x)) return b;
  throw domain_error("no branch guard holds at the requested point");
}

double ScalarField::value(const Vec& x) const {
  return eval_value(*active_branch(x).expr, x);
}

Jet ScalarField::jet(const Vec& x, int order) const {
  if (order > max_jet_order_)
    throw order_exceeded("requested jet order " + std::to_string(order) +
                         " exceeds field limit " + std::to_string(max_jet_order_));
  const Branch& b = active_branch(x);
  const JetSpace& sp = JetSpace::get(dim_, order);
  std::vector<TaylorScalar> vars;
  vars.reserve(dim_);
  for (int i = 0; i < dim_; ++i) vars.push_back(TaylorScalar::variable(sp, i, x[i]));
  return Jet::from_taylor(x, eval_taylor(*b.expr, vars));
}

ScalarField parse_field(const std::string& text, int dim, int max_jet_order) {
  std::vector<ScalarField::Branch> branches;
  branches.push_back({Guard::always(), parse_expression(text, dim), text});
  return ScalarField(dim, std::move(branches), max_jet_order);
}

ScalarField make_field(int dim, const std::string& default_expr,
                       const std::vector<std::pair<std::string, std::string>>& guarded,
                       int max_jet_order) {
  std::vector<ScalarField::Branch> branches;
  for (const auto& [guard_text, expr_text] : guarded)
    branches.push_back(
        {parse_guard(guard_text, dim), parse_expression(expr_text, dim), expr_text});
  branches.push_back({Guard::always(), parse_expression(default_expr, dim), default_expr});
  return ScalarField(dim, std::move(branches), max_jet_order);
}

FieldValidation validate_field(const ScalarField& field, const std::vector<Vec>& probes,
                               double tol) {
  FieldValidation report;
  for (const Vec& p : probes) {
    std::vector<std::pair<int, double>> values;
    for (int bi = 0; bi < static_cast<int>(field.branches().size()); ++bi) {
      try {
        values.emplace_back(bi, eval_value(*field.branches()[bi].expr, p));
      } catch (const singular_evaluation&) {
        // branch not evaluable here; skip
      }
    }
    ++report.probes_checked;
    for (std::size_t i = 0; i < values.size(); ++i) {
      for (std::size_t j = i + 1; j < values.size(); ++j) {
        double gap = std::abs(values[i].second - values[j].second);
        if (gap > report.max_disagreement) {
          report.max_disagreement = gap;
          report.worst = FieldValidation::Worst{p, values[i].first, values[j].first};
        }
      }
    }
  }
  report.passed = report.max_disagreement <= tol;
  return report;
}

ScalarField scaled_field(const ScalarField& f, const std::string& factor_expr) {
  ExprPtr factor = parse_expression(factor_expr, f.dim());
  std::vector<ScalarField::Branch> branches;
  for (const auto& b : f.branches()) {
    auto node = std::make_shared<ExprNode>();
    node->op = ExprOp::kMul;
    node->lhs = b.expr;
    node->rhs = factor;
    branches.push_back({b.guard, node, "(" + b.source + ")*(" + factor_expr + ")"});
  }
  return ScalarField(f.dim(), std::move(branches), f.max_jet_order());
}

}  // namespace collar
