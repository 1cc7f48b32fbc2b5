#pragma once

#include <memory>
#include <string>
#include <vector>

#include "collar/common.hpp"
#include "collar/taylor.hpp"

namespace collar {

// Expression tree over R^n. Nodes are immutable after parse; evaluation is a
// pure function, safe to run concurrently.
struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

enum class ExprOp {
  kConstant,
  kVariable,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
  kNeg,
  kSin,
  kCos,
  kTan,
  kExp,
  kLog,
  kSqrt,
  kAtan,
  kAbs,
};

struct ExprNode {
  ExprOp op;
  double constant = 0.0;
  int variable = -1;
  ExprPtr lhs;
  ExprPtr rhs;
  // set for kPow when the exponent folds to an integer constant
  bool integer_exponent = false;
  long long exponent_value = 0;
};

double eval_value(const ExprNode& node, const Vec& x);
TaylorScalar eval_taylor(const ExprNode& node, const std::vector<TaylorScalar>& vars);

// Comparison predicate over R^n (guard grammar: expression comparisons, plus
// abs() in the operand expressions).
struct Guard {
  ExprPtr lhs;
  ExprPtr rhs;
  enum class Cmp { kLess, kLessEq, kGreater, kGreaterEq, kAlways } cmp = Cmp::kAlways;

  bool holds(const Vec& x) const;
  static Guard always() { return Guard{}; }
};

// Parses an expression in the grammar
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' atom)?
//   atom   := number | ident | func '(' expr ')' | '(' expr ')' | '-' atom
// Identifiers x, y, z alias x1, x2, x3; xN names coordinate N. `allow_abs`
// admits abs() (used by guards only).
ExprPtr parse_expression(const std::string& text, int dim, bool allow_abs = false);

// guard := expr cmp expr, cmp in { <, <=, >, >= }
Guard parse_guard(const std::string& text, int dim);

std::vector<std::string> expression_identifiers(int dim);

}  // namespace collar
