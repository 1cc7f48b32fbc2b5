#include "collar/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace collar {

namespace {

struct Token {
  enum class Kind { kNumber, kIdent, kSymbol, kEnd } kind;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
    tok_.line = line_;
    tok_.column = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::Kind::kEnd;
      tok_.text.clear();
      return;
    }
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src_.c_str() + pos_;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      std::size_t len = static_cast<std::size_t>(end - begin);
      if (len == 0) {
        tok_.kind = Token::Kind::kSymbol;
        tok_.text = std::string(1, c);
        ++pos_;
        ++col_;
        return;
      }
      tok_.kind = Token::Kind::kNumber;
      tok_.number = v;
      tok_.text = src_.substr(pos_, len);
      pos_ += len;
      col_ += static_cast<int>(len);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
        ++col_;
      }
      tok_.kind = Token::Kind::kIdent;
      tok_.text = src_.substr(start, pos_ - start);
      return;
    }
    // two-character comparison operators
    if ((c == '<' || c == '>') && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
      tok_.kind = Token::Kind::kSymbol;
      tok_.text = src_.substr(pos_, 2);
      pos_ += 2;
      col_ += 2;
      return;
    }
    tok_.kind = Token::Kind::kSymbol;
    tok_.text = std::string(1, c);
    ++pos_;
    ++col_;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

ExprPtr make_const(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::kConstant;
  n->constant = v;
  return n;
}

ExprPtr make_unary(ExprOp op, ExprPtr arg) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(arg);
  return n;
}

ExprPtr make_binary(ExprOp op, ExprPtr a, ExprPtr b) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

bool is_constant_tree(const ExprNode& n) {
  switch (n.op) {
    case ExprOp::kConstant: return true;
    case ExprOp::kVariable: return false;
    default:
      return (!n.lhs || is_constant_tree(*n.lhs)) && (!n.rhs || is_constant_tree(*n.rhs));
  }
}

class Parser {
 public:
  Parser(const std::string& text, int dim, bool allow_abs)
      : lexer_(text), dim_(dim), allow_abs_(allow_abs) {}

  ExprPtr parse_full_expression() {
    ExprPtr e = parse_expr();
    expect_end();
    return e;
  }

  Guard parse_full_guard() {
    ExprPtr lhs = parse_expr();
    Token t = lexer_.take();
    Guard g;
    g.lhs = lhs;
    if (t.kind != Token::Kind::kSymbol)
      throw parse_error("expected comparison operator", t.line, t.column);
    if (t.text == "<")
      g.cmp = Guard::Cmp::kLess;
    else if (t.text == "<=")
      g.cmp = Guard::Cmp::kLessEq;
    else if (t.text == ">")
      g.cmp = Guard::Cmp::kGreater;
    else if (t.text == ">=")
      g.cmp = Guard::Cmp::kGreaterEq;
    else
      throw parse_error("unknown comparison operator '" + t.text + "'", t.line, t.column);
    g.rhs = parse_expr();
    expect_end();
    return g;
  }

 private:
  void expect_end() {
    const Token& t = lexer_.peek();
    if (t.kind != Token::Kind::kEnd)
      throw parse_error("unexpected trailing input '" + t.text + "'", t.line, t.column);
  }

  bool peek_symbol(const char* s) const {
    return lexer_.peek().kind == Token::Kind::kSymbol && lexer_.peek().text == s;
  }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    for (;;) {
      if (peek_symbol("+")) {
        lexer_.take();
        lhs = make_binary(ExprOp::kAdd, lhs, parse_term());
      } else if (peek_symbol("-")) {
        lexer_.take();
        lhs = make_binary(ExprOp::kSub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    for (;;) {
      if (peek_symbol("*")) {
        lexer_.take();
        lhs = make_binary(ExprOp::kMul, lhs, parse_factor());
      } else if (peek_symbol("/")) {
        lexer_.take();
        lhs = make_binary(ExprOp::kDiv, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_factor() {
    ExprPtr base = parse_atom();
    if (peek_symbol("^")) {
      Token caret = lexer_.take();
      ExprPtr expo = parse_atom();
      auto n = std::make_shared<ExprNode>();
      n->op = ExprOp::kPow;
      n->lhs = base;
      n->rhs = expo;
      if (is_constant_tree(*expo)) {
        double v = eval_value(*expo, Vec());
        double r = std::round(v);
        if (std::abs(v - r) < 1e-12 && std::abs(r) < 1e15) {
          n->integer_exponent = true;
          n->exponent_value = static_cast<long long>(r);
        }
      }
      (void)caret;
      return n;
    }
    return base;
  }

  ExprPtr parse_atom() {
    Token t = lexer_.take();
    switch (t.kind) {
      case Token::Kind::kNumber:
        return make_const(t.number);
      case Token::Kind::kIdent:
        return parse_ident(t);
      case Token::Kind::kSymbol:
        if (t.text == "(") {
          ExprPtr inner = parse_expr();
          expect_symbol(")");
          return inner;
        }
        if (t.text == "-") return make_unary(ExprOp::kNeg, parse_atom());
        throw parse_error("unexpected symbol '" + t.text + "'", t.line, t.column);
      case Token::Kind::kEnd:
        throw parse_error("unexpected end of expression", t.line, t.column);
    }
    throw parse_error("unreachable", t.line, t.column);
  }

  void expect_symbol(const char* s) {
    Token t = lexer_.take();
    if (t.kind != Token::Kind::kSymbol || t.text != s)
      throw parse_error(std::string("expected '") + s + "'", t.line, t.column);
  }

  ExprPtr parse_ident(const Token& t) {
    const std::string& name = t.text;
    if (name == "pi") return make_const(M_PI);
    if (name == "e") return make_const(M_E);

    static const struct {
      const char* name;
      ExprOp op;
    } kFunctions[] = {
        {"sin", ExprOp::kSin}, {"cos", ExprOp::kCos},  {"tan", ExprOp::kTan},
        {"exp", ExprOp::kExp}, {"log", ExprOp::kLog},  {"sqrt", ExprOp::kSqrt},
        {"atan", ExprOp::kAtan}, {"abs", ExprOp::kAbs},
    };
    for (const auto& f : kFunctions) {
      if (name == f.name) {
        if (f.op == ExprOp::kAbs && !allow_abs_)
          throw parse_error("abs() is only allowed in guards", t.line, t.column);
        expect_symbol("(");
        ExprPtr arg = parse_expr();
        expect_symbol(")");
        return make_unary(f.op, arg);
      }
    }

    int var = -1;
    if (name == "x")
      var = 0;
    else if (name == "y")
      var = 1;
    else if (name == "z")
      var = 2;
    else if (name.size() >= 2 && name[0] == 'x') {
      bool digits = true;
      for (std::size_t i = 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
      if (digits) var = std::stoi(name.substr(1)) - 1;
    }
    if (var < 0)
      throw parse_error("unknown identifier '" + name + "'", t.line, t.column);
    if (var >= dim_)
      throw parse_error("variable '" + name + "' exceeds dimension " +
                            std::to_string(dim_),
                        t.line, t.column);
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::kVariable;
    n->variable = var;
    return n;
  }

  Lexer lexer_;
  int dim_;
  bool allow_abs_;
};

}  // namespace

double eval_value(const ExprNode& node, const Vec& x) {
  switch (node.op) {
    case ExprOp::kConstant: return node.constant;
    case ExprOp::kVariable: return x[node.variable];
    case ExprOp::kAdd: return eval_value(*node.lhs, x) + eval_value(*node.rhs, x);
    case ExprOp::kSub: return eval_value(*node.lhs, x) - eval_value(*node.rhs, x);
    case ExprOp::kMul: return eval_value(*node.lhs, x) * eval_value(*node.rhs, x);
    case ExprOp::kDiv: {
      double den = eval_value(*node.rhs, x);
      if (std::abs(den) < kDivisionFloor)
        throw singular_evaluation("division by (near-)zero denominator");
      return eval_value(*node.lhs, x) / den;
    }
    case ExprOp::kPow: {
      double base = eval_value(*node.lhs, x);
      if (node.integer_exponent) return std::pow(base, static_cast<double>(node.exponent_value));
      double e = eval_value(*node.rhs, x);
      if (!(base > 0.0))
        throw singular_evaluation("power with non-integer exponent requires positive base");
      return std::pow(base, e);
    }
    case ExprOp::kNeg: return -eval_value(*node.lhs, x);
    case ExprOp::kSin: return std::sin(eval_value(*node.lhs, x));
    case ExprOp::kCos: return std::cos(eval_value(*node.lhs, x));
    case ExprOp::kTan: return std::tan(eval_value(*node.lhs, x));
    case ExprOp::kExp: return std::exp(eval_value(*node.lhs, x));
    case ExprOp::kLog: {
      double v = eval_value(*node.lhs, x);
      if (!(v > 0.0)) throw singular_evaluation("log of nonpositive value");
      return std::log(v);
    }
    case ExprOp::kSqrt: {
      double v = eval_value(*node.lhs, x);
      if (v < 0.0) throw singular_evaluation("sqrt of negative value");
      return std::sqrt(v);
    }
    case ExprOp::kAtan: return std::atan(eval_value(*node.lhs, x));
    case ExprOp::kAbs: return std::abs(eval_value(*node.lhs, x));
  }
  throw std::logic_error("unhandled expression op");
}

TaylorScalar eval_taylor(const ExprNode& node, const std::vector<TaylorScalar>& vars) {
  const JetSpace& sp = vars.front().space();
  switch (node.op) {
    case ExprOp::kConstant: return TaylorScalar(sp, node.constant);
    case ExprOp::kVariable: return vars[node.variable];
    case ExprOp::kAdd: return eval_taylor(*node.lhs, vars) + eval_taylor(*node.rhs, vars);
    case ExprOp::kSub: return eval_taylor(*node.lhs, vars) - eval_taylor(*node.rhs, vars);
    case ExprOp::kMul: return eval_taylor(*node.lhs, vars) * eval_taylor(*node.rhs, vars);
    case ExprOp::kDiv: return eval_taylor(*node.lhs, vars) / eval_taylor(*node.rhs, vars);
    case ExprOp::kPow: {
      TaylorScalar base = eval_taylor(*node.lhs, vars);
      if (node.integer_exponent) return ts_pow_int(base, node.exponent_value);
      TaylorScalar e = eval_taylor(*node.rhs, vars);
      return ts_exp(e * ts_log(base));
    }
    case ExprOp::kNeg: return -eval_taylor(*node.lhs, vars);
    case ExprOp::kSin: return ts_sin(eval_taylor(*node.lhs, vars));
    case ExprOp::kCos: return ts_cos(eval_taylor(*node.lhs, vars));
    case ExprOp::kTan: return ts_tan(eval_taylor(*node.lhs, vars));
    case ExprOp::kExp: return ts_exp(eval_taylor(*node.lhs, vars));
    case ExprOp::kLog: return ts_log(eval_taylor(*node.lhs, vars));
    case ExprOp::kSqrt: return ts_sqrt(eval_taylor(*node.lhs, vars));
    case ExprOp::kAtan: return ts_atan(eval_taylor(*node.lhs, vars));
    case ExprOp::kAbs:
      throw singular_evaluation("abs() has no jet; guards only");
  }
  throw std::logic_error("unhandled expression op");
}

bool Guard::holds(const Vec& x) const {
  if (cmp == Cmp::kAlways) return true;
  double a = eval_value(*lhs, x);
  double b = eval_value(*rhs, x);
  switch (cmp) {
    case Cmp::kLess: return a < b;
    case Cmp::kLessEq: return a <= b;
    case Cmp::kGreater: return a > b;
    case Cmp::kGreaterEq: return a >= b;
    case Cmp::kAlways: return true;
  }
  return true;
}

ExprPtr parse_expression(const std::string& text, int dim, bool allow_abs) {
  Parser p(text, dim, allow_abs);
  return p.parse_full_expression();
}

Guard parse_guard(const std::string& text, int dim) {
  Parser p(text, dim, /*allow_abs=*/true);
  return p.parse_full_guard();
}

std::vector<std::string> expression_identifiers(int dim) {
  std::vector<std::string> names;
  for (int i = 0; i < dim; ++i) names.push_back("x" + std::to_string(i + 1));
  if (dim >= 1) names[0] = "x";
  if (dim >= 2) names[1] = "y";
  if (dim >= 3) names[2] = "z";
  return names;
}

}  // namespace collar
