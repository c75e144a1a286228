#include "rmap/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace rmap {

namespace {

constexpr double kDivisorFloor = 1e-300;

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim());
  r.value = a.value + b.value;
  r.grad = a.grad + b.grad;
  r.hess = a.hess + b.hess;
  return r;
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim());
  r.value = a.value - b.value;
  r.grad = a.grad - b.grad;
  r.hess = a.hess - b.hess;
  return r;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  const int n = a.dim();
  Jet2 r(n);
  r.value = a.value * b.value;
  r.grad = a.value * b.grad + b.value * a.grad;
  // computed on the upper triangle and mirrored, so Hessians stay
  // symmetric bit for bit
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = a.value * b.hess(i, j) + a.grad[i] * b.grad[j] +
                       b.grad[i] * a.grad[j] + b.value * a.hess(i, j);
      r.hess(i, j) = v;
      r.hess(j, i) = v;
    }
  return r;
}

namespace {

// f(u) with given f', f'' composed with an inner jet by the chain rule.
Jet2 chain(const Jet2& u, double f, double df, double ddf) {
  const int n = u.dim();
  Jet2 r(n);
  r.value = f;
  r.grad = df * u.grad;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = ddf * u.grad[i] * u.grad[j] + df * u.hess(i, j);
      r.hess(i, j) = v;
      r.hess(j, i) = v;
    }
  return r;
}

}  // namespace

Jet2 operator/(const Jet2& a, const Jet2& b) {
  if (std::abs(b.value) < kDivisorFloor)
    throw DomainError("division by (near-)zero", format_double(b.value));
  const double inv = 1.0 / b.value;
  return a * chain(b, inv, -inv * inv, 2.0 * inv * inv * inv);
}

struct Expression::Node {
  enum class Kind { Constant, Coordinate, Unary, Binary } kind;
  double value = 0.0;      // Constant
  int coord = -1;          // Coordinate
  UnaryFn fn{};            // Unary
  BinaryOp op{};           // Binary
  std::shared_ptr<const Node> a, b;
};

Expression Expression::constant(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Constant;
  n->value = v;
  return Expression(std::move(n));
}

Expression Expression::coordinate(int index) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Coordinate;
  n->coord = index;
  return Expression(std::move(n));
}

Expression Expression::unary(UnaryFn fn, Expression arg) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Unary;
  n->fn = fn;
  n->a = std::move(arg.root_);
  return Expression(std::move(n));
}

Expression Expression::binary(BinaryOp op, Expression lhs, Expression rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Binary;
  n->op = op;
  n->a = std::move(lhs.root_);
  n->b = std::move(rhs.root_);
  return Expression(std::move(n));
}

namespace {

std::string print_node_name(UnaryFn fn) {
  switch (fn) {
    case UnaryFn::Neg: return "-";
    case UnaryFn::Sin: return "sin";
    case UnaryFn::Cos: return "cos";
    case UnaryFn::Exp: return "exp";
    case UnaryFn::Log: return "log";
    case UnaryFn::Sqrt: return "sqrt";
    case UnaryFn::Tanh: return "tanh";
  }
  return "?";
}

std::string subexpr_text(const Expression::Node* n);

double eval_value(const Expression::Node* n, const Eigen::VectorXd& p) {
  using K = Expression::Node::Kind;
  switch (n->kind) {
    case K::Constant: return n->value;
    case K::Coordinate:
      if (n->coord >= p.size())
        throw DomainError("coordinate index out of range for point", subexpr_text(n));
      return p[n->coord];
    case K::Unary: {
      const double u = eval_value(n->a.get(), p);
      switch (n->fn) {
        case UnaryFn::Neg: return -u;
        case UnaryFn::Sin: return std::sin(u);
        case UnaryFn::Cos: return std::cos(u);
        case UnaryFn::Exp: return std::exp(u);
        case UnaryFn::Log:
          if (u <= 0.0) throw DomainError("log of nonpositive value", subexpr_text(n));
          return std::log(u);
        case UnaryFn::Sqrt:
          if (u < 0.0) throw DomainError("sqrt of negative value", subexpr_text(n));
          return std::sqrt(u);
        case UnaryFn::Tanh: return std::tanh(u);
      }
      return 0.0;
    }
    case K::Binary: {
      const double a = eval_value(n->a.get(), p);
      const double b = eval_value(n->b.get(), p);
      switch (n->op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div:
          if (std::abs(b) < kDivisorFloor)
            throw DomainError("division by (near-)zero", subexpr_text(n));
          return a / b;
        case BinaryOp::Pow: {
          const double c = b;  // parser guarantees a constant exponent
          if (a < 0.0 && c != std::floor(c))
            throw DomainError("non-integer power of negative base", subexpr_text(n));
          if (a == 0.0 && c < 0.0)
            throw DomainError("negative power of zero", subexpr_text(n));
          return std::pow(a, c);
        }
      }
      return 0.0;
    }
  }
  return 0.0;
}

Jet2 eval_jet(const Expression::Node* n, const Eigen::VectorXd& p) {
  using K = Expression::Node::Kind;
  const int dim = static_cast<int>(p.size());
  switch (n->kind) {
    case K::Constant: return Jet2::constant(n->value, dim);
    case K::Coordinate:
      if (n->coord >= dim)
        throw DomainError("coordinate index out of range for point", subexpr_text(n));
      return Jet2::coordinate(p[n->coord], n->coord, dim);
    case K::Unary: {
      Jet2 u = eval_jet(n->a.get(), p);
      const double v = u.value;
      switch (n->fn) {
        case UnaryFn::Neg: return chain(u, -v, -1.0, 0.0);
        case UnaryFn::Sin: return chain(u, std::sin(v), std::cos(v), -std::sin(v));
        case UnaryFn::Cos: return chain(u, std::cos(v), -std::sin(v), -std::cos(v));
        case UnaryFn::Exp: {
          const double e = std::exp(v);
          return chain(u, e, e, e);
        }
        case UnaryFn::Log:
          if (v <= 0.0) throw DomainError("log of nonpositive value", subexpr_text(n));
          return chain(u, std::log(v), 1.0 / v, -1.0 / (v * v));
        case UnaryFn::Sqrt: {
          if (v < 0.0) throw DomainError("sqrt of negative value", subexpr_text(n));
          if (v == 0.0) throw DomainError("sqrt derivative at zero", subexpr_text(n));
          const double s = std::sqrt(v);
          return chain(u, s, 0.5 / s, -0.25 / (s * v));
        }
        case UnaryFn::Tanh: {
          const double t = std::tanh(v);
          const double sech2 = 1.0 - t * t;
          return chain(u, t, sech2, -2.0 * t * sech2);
        }
      }
      return Jet2(dim);
    }
    case K::Binary: {
      switch (n->op) {
        case BinaryOp::Add: return eval_jet(n->a.get(), p) + eval_jet(n->b.get(), p);
        case BinaryOp::Sub: return eval_jet(n->a.get(), p) - eval_jet(n->b.get(), p);
        case BinaryOp::Mul: return eval_jet(n->a.get(), p) * eval_jet(n->b.get(), p);
        case BinaryOp::Div: {
          Jet2 a = eval_jet(n->a.get(), p);
          Jet2 b = eval_jet(n->b.get(), p);
          if (std::abs(b.value) < kDivisorFloor)
            throw DomainError("division by (near-)zero", subexpr_text(n));
          return a / b;
        }
        case BinaryOp::Pow: {
          Jet2 u = eval_jet(n->a.get(), p);
          const double c = n->b->value;
          const double v = u.value;
          if (v < 0.0 && c != std::floor(c))
            throw DomainError("non-integer power of negative base", subexpr_text(n));
          if (v == 0.0 && c < 2.0 && c != 0.0 && c != 1.0)
            throw DomainError("power derivative singular at zero base", subexpr_text(n));
          const double f = std::pow(v, c);
          const double df = c == 0.0 ? 0.0 : c * std::pow(v, c - 1.0);
          const double ddf = (c == 0.0 || c == 1.0) ? 0.0 : c * (c - 1.0) * std::pow(v, c - 2.0);
          return chain(u, f, df, ddf);
        }
      }
      return Jet2(dim);
    }
  }
  return Jet2(dim);
}

int precedence(const Expression::Node* n) {
  using K = Expression::Node::Kind;
  if (n->kind == K::Binary) {
    switch (n->op) {
      case BinaryOp::Add:
      case BinaryOp::Sub: return 1;
      case BinaryOp::Mul:
      case BinaryOp::Div: return 2;
      case BinaryOp::Pow: return 4;
    }
  }
  if (n->kind == K::Unary && n->fn == UnaryFn::Neg) return 3;
  return 5;
}

void print_node(const Expression::Node* n, const std::vector<std::string>* coords,
                std::string& out) {
  using K = Expression::Node::Kind;
  auto child = [&](const Expression::Node* c, int min_prec) {
    if (precedence(c) < min_prec) {
      out += '(';
      print_node(c, coords, out);
      out += ')';
    } else {
      print_node(c, coords, out);
    }
  };
  switch (n->kind) {
    case K::Constant: {
      if (n->value < 0.0) {
        out += '(' + format_double(n->value) + ')';
      } else {
        out += format_double(n->value);
      }
      return;
    }
    case K::Coordinate:
      if (coords && n->coord < static_cast<int>(coords->size())) {
        out += (*coords)[n->coord];
      } else {
        out += "x#" + std::to_string(n->coord + 1);
      }
      return;
    case K::Unary:
      if (n->fn == UnaryFn::Neg) {
        out += '-';
        child(n->a.get(), 3);
      } else {
        out += print_node_name(n->fn);
        out += '(';
        print_node(n->a.get(), coords, out);
        out += ')';
      }
      return;
    case K::Binary: {
      const int prec = precedence(n);
      switch (n->op) {
        case BinaryOp::Add:
          child(n->a.get(), prec);
          out += " + ";
          child(n->b.get(), prec);
          return;
        case BinaryOp::Sub:
          child(n->a.get(), prec);
          out += " - ";
          child(n->b.get(), prec + 1);
          return;
        case BinaryOp::Mul:
          child(n->a.get(), prec);
          out += "*";
          child(n->b.get(), prec);
          return;
        case BinaryOp::Div:
          child(n->a.get(), prec);
          out += "/";
          child(n->b.get(), prec + 1);
          return;
        case BinaryOp::Pow:
          child(n->a.get(), prec + 1);
          out += "^";
          child(n->b.get(), prec + 1);
          return;
      }
    }
  }
}

std::string subexpr_text(const Expression::Node* n) {
  std::string s;
  print_node(n, nullptr, s);
  return s;
}

bool nodes_equal(const Expression::Node* a, const Expression::Node* b) {
  using K = Expression::Node::Kind;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case K::Constant:
      return a->value == b->value ||
             (std::isnan(a->value) && std::isnan(b->value));
    case K::Coordinate: return a->coord == b->coord;
    case K::Unary: return a->fn == b->fn && nodes_equal(a->a.get(), b->a.get());
    case K::Binary:
      return a->op == b->op && nodes_equal(a->a.get(), b->a.get()) &&
             nodes_equal(a->b.get(), b->b.get());
  }
  return false;
}

int max_coord(const Expression::Node* n) {
  using K = Expression::Node::Kind;
  switch (n->kind) {
    case K::Constant: return -1;
    case K::Coordinate: return n->coord;
    case K::Unary: return max_coord(n->a.get());
    case K::Binary: return std::max(max_coord(n->a.get()), max_coord(n->b.get()));
  }
  return -1;
}

}  // namespace

double Expression::value_at(const Eigen::VectorXd& p) const {
  return eval_value(root_.get(), p);
}

Jet2 Expression::jet2_at(const Eigen::VectorXd& p) const {
  return eval_jet(root_.get(), p);
}

std::string Expression::print(const std::vector<std::string>& coords) const {
  std::string out;
  print_node(root_.get(), &coords, out);
  return out;
}

bool Expression::structurally_equal(const Expression& other) const {
  return nodes_equal(root_.get(), other.root_.get());
}

int Expression::max_coord_index() const { return max_coord(root_.get()); }

bool Expression::is_constant_zero() const {
  return root_ && root_->kind == Node::Kind::Constant && root_->value == 0.0;
}

bool Expression::is_constant() const {
  return root_ && root_->kind == Node::Kind::Constant;
}

double Expression::constant_value() const {
  if (!is_constant()) throw std::logic_error("expression is not a constant");
  return root_->value;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;
  const std::vector<std::string>& coords;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool consume(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }

  Expression parse_expr() {
    Expression lhs = parse_term();
    while (true) {
      if (consume('+')) {
        lhs = Expression::binary(BinaryOp::Add, std::move(lhs), parse_term());
      } else if (consume('-')) {
        lhs = Expression::binary(BinaryOp::Sub, std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expression parse_term() {
    Expression lhs = parse_unary();
    while (true) {
      if (consume('*')) {
        lhs = Expression::binary(BinaryOp::Mul, std::move(lhs), parse_unary());
      } else if (consume('/')) {
        lhs = Expression::binary(BinaryOp::Div, std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expression parse_unary() {
    if (consume('-')) {
      Expression inner = parse_unary();
      // fold a minus applied directly to a numeric literal, so printed
      // negative constants parse back to the identical tree
      if (inner.is_constant()) return Expression::constant(-inner.constant_value());
      return Expression::unary(UnaryFn::Neg, std::move(inner));
    }
    return parse_power();
  }

  Expression parse_power() {
    Expression base = parse_primary();
    if (consume('^')) {
      const std::size_t at = pos;
      double c = parse_constant_exponent();
      (void)at;
      return Expression::binary(BinaryOp::Pow, std::move(base), Expression::constant(c));
    }
    return base;
  }

  // The exponent of ^ must fold to a constant: a number, pi, e, a
  // negation of one of those, or a parenthesized constant exponent.
  double parse_constant_exponent() {
    skip_ws();
    if (consume('-')) return -parse_constant_exponent();
    if (consume('(')) {
      double c = parse_constant_exponent();
      if (!consume(')')) fail("expected ')' after exponent");
      return c;
    }
    if (pos < text.size() &&
        (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
      return parse_number();
    }
    std::string id = parse_identifier();
    if (id == "pi") return std::numbers::pi;
    if (id == "e") return std::numbers::e;
    fail("pow exponent must be a constant");
  }

  double parse_number() {
    skip_ws();
    const char* begin = text.data() + pos;
    const char* end = text.data() + text.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc()) fail("malformed number");
    // from_chars accepts "1e" prefixes only when the exponent parses;
    // it stops at the right place for our grammar.
    pos += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  std::string parse_identifier() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      ++pos;
    }
    if (pos == start) fail("expected identifier or number");
    return std::string(text.substr(start, pos - start));
  }

  Expression parse_primary() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of expression");
    const char c = text[pos];
    if (c == '(') {
      ++pos;
      Expression e = parse_expr();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return Expression::constant(parse_number());
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t id_pos = pos;
      std::string id = parse_identifier();
      static const std::pair<const char*, UnaryFn> kFns[] = {
          {"sin", UnaryFn::Sin}, {"cos", UnaryFn::Cos},   {"exp", UnaryFn::Exp},
          {"log", UnaryFn::Log}, {"sqrt", UnaryFn::Sqrt}, {"tanh", UnaryFn::Tanh},
      };
      for (const auto& [name, fn] : kFns) {
        if (id == name) {
          if (!consume('(')) fail("expected '(' after function " + id);
          Expression arg = parse_expr();
          if (peek() == ',') fail("function " + id + " takes exactly one argument");
          if (!consume(')')) fail("expected ')' after argument of " + id);
          return Expression::unary(fn, std::move(arg));
        }
      }
      if (id == "pi") return Expression::constant(std::numbers::pi);
      if (id == "e") return Expression::constant(std::numbers::e);
      for (std::size_t k = 0; k < coords.size(); ++k) {
        if (coords[k] == id) return Expression::coordinate(static_cast<int>(k));
      }
      throw ParseError("unknown identifier '" + id + "'", id_pos);
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

Expression parse_expression(std::string_view text, const std::vector<std::string>& coords) {
  Parser parser{text, 0, coords};
  if (parser.eof()) throw ParseError("empty expression", 0);
  Expression e = parser.parse_expr();
  if (!parser.eof()) parser.fail("trailing input after expression");
  return e;
}

}  // namespace rmap
