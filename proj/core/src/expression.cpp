#include "llb/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

namespace llb {

ExpressionError::ExpressionError(const std::string& source, std::size_t position, const std::string& message)
    : std::invalid_argument("expression '" + source + "', position " + std::to_string(position) + ": " + message),
      position_(position) {}

struct Expression::Node {
  enum class Kind { number, variable, neg, add, sub, mul, div, pow, call } kind = Kind::number;
  double value = 0.0;
  int variable = 0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(const Vec3& x) const {
    switch (kind) {
      case Kind::number: return value;
      case Kind::variable: return x[static_cast<std::size_t>(variable)];
      case Kind::neg: return -lhs->eval(x);
      case Kind::add: return lhs->eval(x) + rhs->eval(x);
      case Kind::sub: return lhs->eval(x) - rhs->eval(x);
      case Kind::mul: return lhs->eval(x) * rhs->eval(x);
      case Kind::div: return lhs->eval(x) / rhs->eval(x);
      case Kind::pow: return std::pow(lhs->eval(x), rhs->eval(x));
      case Kind::call: return fn(lhs->eval(x));
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

struct Function {
  const char* name;
  double (*fn)(double);
};

const Function functions[] = {
    {"sin", [](double v) { return std::sin(v); }},   {"cos", [](double v) { return std::cos(v); }},
    {"tan", [](double v) { return std::tan(v); }},   {"exp", [](double v) { return std::exp(v); }},
    {"log", [](double v) { return std::log(v); }},   {"sqrt", [](double v) { return std::sqrt(v); }},
    {"abs", [](double v) { return std::abs(v); }},
};

// expr   := term (('+'|'-') term)*
// term   := unary (('*'|'/') unary)*
// unary  := '-' unary | '+' unary | power
// power  := atom ('^' unary)?
// atom   := number | name | name '(' expr ')' | '(' expr ')'
class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr run() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ExpressionError(s_, pos_, msg); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      if (accept('+')) lhs = make(Node::Kind::add, lhs, term());
      else if (accept('-')) lhs = make(Node::Kind::sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (true) {
      if (accept('*')) lhs = make(Node::Kind::mul, lhs, unary());
      else if (accept('/')) lhs = make(Node::Kind::div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Kind::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make(Node::Kind::pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("invalid number");
    pos_ = static_cast<std::size_t>(p - s_.data());
    auto n = std::make_shared<Node>();
    n->value = v;
    return n;
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    auto n = std::make_shared<Node>();
    if (id == "x" || id == "y" || id == "z") {
      n->kind = Node::Kind::variable;
      n->variable = id[0] - 'x';
      return n;
    }
    if (id == "pi") {
      n->value = std::numbers::pi;
      return n;
    }
    for (const auto& f : functions) {
      if (id != f.name) continue;
      if (!accept('(')) fail("expected '(' after " + id);
      n->kind = Node::Kind::call;
      n->fn = f.fn;
      n->lhs = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    pos_ = start;
    fail("unknown name '" + id + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& source) {
  Expression e;
  e.source_ = source;
  e.root_ = Parser(e.source_).run();
  return e;
}

double Expression::operator()(const Vec3& x) const { return root_->eval(x); }

VectorFunction parse_vector_field(const std::array<std::string, 3>& components) {
  std::array<Expression, 3> e{Expression::parse(components[0]), Expression::parse(components[1]),
                              Expression::parse(components[2])};
  return [e](const Vec3& x) { return Vec3{e[0](x), e[1](x), e[2](x)}; };
}

}  // namespace llb
