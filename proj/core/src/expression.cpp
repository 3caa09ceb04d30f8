#include "osgs/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace osgs {

struct Expression::Node {
  enum class Op { Constant, VarX, VarY, Add, Sub, Mul, Div, Pow, Neg, Exp, Cos, Sin };
  Op op = Op::Constant;
  double value = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;

  double eval(double x, double y) const {
    switch (op) {
      case Op::Constant: return value;
      case Op::VarX: return x;
      case Op::VarY: return y;
      case Op::Add: return lhs->eval(x, y) + rhs->eval(x, y);
      case Op::Sub: return lhs->eval(x, y) - rhs->eval(x, y);
      case Op::Mul: return lhs->eval(x, y) * rhs->eval(x, y);
      case Op::Div: return lhs->eval(x, y) / rhs->eval(x, y);
      case Op::Pow: return std::pow(lhs->eval(x, y), rhs->eval(x, y));
      case Op::Neg: return -lhs->eval(x, y);
      case Op::Exp: return std::exp(lhs->eval(x, y));
      case Op::Cos: return std::cos(lhs->eval(x, y));
      case Op::Sin: return std::sin(lhs->eval(x, y));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make(Node::Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->value = value;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr run() {
    NodePtr root = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return root;
  }

 private:
  const std::string& text_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw ExpressionError("expression error at position " + std::to_string(pos_) + ": " + what +
                          " in '" + text_ + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (consume('+'))
        lhs = make(Node::Op::Add, lhs, term());
      else if (consume('-'))
        lhs = make(Node::Op::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (consume('*'))
        lhs = make(Node::Op::Mul, lhs, unary());
      else if (consume('/'))
        lhs = make(Node::Op::Div, lhs, unary());
      else
        return lhs;
    }
  }

  // '^' binds tighter than unary minus: -x^2 parses as -(x^2); the
  // exponent may itself be signed, and chains associate to the right.
  NodePtr unary() {
    if (consume('-')) return make(Node::Op::Neg, unary());
    if (consume('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (consume('^')) return make(Node::Op::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!consume(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected character");
  }

  NodePtr number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<size_t>(end - begin);
    return make(Node::Op::Constant, nullptr, nullptr, v);
  }

  NodePtr identifier() {
    size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "x") return make(Node::Op::VarX);
    if (name == "y") return make(Node::Op::VarY);
    if (name == "pi") return make(Node::Op::Constant, nullptr, nullptr, M_PI);
    Node::Op op;
    if (name == "exp")
      op = Node::Op::Exp;
    else if (name == "cos")
      op = Node::Op::Cos;
    else if (name == "sin")
      op = Node::Op::Sin;
    else
      fail("unknown identifier '" + name + "'");
    if (!consume('(')) fail("expected '(' after function name");
    NodePtr arg = expr();
    if (!consume(')')) fail("expected ')'");
    return make(op, arg);
  }
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = Parser(text).run();
  e.text_ = text;
  return e;
}

double Expression::operator()(double x, double y) const { return root_->eval(x, y); }

}  // namespace osgs
