#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace osgs {

struct ExpressionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parsed arithmetic expression in the variables x and y.
/// Grammar: + - * / ^ (right-assoc), unary minus, parentheses,
/// exp/cos/sin, numeric literals and pi.
class Expression {
 public:
  static Expression parse(const std::string& text);  // throws ExpressionError

  double operator()(double x, double y) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace osgs
