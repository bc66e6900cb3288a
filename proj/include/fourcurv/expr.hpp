#pragma once

// A tiny arithmetic expression language for scalar fields on a chart:
//   numbers, pi, x1..x4, + - * / ^, unary minus, parentheses,
//   exp(), log(), sin(), cos(), sqrt().

#include <memory>
#include <string>

#include "fourcurv/jet.hpp"

namespace fourcurv {

class Expr {
public:
  /// Throws ParseError with the offending position.
  static Expr parse(const std::string& text);

  Jet2 eval(const std::array<Jet2, 4>& x) const;
  double eval(const std::array<double, 4>& x) const;
  const std::string& text() const { return text_; }

  struct Node;

private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace fourcurv
