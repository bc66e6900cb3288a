#include "fourcurv/expr.hpp"

#include <cctype>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "fourcurv/errors.hpp"

namespace fourcurv {

struct Expr::Node {
  enum Kind { number, variable, neg, add, sub, mul, div, pow, call } kind;
  double value = 0.0;
  int var = 0;
  std::string fn;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodeP = std::shared_ptr<const Expr::Node>;

NodeP make(Expr::Node::Kind k, NodeP a = nullptr, NodeP b = nullptr) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodeP parse() {
    NodeP e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

private:
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression error at position " + std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodeP expr() {
    NodeP l = term();
    for (;;) {
      if (eat('+')) l = make(Expr::Node::add, l, term());
      else if (eat('-')) l = make(Expr::Node::sub, l, term());
      else return l;
    }
  }
  NodeP term() {
    NodeP l = unary();
    for (;;) {
      if (eat('*')) l = make(Expr::Node::mul, l, unary());
      else if (eat('/')) l = make(Expr::Node::div, l, unary());
      else return l;
    }
  }
  NodeP unary() {
    if (eat('-')) return make(Expr::Node::neg, unary());
    if (eat('+')) return unary();
    return power();
  }
  NodeP power() {
    NodeP base = primary();
    if (eat('^')) return make(Expr::Node::pow, base, unary());
    return base;
  }
  NodeP primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (eat('(')) {
      NodeP e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<size_t>(end - begin);
      auto n = std::make_shared<Expr::Node>();
      n->kind = Expr::Node::number;
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id.size() == 2 && id[0] == 'x' && id[1] >= '1' && id[1] <= '4') {
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Node::variable;
        n->var = id[1] - '1';
        return n;
      }
      if (id == "pi") {
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Node::number;
        n->value = std::numbers::pi;
        return n;
      }
      static const std::vector<std::string> fns = {"exp", "log", "sin", "cos", "sqrt"};
      for (const auto& f : fns)
        if (id == f) {
          if (!eat('(')) fail("expected '(' after " + id);
          NodeP arg = expr();
          if (!eat(')')) fail("expected ')'");
          auto n = std::make_shared<Expr::Node>();
          n->kind = Expr::Node::call;
          n->fn = id;
          n->a = arg;
          return n;
        }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

template <class T>
T evaluate(const Expr::Node& n, const std::array<T, 4>& x) {
  using std::cos, std::exp, std::log, std::pow, std::sin, std::sqrt;
  switch (n.kind) {
    case Expr::Node::number: return T(n.value);
    case Expr::Node::variable: return x[n.var];
    case Expr::Node::neg: return -evaluate(*n.a, x);
    case Expr::Node::add: return evaluate(*n.a, x) + evaluate(*n.b, x);
    case Expr::Node::sub: return evaluate(*n.a, x) - evaluate(*n.b, x);
    case Expr::Node::mul: return evaluate(*n.a, x) * evaluate(*n.b, x);
    case Expr::Node::div: return evaluate(*n.a, x) / evaluate(*n.b, x);
    case Expr::Node::pow: return pow(evaluate(*n.a, x), evaluate(*n.b, x));
    case Expr::Node::call: {
      const T a = evaluate(*n.a, x);
      if (n.fn == "exp") return exp(a);
      if (n.fn == "log") return log(a);
      if (n.fn == "sin") return sin(a);
      if (n.fn == "cos") return cos(a);
      return sqrt(a);
    }
  }
  return T(0.0);
}

}  // namespace

Expr Expr::parse(const std::string& text) {
  Expr e;
  e.root_ = Parser(text).parse();
  e.text_ = text;
  return e;
}

Jet2 Expr::eval(const std::array<Jet2, 4>& x) const { return evaluate<Jet2>(*root_, x); }

double Expr::eval(const std::array<double, 4>& x) const { return evaluate<double>(*root_, x); }

}  // namespace fourcurv
