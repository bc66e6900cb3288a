#include <cmath>
#include <random>

#include "doctest.h"
#include "fourcurv/errors.hpp"
#include "fourcurv/expr.hpp"

using namespace fourcurv;

namespace {

std::array<Jet2, 4> seed(const std::array<double, 4>& x) {
  std::array<Jet2, 4> j;
  for (int i = 0; i < 4; ++i) j[i] = Jet2::variable(x[i], i);
  return j;
}

// Jet derivatives against central differences of the plain evaluation.
void check_jet(const Expr& e, std::array<double, 4> x) {
  const Jet2 j = e.eval(seed(x));
  CHECK(j.v == doctest::Approx(e.eval(x)).epsilon(1e-14));
  const double h = 1e-4;
  for (int a = 0; a < 4; ++a) {
    auto at = [&](double da, int b, double db) {
      auto y = x;
      y[a] += da;
      y[b] += db;
      return e.eval(y);
    };
    const double fd = (at(h, a, 0) - at(-h, a, 0)) / (2 * h);
    CHECK(j.g[a] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    for (int b = 0; b < 4; ++b) {
      const double fdd = (at(h, b, h) - at(h, b, -h) - at(-h, b, h) + at(-h, b, -h)) / (4 * h * h);
      CHECK(j.h[a][b] == doctest::Approx(fdd).epsilon(1e-5).scale(1.0));
    }
  }
}

}  // namespace

TEST_CASE("evaluation") {
  const std::array<double, 4> x{1.0, 2.0, 3.0, 4.0};
  CHECK(Expr::parse("1 + 2 * 3").eval(x) == 7.0);
  CHECK(Expr::parse("(1 + 2) * 3").eval(x) == 9.0);
  CHECK(Expr::parse("x1 + x2 * x3 - x4 / 2").eval(x) == 5.0);
  CHECK(Expr::parse("2 ^ 3 ^ 2").eval(x) == 512.0);  // right associative
  CHECK(Expr::parse("-x2 ^ 2").eval(x) == -4.0);
  CHECK(Expr::parse("exp(0) + log(1) + cos(0) + sin(0) + sqrt(x3 * 3)").eval(x) == 5.0);
  CHECK(Expr::parse("pi").eval(x) == doctest::Approx(M_PI));
  CHECK(Expr::parse("1.5e-1 * 2").eval(x) == doctest::Approx(0.3));
  CHECK(Expr::parse("  0.1*exp(-(x1^2+x2^2)) ").eval(x) == doctest::Approx(0.1 * std::exp(-5.0)));
  CHECK(Expr::parse("x1").text() == "x1");
}

TEST_CASE("parse errors carry a position") {
  for (const char* bad : {"", "1 +", "x5", "foo(1)", "(1 + 2", "1 2", "exp 1", "*3", "1 + )"}) {
    try {
      Expr::parse(bad);
      FAIL("accepted '" << bad << "'");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
  }
}

TEST_CASE("jets match finite differences") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (const char* text : {"x1 * x2 + x3 ^ 2 - x4", "exp(-(x1^2 + x2^2 + x3^2 + x4^2))", "0.1 * x1",
                           "sin(x1) * cos(x2 * x3) + sqrt(2 + x4)", "log(3 + x1 * x2) / (2 + x3)",
                           "(1 + x1^2) ^ (0.5 + 0.1 * x2)", "-x1 * exp(x2) ^ 2"}) {
    const Expr e = Expr::parse(text);
    for (int n = 0; n < 5; ++n) check_jet(e, {u(rng), u(rng), u(rng), u(rng)});
  }
}

TEST_CASE("jet arithmetic") {
  const Jet2 x = Jet2::variable(2.0, 0), y = Jet2::variable(3.0, 1);
  const Jet2 p = x * y;
  CHECK(p.v == 6.0);
  CHECK(p.g[0] == 3.0);
  CHECK(p.g[1] == 2.0);
  CHECK(p.h[0][1] == 1.0);
  CHECK(p.h[1][0] == 1.0);
  CHECK(p.h[0][0] == 0.0);
  const Jet2 q = x / y;
  CHECK(q.g[1] == doctest::Approx(-2.0 / 9.0));
  CHECK(q.h[1][1] == doctest::Approx(4.0 / 27.0));
  CHECK(Jet2(5.0).is_constant());
  CHECK_FALSE(x.is_constant());
  const Jet2 s = sqrt(x * x);
  CHECK(s.v == doctest::Approx(2.0));
  CHECK(s.g[0] == doctest::Approx(1.0));
  CHECK(std::abs(s.h[0][0]) < 1e-15);
}
