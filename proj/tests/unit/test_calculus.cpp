#include <cmath>

#include "doctest.h"
#include "fourcurv/calculus.hpp"
#include "fourcurv/errors.hpp"
#include "fourcurv/models.hpp"
#include "oracles.hpp"

using namespace fourcurv;

namespace {

const Box kBox{Vec4::Constant(-1.0), Vec4::Constant(1.0)};

// f = exp(x1 + 2 x2) sin(x3) + x4^3 with its exact partials
double f_val(const Vec4& x) { return std::exp(x[0] + 2 * x[1]) * std::sin(x[2]) + x[3] * x[3] * x[3]; }
Vec4 f_grad(const Vec4& x) {
  const double e = std::exp(x[0] + 2 * x[1]);
  return Vec4(e * std::sin(x[2]), 2 * e * std::sin(x[2]), e * std::cos(x[2]), 3 * x[3] * x[3]);
}
Mat4 f_hess(const Vec4& x) {
  const double e = std::exp(x[0] + 2 * x[1]), s = std::sin(x[2]), c = std::cos(x[2]);
  Mat4 h = Mat4::Zero();
  h(0, 0) = e * s;
  h(0, 1) = h(1, 0) = 2 * e * s;
  h(1, 1) = 4 * e * s;
  h(0, 2) = h(2, 0) = e * c;
  h(1, 2) = h(2, 1) = 2 * e * c;
  h(2, 2) = -e * s;
  h(3, 3) = 6 * x[3];
  return h;
}

double fd_error(const Vec4& x, DiffConfig cfg) {
  const Partials p = differentiate([](const Vec4& y) { return std::vector<double>{f_val(y)}; }, x, kBox, cfg);
  double err = 0.0;
  const Vec4 g = f_grad(x);
  const Mat4 h = f_hess(x);
  for (int a = 0; a < 4; ++a) {
    err = std::max(err, std::abs(p.d[0][a] - g[a]));
    for (int b = 0; b < 4; ++b) err = std::max(err, std::abs(p.dd[0][4 * a + b] - h(a, b)));
  }
  return err;
}

std::vector<double> coords_of(const Tensor4& t) { return flatten(t); }

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(check_config({}));
  CHECK_THROWS_AS(check_config({0.0, 4, 0}), InvalidInput);
  CHECK_THROWS_AS(check_config({-1.0, 4, 0}), InvalidInput);
  CHECK_THROWS_AS(check_config({0.1, 3, 0}), InvalidInput);
  CHECK_THROWS_AS(check_config({0.1, 2, 3}), InvalidInput);
}

TEST_CASE("central differences converge at the stencil order") {
  const Vec4 x(0.1, -0.2, 0.3, 0.25);
  for (int order : {2, 4}) {
    const double e1 = fd_error(x, {0.04, order, 0}), e2 = fd_error(x, {0.02, order, 0});
    const double observed = std::log2(e1 / e2);
    CHECK(observed == doctest::Approx(order).epsilon(0.1));
  }
  // Richardson removes the leading term
  CHECK(fd_error(x, {0.04, 2, 1}) < 0.1 * fd_error(x, {0.04, 2, 0}));
  CHECK(fd_error(x, {0.04, 4, 1}) < 0.1 * fd_error(x, {0.04, 4, 0}));
  // quadratics are differentiated exactly by either stencil
  const auto quad = [](const Vec4& y) { return std::vector<double>{y[0] * y[1] + 3 * y[2] * y[2] - y[3]}; };
  const Partials q = differentiate(quad, x, kBox, {0.1, 2, 0});
  CHECK(q.d[0][0] == doctest::Approx(-0.2));
  CHECK(q.dd[0][1] == doctest::Approx(1.0));
  CHECK(q.dd[0][4 * 2 + 2] == doctest::Approx(6.0));
  CHECK(std::abs(q.dd[0][4 * 3 + 3]) < 1e-12);
}

TEST_CASE("stencils stay inside the domain") {
  const auto f = [](const Vec4& y) { return std::vector<double>{y[0]}; };
  CHECK_THROWS_AS(differentiate(f, Vec4(0.95, 0, 0, 0), kBox, {0.05, 2, 0}), StencilOutOfDomain);
  CHECK_NOTHROW(differentiate(f, Vec4(0.85, 0, 0, 0), kBox, {0.05, 2, 0}));
  // the fourth-order stencil reaches 2h, Richardson only shrinks it
  CHECK_THROWS_AS(differentiate(f, Vec4(0.85, 0, 0, 0), kBox, {0.1, 4, 1}), StencilOutOfDomain);
}

TEST_CASE("exact scalar Hessian agrees with the second covariant derivative") {
  const ChartPtr s4 = sphere_chart();
  const ScalarFieldPtr f = expression_field("x1 * x2 + exp(0.3 * x3) - x4^2");
  const Vec4 x(0.2, -0.1, 0.3, 0.1);
  const LocalGeometry geo = local_geometry(*s4, x);
  const ScalarJet j = scalar_jet(*f, geo);
  const Partials p = differentiate([&](const Vec4& y) { return std::vector<double>{f->eval(seed(y)).v}; }, x,
                                   s4->domain(), {0.02, 4, 1});
  const std::vector<double> h = nabla2(0, p, geo);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) CHECK(h[4 * a + b] == doctest::Approx(j.hess(a, b)).scale(1.0).epsilon(1e-8));
  // hess = d2 f - Gamma^c_ab d_c f
  const Jet2 fj = f->eval(seed(x));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double want = fj.h[a][b];
      for (int c = 0; c < 4; ++c) want -= geo.gamma[c](a, b) * fj.g[c];
      CHECK(j.hess(a, b) == doctest::Approx(want).epsilon(1e-12));
    }
  CHECK(j.value == doctest::Approx(fj.v));
}

TEST_CASE("flat Laplacian") {
  const ChartPtr flat = flat_chart();
  const Vec4 x(0.3, 0.1, -0.2, 0.4);
  const LocalGeometry geo = local_geometry(*flat, x);
  const Partials p =
      differentiate([](const Vec4& y) { return std::vector<double>{y.squaredNorm()}; }, x, flat->domain(), {0.1, 2, 0});
  CHECK(laplacian(0, p, geo)[0] == doctest::Approx(8.0));
  const std::vector<double> d = nabla(0, p, geo);
  for (int a = 0; a < 4; ++a) CHECK(d[a] == doctest::Approx(2 * x[a]));
}

TEST_CASE("the metric is parallel") {
  const ChartPtr s4 = sphere_chart();
  const Vec4 x(0.2, 0.3, -0.1, 0.15);
  const LocalGeometry geo = local_geometry(*s4, x);
  const Partials p = differentiate([&](const Vec4& y) { return flatten(s4->metric_value(y)); }, x, s4->domain(),
                                   {0.02, 4, 1});
  const std::vector<double> ng = nabla(2, p, geo);
  for (double v : ng) CHECK(std::abs(v) < 1e-9);
  for (double v : nabla2(2, p, geo)) CHECK(std::abs(v) < 1e-7);
}

TEST_CASE("curvature is parallel on symmetric spaces") {
  for (const ChartPtr& c : {sphere_chart(), fubini_study_chart(), sphere_product_chart(1.0, 1.5)}) {
    const Vec4 x(0.2, -0.15, 0.1, 0.25);
    const LocalGeometry geo = local_geometry(*c, x);
    // the residual is pure discretization error, so it falls at the stencil order
    std::vector<double> worst;
    for (double h : {0.04, 0.02}) {
      const Partials p = differentiate([&](const Vec4& y) { return coords_of(local_geometry(*c, y).riemann); }, x,
                                       c->domain(), {h, 4, 0}, false);
      double w = 0.0;
      for (double v : nabla(4, p, geo)) w = std::max(w, std::abs(v));
      worst.push_back(w);
    }
    CHECK(worst[1] < 1e-3 * geo.riemann.max_abs());
    CHECK(std::log2(worst[0] / worst[1]) > 3.5);
  }
  // Schwarzschild-de Sitter is not locally symmetric
  const ChartPtr sds = schwarzschild_de_sitter_chart();
  const Vec4 x(0.0, 1.0, 1.5, 0.0);
  const LocalGeometry geo = local_geometry(*sds, x);
  const Partials p = differentiate([&](const Vec4& y) { return coords_of(local_geometry(*sds, y).riemann); }, x,
                                   sds->domain(), {0.02, 4, 0}, false);
  double worst = 0.0;
  for (double v : nabla(4, p, geo)) worst = std::max(worst, std::abs(v));
  CHECK(worst > 1e-2);
}

TEST_CASE("Ricci identity for a one-form") {
  // nabla_q nabla_p w_i - nabla_p nabla_q w_i = -g^am w_m R_aiqp
  const ChartPtr c = fubini_study_chart();
  const Vec4 x(0.1, 0.2, -0.15, 0.05);
  const LocalGeometry geo = local_geometry(*c, x);
  const auto w = [](const Vec4& y) {
    return std::vector<double>{std::sin(y[1]) + y[2], y[0] * y[3], std::exp(0.5 * y[0]), y[1] * y[1] - y[2]};
  };
  const Partials p = differentiate(w, x, c->domain(), {0.02, 4, 1});
  const std::vector<double> n2 = nabla2(1, p, geo);
  const Vec4 wv(p.v[0], p.v[1], p.v[2], p.v[3]);
  const Vec4 wup = geo.ginv * wv;
  for (int q = 0; q < 4; ++q)
    for (int pp = 0; pp < 4; ++pp)
      for (int i = 0; i < 4; ++i) {
        const double lhs = n2[(q * 4 + pp) * 4 + i] - n2[(pp * 4 + q) * 4 + i];
        double rhs = 0.0;
        for (int a = 0; a < 4; ++a) rhs -= wup[a] * geo.riemann(a, i, q, pp);
        CHECK(lhs == doctest::Approx(rhs).scale(1.0).epsilon(1e-7));
      }
}

TEST_CASE("frame changes") {
  TensorSampler s(1);
  const Mat4 q = s.rotation();
  const Tensor4 t = s.general().tensor();
  CHECK(oracle::max_diff(to_frame(t, q), oracle::pull_back(t, q)) < 1e-13);
  const Mat4 m = s.traceless_sym().cwiseAbs().sum() * Mat4::Identity() + q;
  CHECK((to_frame(m, q) - q.transpose() * m * q).cwiseAbs().maxCoeff() < 1e-13);
  const Vec4 v = s.vector();
  CHECK((to_frame(v, q) - q.transpose() * v).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(oracle::max_diff(unflatten(flatten(t).data()), t) == 0.0);
}
