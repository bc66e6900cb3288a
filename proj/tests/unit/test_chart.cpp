#include <cmath>
#include <random>

#include "doctest.h"
#include "fourcurv/calculus.hpp"
#include "fourcurv/chart.hpp"
#include "fourcurv/errors.hpp"
#include "fourcurv/models.hpp"
#include "fd_oracles.hpp"
#include "oracles.hpp"

using namespace fourcurv;

namespace {

// Frame components of the coordinate tensor, frame columns orthonormal for g.
Tensor4 in_frame(const Tensor4& t, const Mat4& f) { return oracle::pull_back(t, f); }

Mat4 gram_schmidt(const Mat4& g) {
  Mat4 f = Mat4::Identity();
  for (int i = 0; i < 4; ++i) {
    Vec4 v = f.col(i);
    for (int j = 0; j < i; ++j) v -= (f.col(j).dot(g * v)) * f.col(j);
    f.col(i) = v / std::sqrt(v.dot(g * v));
  }
  return f;
}

Vec4 random_point(std::mt19937_64& rng, const Box& b, double margin = 0.2) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec4 x;
  for (int i = 0; i < 4; ++i) {
    const double w = b.hi[i] - b.lo[i];
    x[i] = b.lo[i] + w * (margin + (1 - 2 * margin) * u(rng));
  }
  return x;
}

}  // namespace

TEST_CASE("stereographic sphere") {
  const ChartPtr s = sphere_chart();
  CHECK((s->metric_value(Vec4::Zero()) - 4 * Mat4::Identity()).cwiseAbs().maxCoeff() == 0.0);
  const Vec4 x(0.3, -0.2, 0.1, 0.5);
  const double d = 1 + x.squaredNorm();
  CHECK((s->metric_value(x) - 4 / (d * d) * Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((sphere_chart(2.0)->metric_value(x) - 16 / (d * d) * Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("jet metric derivatives match differences of the values") {
  std::mt19937_64 rng(1);
  for (const ChartPtr& c : {sphere_chart(), fubini_study_chart(), sphere_product_chart(1.0, 1.5),
                            schwarzschild_de_sitter_chart(), hyperbolic_chart()}) {
    const Vec4 x = random_point(rng, c->domain());
    const MetricJet m = c->metric_at(x);
    const double h = 1e-4;
    for (int k = 0; k < 4; ++k) {
      Vec4 e = Vec4::Zero();
      e[k] = h;
      const Mat4 fd = (c->metric_value(x + e) - c->metric_value(x - e)) / (2 * h);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) CHECK(m[a][b].g[k] == doctest::Approx(fd(a, b)).scale(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("curvature of the model charts") {
  std::mt19937_64 rng(2);
  struct Case {
    ChartPtr chart;
    CurvatureTensor model;
  };
  const std::vector<Case> cases = {
      {flat_chart(), model_tensor({"R4", {}})},
      {sphere_chart(), model_tensor({"S4", {}})},
      {hyperbolic_chart(), model_tensor({"H4", {}})},
      {sphere_product_chart(1.0, 1.0), model_tensor({"S2xS2", {}})},
      {sphere_product_chart(1.0, std::sqrt(2.0)), model_tensor({"S2axS2b", {{"a", 1.0}, {"b", std::sqrt(2.0)}}})},
  };
  for (const Case& c : cases) {
    for (int n = 0; n < 3; ++n) {
      const Vec4 x = random_point(rng, c.chart->domain());
      const LocalGeometry geo = local_geometry(*c.chart, x);
      const Mat4 f = gram_schmidt(geo.g);
      const Tensor4 lib = in_frame(geo.riemann, f);
      const Tensor4 fd = in_frame(oracle::riemann_fd(*c.chart, x), f);
      CHECK(oracle::max_diff(lib, fd) < 1e-6);
      // the product charts keep the factors on the coordinate planes, so the
      // frame components are the model components
      CHECK(oracle::max_diff(lib, c.model.tensor()) < 1e-10);
      CHECK(geo.scalar == doctest::Approx(oracle::ricci(c.model.tensor()).trace()).scale(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("sectional curvature on the sphere chart at random planes") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  const ChartPtr s = sphere_chart();
  for (int n = 0; n < 5; ++n) {
    const Vec4 x = random_point(rng, s->domain());
    const Tensor4 r = oracle::riemann_fd(*s, x);
    const Mat4 g = s->metric_value(x);
    const Vec4 u(nd(rng), nd(rng), nd(rng), nd(rng)), v(nd(rng), nd(rng), nd(rng), nd(rng));
    double num = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) num += r(i, j, k, l) * u[i] * v[j] * u[k] * v[l];
    const double den = u.dot(g * u) * v.dot(g * v) - std::pow(u.dot(g * v), 2);
    CHECK(num / den == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("Fubini-Study chart is CP2") {
  std::mt19937_64 rng(4);
  const ChartPtr fs = fubini_study_chart();
  const CurvatureTensor cp2 = model_tensor({"CP2", {}});
  for (int n = 0; n < 5; ++n) {
    const Vec4 x = random_point(rng, fs->domain(), 0.35);
    const LocalGeometry geo = local_geometry(*fs, x);
    CHECK(oracle::max_diff(geo.riemann, oracle::riemann_fd(*fs, x)) < 1e-6 * geo.riemann.max_abs());
    const CurvatureTensor t = CurvatureTensor::validate(to_frame(geo.riemann, geo.frame), 1e-10);
    CHECK(geo.scalar == doctest::Approx(24.0).epsilon(1e-10));
    const auto [hp, hm] = weyl_halves(t);
    const auto [cp, cm] = weyl_halves(cp2);
    // orientation of the complex chart decides which half carries the Kahler spectrum
    const bool plus = (hp.eigenvalues - cp.eigenvalues).norm() < 1e-9 && hm.norm_sq < 1e-18 * 576;
    const bool minus = (hm.eigenvalues - cp.eigenvalues).norm() < 1e-9 && hp.norm_sq < 1e-18 * 576;
    CHECK((plus || minus));
    const Mat4 ric = to_frame(geo.ricci, geo.frame);
    CHECK((ric - 6 * Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("Schwarzschild-de Sitter is Einstein with varying Weyl") {
  const ChartPtr c = schwarzschild_de_sitter_chart(0.1, 0.3);
  std::mt19937_64 rng(5);
  double wmin = 1e300, wmax = 0.0;
  for (int n = 0; n < 6; ++n) {
    const Vec4 x = random_point(rng, c->domain());
    const LocalGeometry geo = local_geometry(*c, x);
    CHECK((to_frame(geo.ricci, geo.frame) - 0.3 * Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(oracle::max_diff(geo.riemann, oracle::riemann_fd(*c, x)) < 1e-6 * geo.riemann.max_abs());
    const double w = oracle::inner(to_frame(geo.weyl, geo.frame), to_frame(geo.weyl, geo.frame));
    wmin = std::min(wmin, w);
    wmax = std::max(wmax, w);
  }
  CHECK(wmax > 1.5 * wmin);
}

TEST_CASE("conformal and linear charts") {
  const ChartPtr flat = flat_chart();
  const ChartPtr conf = conformal_chart(flat, expression_field("0.1*x1"));
  const Vec4 x(0.2, 0.1, -0.3, 0.4);
  CHECK((conf->metric_value(x) - std::exp(0.02) * Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(local_geometry(*conf, x).riemann.max_abs() > 1e-6);  // e^f delta is curved unless f is constant
  CHECK(local_geometry(*conformal_chart(flat, constant_field(0.7)), x).riemann.max_abs() < 1e-14);

  TensorSampler s(6);
  Mat4 a = s.rotation() * Vec4(1.0, 0.8, 1.2, 0.9).asDiagonal();
  const Vec4 shift(0.1, 0.0, -0.1, 0.05);
  const ChartPtr s4 = sphere_chart();
  const ChartPtr lin = linear_chart(s4, a, shift);
  const Vec4 y(0.1, 0.2, 0.0, -0.1);
  const Vec4 xb = a * y + shift;
  CHECK((lin->metric_value(y) - a.transpose() * s4->metric_value(xb) * a).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(lin->domain().contains(y));
  CHECK(local_geometry(*lin, y).scalar == doctest::Approx(12.0).epsilon(1e-10));
  Mat4 flip = Mat4::Identity();
  flip(0, 0) = -1;
  CHECK_THROWS_AS(linear_chart(s4, flip), InvalidInput);
}

TEST_CASE("singular metric") {
  const ChartPtr bad = conformal_chart(flat_chart(), expression_field("log(x1^2)"));
  CHECK_THROWS_AS(local_geometry(*bad, Vec4::Zero()), SingularMetric);
}
