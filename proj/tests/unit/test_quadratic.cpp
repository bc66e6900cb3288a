#include <random>

#include "doctest.h"
#include "fourcurv/berger.hpp"
#include "fourcurv/duality.hpp"
#include "fourcurv/errors.hpp"
#include "fourcurv/models.hpp"
#include "fourcurv/quadratic.hpp"
#include "oracles.hpp"

using namespace fourcurv;

namespace {

// B_ijkl = sum_{m,p} R_imjp R_kmlp
Tensor4 b_oracle(const Tensor4& r) {
  Tensor4 b;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int m = 0; m < 4; ++m)
            for (int p = 0; p < 4; ++p) s += r(i, m, j, p) * r(k, m, l, p);
          b(i, j, k, l) = s;
        }
  return b;
}

Tensor4 q_oracle(const Tensor4& r) {
  const Tensor4 b = b_oracle(r);
  Tensor4 q;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) q(i, j, k, l) = b(i, j, k, l) - b(i, j, l, k) + b(i, k, j, l) - b(i, l, j, k);
  return q;
}

// Tensor with operator [[diag a, diag b], [diag b, diag a]] in the pair basis
// (12),(13),(14),(34),(42),(23). First Bianchi needs b1 + b2 + b3 = 0.
Tensor4 berger_tensor(const Vec3& a, const Vec3& b) {
  const int pr[6][2] = {{0, 1}, {0, 2}, {0, 3}, {2, 3}, {3, 1}, {1, 2}};
  Tensor4 t;
  auto put = [&](int u, int v, double x) {
    const int i = pr[u][0], j = pr[u][1], k = pr[v][0], l = pr[v][1];
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2) {
        const double sg = (s1 ? -1 : 1) * (s2 ? -1 : 1);
        const int ii = s1 ? j : i, jj = s1 ? i : j, kk = s2 ? l : k, ll = s2 ? k : l;
        t(ii, jj, kk, ll) = sg * x;
        t(kk, ll, ii, jj) = sg * x;
      }
  };
  for (int u = 0; u < 3; ++u) {
    put(u, u, a[u]);
    put(u + 3, u + 3, a[u]);
    put(u, u + 3, b[u]);
  }
  return t;
}

}  // namespace

TEST_CASE("B tensor") {
  const Tensor4 s4 = oracle::space_form(1.0);
  const Tensor4 b = b_tensor(s4);
  // sum_{m,p} R_1m2p R_1m2p: only R_1221 = -1 contributes
  CHECK(b(0, 1, 0, 1) == doctest::Approx(1.0));
  CHECK(b_oracle(s4)(0, 1, 0, 1) == doctest::Approx(1.0));
  CHECK(b_tensor(Tensor4{}).max_abs() == 0.0);
  std::mt19937_64 rng(1);
  for (int n = 0; n < 50; ++n) {
    const Tensor4 t = oracle::random_curvature(rng);
    const Tensor4 bt = b_tensor(t);
    CHECK(oracle::max_diff(bt, b_oracle(t)) <= 1e-12 * bt.max_abs());
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            CHECK(std::abs(bt(i, j, k, l) - bt(j, i, l, k)) <= 1e-12 * bt.max_abs());
            CHECK(std::abs(bt(i, j, k, l) - bt(k, l, i, j)) <= 1e-12 * bt.max_abs());
          }
  }
}

TEST_CASE("Q tensor") {
  const Tensor4 q = q_tensor(oracle::space_form(1.0));
  CHECK(q(0, 1, 0, 1) == doctest::Approx(3.0));  // lambda R_1212 with lambda = 3
  std::mt19937_64 rng(2);
  for (int n = 0; n < 50; ++n) {
    const Tensor4 t = oracle::random_curvature(rng);
    CHECK(oracle::max_diff(q_tensor(t), q_oracle(t)) <= 1e-12 * q_tensor(t).max_abs());
  }
}

TEST_CASE("Q in Berger form matches the component table") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int n = 0; n < 200; ++n) {
    const Vec3 a(nd(rng), nd(rng), nd(rng));
    Vec3 b(nd(rng), nd(rng), 0.0);
    b[2] = -b[0] - b[1];
    const Tensor4 t = berger_tensor(a, b);
    REQUIRE_NOTHROW(CurvatureTensor::validate(t));
    const Tensor4 q = q_tensor(t);
    const double s = t.max_abs() * t.max_abs();
    auto near = [&](double x, double y) { return std::abs(x - y) <= 1e-12 * s; };
    CHECK(near(q(0, 1, 0, 1), a[0] * a[0] + b[0] * b[0] + 2 * a[1] * a[2] + 2 * b[1] * b[2]));
    CHECK(near(q(2, 3, 2, 3), a[0] * a[0] + b[0] * b[0] + 2 * a[1] * a[2] + 2 * b[1] * b[2]));
    CHECK(near(q(0, 2, 0, 2), a[1] * a[1] + b[1] * b[1] + 2 * a[0] * a[2] + 2 * b[0] * b[2]));
    CHECK(near(q(1, 3, 1, 3), a[1] * a[1] + b[1] * b[1] + 2 * a[0] * a[2] + 2 * b[0] * b[2]));
    CHECK(near(q(0, 3, 0, 3), a[2] * a[2] + b[2] * b[2] + 2 * a[0] * a[1] + 2 * b[0] * b[1]));
    CHECK(near(q(1, 2, 1, 2), a[2] * a[2] + b[2] * b[2] + 2 * a[0] * a[1] + 2 * b[0] * b[1]));
    CHECK(near(q(0, 1, 2, 3), 2 * a[0] * b[0] + 2 * a[1] * b[2] + 2 * a[2] * b[1]));
    CHECK(near(q(0, 2, 3, 1), 2 * a[1] * b[1] + 2 * a[0] * b[2] + 2 * a[2] * b[0]));
    CHECK(near(q(0, 3, 1, 2), 2 * a[2] * b[2] + 2 * a[0] * b[1] + 2 * a[1] * b[0]));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          if (i != j && j != k && i != k) CHECK(near(q(i, j, i, k), 0.0));
  }
}

TEST_CASE("table check against the computed Berger form") {
  const CurvatureTensor s4 = CurvatureTensor::validate(oracle::space_form(1.0));
  CHECK(q_table_check(s4, berger_form(s4)) < 1e-13);
  const CurvatureTensor cp2 = model_tensor({"CP2", {}});
  CHECK(q_table_check(cp2, berger_form(cp2)) <= 1e-12 * norm(cp2) * norm(cp2));
  const auto rows = q_table(cp2, berger_form(cp2));
  REQUIRE(rows.size() >= 6);
  CHECK(rows[0].index == std::array<int, 4>{1, 2, 1, 2});
  CHECK(rows[0].predicted == doctest::Approx(6.0));  // 1 + 1 + 2*1*4 + 2*(-1)*2
  TensorSampler s(4);
  for (int n = 0; n < 1000; ++n) {
    const CurvatureTensor t = s.einstein();
    REQUIRE(q_table_check(t, berger_form(t)) <= 1e-10 * norm(t) * norm(t));
  }
}

TEST_CASE("pairing with W equals 9 det W") {
  const QPairing cp2 = q_weyl_pairing(model_tensor({"CP2", {}}));
  CHECK(cp2.direct_plus == doctest::Approx(144.0));
  CHECK(cp2.det_plus == doctest::Approx(144.0));
  CHECK(std::abs(cp2.direct_minus) < 1e-10);
  const QPairing s4 = q_weyl_pairing(CurvatureTensor::validate(oracle::space_form(1.0)));
  CHECK(std::abs(s4.direct_plus) < 1e-12);
  CHECK(std::abs(s4.direct_minus) < 1e-12);
  std::mt19937_64 rng(5);
  CHECK_THROWS_AS(q_weyl_pairing(CurvatureTensor::validate(oracle::random_curvature(rng))), NotEinstein);

  TensorSampler s(5);
  for (int n = 0; n < 1000; ++n) {
    const CurvatureTensor t = s.einstein();
    const QPairing p = q_weyl_pairing(t);
    REQUIRE(p.rel_disagreement <= 1e-10);
    // independent path: inner products of full projections
    const Tensor4 q = q_oracle(t.tensor());
    const auto [qp, qm] = pm_project(q);
    const auto [wp, wm] = pm_project(standard_decompose(t).weyl.tensor());
    const auto [hp, hm] = weyl_halves(t);
    const double sc = std::max(1.0, norm(t) * norm(t) * norm(t));
    CHECK(oracle::inner(qp, wp) == doctest::Approx(9 * hp.det).scale(sc).epsilon(1e-10));
    CHECK(oracle::inner(qm, wm) == doctest::Approx(9 * hm.det).scale(sc).epsilon(1e-10));
    // zeroth-order part of the Weitzenbock formula
    const double lambda = oracle::ricci(t.tensor()).trace() / 4;
    CHECK(4 * lambda * hp.norm_sq - 4 * oracle::inner(qp, wp) ==
          doctest::Approx(4 * lambda * hp.norm_sq - 36 * hp.det).scale(sc).epsilon(1e-10));
  }
}

TEST_CASE("locally symmetric models satisfy Q = lambda Rm") {
  for (const char* name : {"S4", "CP2", "S2xS2", "H4"}) {
    const CurvatureTensor t = model_tensor({name, {}});
    const double lambda = oracle::ricci(t.tensor()).trace() / 4;
    CHECK(oracle::max_diff(2.0 * q_tensor(t), 2.0 * lambda * t.tensor()) <= 1e-10 * t.tensor().max_abs() * std::abs(lambda));
  }
}

TEST_CASE("expansion of 2Q(Rm)") {
  CHECK(cm_expansion_check(CurvatureTensor::validate(Tensor4{})) == 0.0);
  const CurvatureTensor p = CurvatureTensor::validate(oracle::sphere_product(1.0, 0.25));  // S2(1) x S2(2)
  CHECK(cm_expansion_check(p) <= 1e-10 * norm(p) * norm(p));
  CHECK(oracle::max_diff(cm_expansion_rhs(p), 2.0 * q_oracle(p.tensor())) <= 1e-10 * norm(p) * norm(p));
  std::mt19937_64 rng(6);
  TensorSampler s(6);
  for (int n = 0; n < 500; ++n) {
    const CurvatureTensor g = CurvatureTensor::validate(oracle::random_curvature(rng));
    REQUIRE(oracle::max_diff(cm_expansion_rhs(g), 2.0 * q_oracle(g.tensor())) <= 1e-10 * norm(g) * norm(g));
    const CurvatureTensor e = s.einstein();
    REQUIRE(cm_expansion_check(e) <= 1e-10 * norm(e) * norm(e));
  }
}
