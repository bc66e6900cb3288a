#include <cmath>
#include <random>

#include "doctest.h"
#include "fourcurv/berger.hpp"
#include "fourcurv/errors.hpp"
#include "fourcurv/models.hpp"
#include "oracles.hpp"

using namespace fourcurv;

namespace {

Eigen::Vector4d ricci_eigs(const CurvatureTensor& t) {
  return Eigen::SelfAdjointEigenSolver<Mat4>(oracle::ricci(t.tensor())).eigenvalues();
}

double traceless_ricci_norm(const CurvatureTensor& t) {
  const Mat4 r = oracle::ricci(t.tensor());
  return (r - r.trace() / 4 * Mat4::Identity()).norm();
}

}  // namespace

TEST_CASE("space forms") {
  CHECK(oracle::max_diff(model_tensor({"S4", {}}).tensor(), oracle::space_form(1.0)) < 1e-15);
  CHECK(oracle::max_diff(model_tensor({"S4", {{"r", 2.0}}}).tensor(), oracle::space_form(0.25)) < 1e-15);
  CHECK(oracle::max_diff(model_tensor({"H4", {}}).tensor(), oracle::space_form(-1.0)) < 1e-15);
  CHECK(model_tensor({"R4", {}}).tensor().max_abs() == 0.0);
  CHECK(oracle::ricci(model_tensor({"S4", {}}).tensor()).trace() == doctest::Approx(12.0));
}

TEST_CASE("products of spheres") {
  CHECK(oracle::max_diff(model_tensor({"S2xS2", {}}).tensor(), oracle::sphere_product(1.0, 1.0)) < 1e-15);
  const CurvatureTensor p = model_tensor({"S2axS2b", {{"a", 1.0}, {"b", std::sqrt(2.0)}}});
  CHECK(oracle::max_diff(p.tensor(), oracle::sphere_product(1.0, 0.5)) < 1e-15);
  const Eigen::Vector4d e = ricci_eigs(p);
  CHECK(e[0] == doctest::Approx(0.5));
  CHECK(e[1] == doctest::Approx(0.5));
  CHECK(e[2] == doctest::Approx(1.0));
  CHECK(e[3] == doctest::Approx(1.0));
  CHECK(traceless_ricci_norm(p) > 0.1);
}

TEST_CASE("CP2") {
  const CurvatureTensor cp2 = model_tensor({"CP2", {}});
  CHECK(oracle::ricci(cp2.tensor()).trace() == doctest::Approx(24.0));
  CHECK(traceless_ricci_norm(cp2) < 1e-12);
  const BergerForm bf = berger_form(cp2);
  CHECK((bf.a - Vec3(1, 1, 4)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((bf.b - Vec3(-1, -1, 2)).cwiseAbs().maxCoeff() < 1e-12);
  // sectional curvatures pinched in [1, 4]
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  for (int n = 0; n < 200; ++n) {
    const Vec4 x(nd(rng), nd(rng), nd(rng), nd(rng)), y(nd(rng), nd(rng), nd(rng), nd(rng));
    const double k = sectional(cp2, x, y);
    CHECK(k >= 1.0 - 1e-12);
    CHECK(k <= 4.0 + 1e-12);
  }
  const CurvatureTensor half = model_tensor({"CP2", {{"R", 12.0}}});
  CHECK(oracle::max_diff(half.tensor(), 0.5 * cp2.tensor()) < 1e-14);
}

TEST_CASE("Einstein where claimed") {
  for (const char* name : {"S4", "H4", "R4", "CP2", "S2xS2"}) {
    const CurvatureTensor t = model_tensor({name, {}});
    CHECK(traceless_ricci_norm(t) <= 1e-12);
  }
}

TEST_CASE("bad specs") {
  CHECK_THROWS_AS(model_tensor({"T4", {}}), BadSpec);
  CHECK_THROWS_AS(model_tensor({"S4", {{"r", -1.0}}}), BadSpec);
  CHECK_THROWS_AS(model_tensor({"S2axS2b", {{"a", 0.0}, {"b", 1.0}}}), BadSpec);
}

TEST_CASE("synth_einstein") {
  CHECK(oracle::max_diff(synth_einstein(Vec3::Zero(), Vec3::Zero(), 12.0).tensor(), oracle::space_form(1.0)) < 1e-14);
  CHECK(oracle::max_diff(synth_einstein(Vec3(-2, -2, 4), Vec3::Zero(), 24.0).tensor(), model_tensor({"CP2", {}}).tensor()) <
        1e-12);
  CHECK_THROWS_AS(synth_einstein(Vec3(1, 0, 0), Vec3::Zero(), 1.0), NotTraceFree);
  CHECK_THROWS_AS(synth_einstein(Vec3::Zero(), Vec3(0, 0, 1e-6), 1.0), NotTraceFree);

  TensorSampler s(2);
  for (int n = 0; n < 500; ++n) {
    const Vec3 wp = s.traceless_triple(), wm = s.traceless_triple();
    const double r = 4 * s.normal();
    const CurvatureTensor t = synth_einstein(wp, wm, r);
    const auto [hp, hm] = weyl_halves(t);
    Vec3 sp = wp, sm = wm;
    std::sort(sp.data(), sp.data() + 3);
    std::sort(sm.data(), sm.data() + 3);
    REQUIRE((hp.eigenvalues - sp).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, std::abs(r)));
    REQUIRE((hm.eigenvalues - sm).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, std::abs(r)));
    CHECK(oracle::ricci(t.tensor()).trace() == doctest::Approx(r).scale(1.0).epsilon(1e-12));
    CHECK(traceless_ricci_norm(t) <= 1e-12 * std::max(1.0, norm(t)));
  }
}

TEST_CASE("compose_from_blocks round trip") {
  TensorSampler s(3);
  for (int n = 0; n < 200; ++n) {
    const CurvatureTensor t = s.general();
    const DualityBlocks b = to_blocks(t);
    const CurvatureTensor back = compose_from_blocks(b.m_plus, b.m_minus, b.m_cross);
    REQUIRE(oracle::max_diff(back.tensor(), t.tensor()) <= 1e-12 * t.tensor().max_abs());
  }
  CHECK_THROWS(compose_from_blocks(Mat3::Identity(), Mat3::Zero(), Mat3::Zero()));
}

TEST_CASE("samplers are seeded") {
  TensorSampler a(9), b(9), c(10);
  const CurvatureTensor ta = a.einstein(), tb = b.einstein(), tc = c.einstein();
  CHECK(oracle::max_diff(ta.tensor(), tb.tensor()) == 0.0);
  CHECK(oracle::max_diff(ta.tensor(), tc.tensor()) > 0.0);
  CHECK(traceless_ricci_norm(ta) <= 1e-12 * norm(ta));
  const Mat4 q = a.rotation();
  CHECK((q.transpose() * q - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(q.determinant() == doctest::Approx(1.0));
  CHECK(std::abs(a.traceless_triple().sum()) < 1e-14);
  CHECK(std::abs(a.traceless_sym().trace()) < 1e-14);
}
