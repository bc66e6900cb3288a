#include "fourcurv/models.hpp"

#include <cmath>
#include <vector>

namespace fourcurv {

double ModelSpec::param(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

namespace {

double positive(const ModelSpec& s, const std::string& key, double fallback) {
  const double v = s.param(key, fallback);
  if (!(v > 0.0) || !std::isfinite(v)) throw BadSpec("model " + s.name + ": parameter " + key + " must be positive");
  return v;
}

CurvatureTensor sphere_product(double ka, double kb) {
  const std::vector<ComponentEntry> e = {{0, 1, 0, 1, ka}, {2, 3, 2, 3, kb}};
  return CurvatureTensor::validate(fill_by_symmetry(e));
}

}  // namespace

CurvatureTensor model_tensor(const ModelSpec& s) {
  if (s.name == "S4") {
    const double r = positive(s, "r", 1.0);
    return constant_curvature(1.0 / (r * r));
  }
  if (s.name == "H4") {
    const double r = positive(s, "r", 1.0);
    return constant_curvature(-1.0 / (r * r));
  }
  if (s.name == "R4") return constant_curvature(0.0);
  if (s.name == "CP2") {
    const double r = positive(s, "R", 24.0);
    return synth_einstein(Vec3(-r / 12.0, -r / 12.0, r / 6.0), Vec3::Zero(), r);
  }
  if (s.name == "S2xS2") {
    const double r = positive(s, "r", 1.0);
    return sphere_product(1.0 / (r * r), 1.0 / (r * r));
  }
  if (s.name == "S2axS2b") {
    const double a = positive(s, "a", 1.0), b = positive(s, "b", 1.0);
    return sphere_product(1.0 / (a * a), 1.0 / (b * b));
  }
  throw BadSpec("unknown model '" + s.name + "'");
}

CurvatureTensor synth_einstein(const Vec3& wp, const Vec3& wm, double r) {
  const double scale = std::max({wp.cwiseAbs().maxCoeff(), wm.cwiseAbs().maxCoeff(), 1.0});
  if (std::abs(wp.sum()) > 1e-12 * scale || std::abs(wm.sum()) > 1e-12 * scale)
    throw NotTraceFree("Weyl spectra must sum to zero");
  if (!std::isfinite(r)) throw InvalidInput("scalar curvature must be finite");
  const Mat3 id = Mat3::Identity();
  return compose_from_blocks(Mat3(wp.asDiagonal()) + r / 12.0 * id, Mat3(wm.asDiagonal()) + r / 12.0 * id, Mat3::Zero());
}

CurvatureTensor compose_from_blocks(const Mat3& plus, const Mat3& minus, const Mat3& cross) {
  return CurvatureTensor::validate(tensor_from_blocks(plus, minus, cross), 1e-11);
}

Vec3 TensorSampler::traceless_triple(double scale) {
  Vec3 v(nd_(rng_), nd_(rng_), nd_(rng_));
  v.array() -= v.mean();
  return scale * v;
}

Mat3 TensorSampler::traceless_sym(double scale) {
  Mat3 a = any_matrix(scale);
  Mat3 s = 0.5 * (a + a.transpose());
  s -= (s.trace() / 3.0) * Mat3::Identity();
  return s;
}

Mat3 TensorSampler::any_matrix(double scale) {
  Mat3 a;
  for (int n = 0; n < 9; ++n) a.data()[n] = scale * nd_(rng_);
  return a;
}

Vec4 TensorSampler::vector(double scale) { return scale * Vec4(nd_(rng_), nd_(rng_), nd_(rng_), nd_(rng_)); }

Mat4 TensorSampler::rotation() {
  Mat4 a;
  for (int n = 0; n < 16; ++n) a.data()[n] = nd_(rng_);
  Eigen::HouseholderQR<Mat4> qr(a);
  Mat4 q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

CurvatureTensor TensorSampler::einstein() {
  const Vec3 wp = traceless_triple(), wm = traceless_triple();
  const double r = 3.0 * nd_(rng_);
  return rotate(synth_einstein(wp, wm, r), rotation());
}

CurvatureTensor TensorSampler::general() {
  const double r = 3.0 * nd_(rng_);
  const Mat3 id = Mat3::Identity();
  return compose_from_blocks(traceless_sym() + r / 12.0 * id, traceless_sym() + r / 12.0 * id, any_matrix());
}

}  // namespace fourcurv
