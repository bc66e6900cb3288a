#include "fourcurv/tensor.hpp"

#include <cmath>
#include <sstream>

namespace fourcurv {

const char* to_string(SymmetryIdentity id) {
  switch (id) {
    case SymmetryIdentity::antisymmetry: return "antisymmetry";
    case SymmetryIdentity::pair_symmetry: return "pair_symmetry";
    case SymmetryIdentity::first_bianchi: return "first_bianchi";
  }
  return "unknown";
}

namespace {
std::string violation_message(SymmetryIdentity which, const std::array<int, 4>& idx, double mag) {
  std::ostringstream os;
  os << "symmetry violation (" << to_string(which) << ") at [" << idx[0] + 1 << "," << idx[1] + 1 << ","
     << idx[2] + 1 << "," << idx[3] + 1 << "], magnitude " << mag;
  return os.str();
}
}  // namespace

SymmetryViolation::SymmetryViolation(SymmetryIdentity which, std::array<int, 4> index, double magnitude)
    : Error("SymmetryViolation", violation_message(which, index, magnitude)),
      which_(which),
      index_(index),
      magnitude_(magnitude) {}

double Tensor4::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

Tensor4& Tensor4::operator+=(const Tensor4& o) {
  for (int n = 0; n < 256; ++n) c_[n] += o.c_[n];
  return *this;
}

Tensor4& Tensor4::operator-=(const Tensor4& o) {
  for (int n = 0; n < 256; ++n) c_[n] -= o.c_[n];
  return *this;
}

Tensor4& Tensor4::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Tensor4 fill_by_symmetry(std::span<const ComponentEntry> entries) {
  Tensor4 t;
  std::array<bool, 256> set{};
  auto put = [&](int i, int j, int k, int l, double v) {
    const int n = Tensor4::index(i, j, k, l);
    if (set[n] && t.data()[n] != v) {
      std::ostringstream os;
      os << "conflicting value for component [" << i + 1 << "," << j + 1 << "," << k + 1 << "," << l + 1
         << "]: " << t.data()[n] << " vs " << v;
      throw ConflictingEntry(os.str());
    }
    set[n] = true;
    t.data()[n] = v;
  };
  for (const auto& e : entries) {
    for (int x : {e.i, e.j, e.k, e.l})
      if (x < 0 || x > 3) throw InvalidInput("component index out of range 1..4");
    if (!std::isfinite(e.value)) throw InvalidInput("non-finite component value");
    if ((e.i == e.j || e.k == e.l) && e.value != 0.0)
      throw ConflictingEntry("nonzero component with a repeated index inside a pair");
    const double v = e.value;
    put(e.i, e.j, e.k, e.l, v);
    put(e.j, e.i, e.k, e.l, -v);
    put(e.i, e.j, e.l, e.k, -v);
    put(e.j, e.i, e.l, e.k, v);
    put(e.k, e.l, e.i, e.j, v);
    put(e.l, e.k, e.i, e.j, -v);
    put(e.k, e.l, e.j, e.i, -v);
    put(e.l, e.k, e.j, e.i, v);
  }
  return t;
}

SymmetryDefects symmetry_defects(const Tensor4& t) {
  SymmetryDefects d;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          const double a = std::max(std::abs(t(i, j, k, l) + t(j, i, k, l)), std::abs(t(i, j, k, l) + t(i, j, l, k)));
          if (a > d.antisymmetry) { d.antisymmetry = a; d.worst_antisymmetry = {i, j, k, l}; }
          const double p = std::abs(t(i, j, k, l) - t(k, l, i, j));
          if (p > d.pair_symmetry) { d.pair_symmetry = p; d.worst_pair = {i, j, k, l}; }
          const double b = std::abs(t(i, j, k, l) + t(i, k, l, j) + t(i, l, j, k));
          if (b > d.first_bianchi) { d.first_bianchi = b; d.worst_bianchi = {i, j, k, l}; }
        }
  return d;
}

CurvatureTensor CurvatureTensor::validate(const Tensor4& t, double rel_tol) {
  for (double v : t.data())
    if (!std::isfinite(v)) throw InvalidInput("tensor has non-finite entries");
  const double tol = rel_tol * t.max_abs();
  const SymmetryDefects d = symmetry_defects(t);
  if (d.antisymmetry > tol) throw SymmetryViolation(SymmetryIdentity::antisymmetry, d.worst_antisymmetry, d.antisymmetry);
  if (d.pair_symmetry > tol) throw SymmetryViolation(SymmetryIdentity::pair_symmetry, d.worst_pair, d.pair_symmetry);
  if (d.first_bianchi > tol) throw SymmetryViolation(SymmetryIdentity::first_bianchi, d.worst_bianchi, d.first_bianchi);
  return CurvatureTensor(t);
}

Tensor4 kulkarni_nomizu(const Mat4& a, const Mat4& b) {
  Tensor4 t;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          t(i, j, k, l) = a(i, k) * b(j, l) + a(j, l) * b(i, k) - a(i, l) * b(j, k) - a(j, k) * b(i, l);
  return t;
}

CurvatureTensor kulkarni_nomizu_curvature(const Mat4& a, const Mat4& b) {
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + a.cwiseAbs().maxCoeff()) ||
      (b - b.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + b.cwiseAbs().maxCoeff()))
    throw InvalidInput("Kulkarni-Nomizu curvature requires symmetric factors");
  const Mat4 as = 0.5 * (a + a.transpose());
  const Mat4 bs = 0.5 * (b + b.transpose());
  return CurvatureTensor(kulkarni_nomizu(as, bs));
}

double inner_product(const Tensor4& s, const Tensor4& t) {
  double acc = 0.0;
  for (int n = 0; n < 256; ++n) acc += s.data()[n] * t.data()[n];
  return 0.25 * acc;
}

double norm(const Tensor4& t) { return std::sqrt(inner_product(t, t)); }

Mat4 ricci(const CurvatureTensor& t) {
  Mat4 r = Mat4::Zero();
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j) r(i, k) += t(i, j, k, j);
  return 0.5 * (r + r.transpose());
}

double scalar(const CurvatureTensor& t) { return ricci(t).trace(); }

CurvDecomposition standard_decompose(const CurvatureTensor& t) {
  CurvDecomposition d;
  const Mat4 ric = ricci(t);
  const Mat4 g = Mat4::Identity();
  d.scalar = ric.trace();
  d.traceless_ricci = ric - 0.25 * d.scalar * g;
  Tensor4 w = t.tensor();
  w += (d.scalar / 12.0) * kulkarni_nomizu(g, g);
  w -= 0.5 * kulkarni_nomizu(ric, g);
  d.weyl = CurvatureTensor::validate(w, 1e-10);
  return d;
}

CurvatureTensor recompose(const CurvDecomposition& d) {
  const Mat4 g = Mat4::Identity();
  const Mat4 ric = d.traceless_ricci + 0.25 * d.scalar * g;
  return d.weyl + (-d.scalar / 12.0) * kulkarni_nomizu_curvature(g, g) + 0.5 * kulkarni_nomizu_curvature(ric, g);
}

Tensor4 rotate(const Tensor4& t, const Mat4& f) {
  // Four successive mode products keep this at 4 * 4^5 multiplies.
  Tensor4 a, b;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int m = 0; m < 4; ++m) s += t(i, j, k, m) * f(m, l);
          a(i, j, k, l) = s;
        }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int m = 0; m < 4; ++m) s += a(i, j, m, l) * f(m, k);
          b(i, j, k, l) = s;
        }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int m = 0; m < 4; ++m) s += b(i, m, k, l) * f(m, j);
          a(i, j, k, l) = s;
        }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int m = 0; m < 4; ++m) s += a(m, j, k, l) * f(m, i);
          b(i, j, k, l) = s;
        }
  return b;
}

CurvatureTensor rotate(const CurvatureTensor& t, const Mat4& frame) {
  if ((frame.transpose() * frame - Mat4::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw NonOrthonormalFrame("rotation frame is not orthonormal");
  return CurvatureTensor(rotate(t.tensor(), frame));
}

double evaluate(const Tensor4& t, const Vec4& x, const Vec4& y, const Vec4& z, const Vec4& w) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < 4; ++j) {
      if (y[j] == 0.0) continue;
      double inner = 0.0;
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) inner += t(i, j, k, l) * z[k] * w[l];
      s += x[i] * y[j] * inner;
    }
  }
  return s;
}

CurvatureTensor constant_curvature(double k) {
  return (0.5 * k) * kulkarni_nomizu_curvature(Mat4::Identity(), Mat4::Identity());
}

}  // namespace fourcurv
