#pragma once

// Algebraic (0,4) tensors at a point of an oriented Euclidean 4-space.
//
// All components are taken in an orthonormal frame, so indices are never
// raised or lowered here. Sign conventions: K(e_i, e_j) = R_ijij and
// Ric_ik = sum_j R_ijkj, so the unit round sphere has R_1212 = +1.

#include <array>
#include <span>

#include <Eigen/Dense>

#include "fourcurv/errors.hpp"

namespace fourcurv {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Relative tolerance used when validating curvature symmetries.
inline constexpr double kSymmetryTol = 1e-12;

/// Dense 4x4x4x4 array with 0-based indices. No symmetries are assumed.
class Tensor4 {
public:
  Tensor4() { c_.fill(0.0); }

  static constexpr int index(int i, int j, int k, int l) { return ((i * 4 + j) * 4 + k) * 4 + l; }

  double& operator()(int i, int j, int k, int l) { return c_[index(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const { return c_[index(i, j, k, l)]; }

  std::array<double, 256>& data() { return c_; }
  const std::array<double, 256>& data() const { return c_; }

  double max_abs() const;

  Tensor4& operator+=(const Tensor4& o);
  Tensor4& operator-=(const Tensor4& o);
  Tensor4& operator*=(double s);

  friend Tensor4 operator+(Tensor4 a, const Tensor4& b) { return a += b; }
  friend Tensor4 operator-(Tensor4 a, const Tensor4& b) { return a -= b; }
  friend Tensor4 operator*(double s, Tensor4 a) { return a *= s; }
  friend Tensor4 operator*(Tensor4 a, double s) { return a *= s; }

private:
  std::array<double, 256> c_;
};

/// One explicitly given component; indices are 0-based.
struct ComponentEntry {
  int i, j, k, l;
  double value;
};

/// Fills a tensor from entries, propagating each value to its images under
/// antisymmetry in each pair and pair exchange. Throws ConflictingEntry when
/// two entries (or their images) disagree.
Tensor4 fill_by_symmetry(std::span<const ComponentEntry> entries);

/// An algebraic curvature tensor: a Tensor4 that satisfied the pair
/// antisymmetries, pair exchange and first Bianchi identity when validated.
class CurvatureTensor {
public:
  CurvatureTensor() = default;

  /// Accepts `t` iff every identity holds within rel_tol * max|t|.
  static CurvatureTensor validate(const Tensor4& t, double rel_tol = kSymmetryTol);

  const Tensor4& tensor() const { return t_; }
  double operator()(int i, int j, int k, int l) const { return t_(i, j, k, l); }

  friend CurvatureTensor operator+(const CurvatureTensor& a, const CurvatureTensor& b) {
    return CurvatureTensor(a.t_ + b.t_);
  }
  friend CurvatureTensor operator-(const CurvatureTensor& a, const CurvatureTensor& b) {
    return CurvatureTensor(a.t_ - b.t_);
  }
  friend CurvatureTensor operator*(double s, const CurvatureTensor& a) { return CurvatureTensor(s * a.t_); }

private:
  explicit CurvatureTensor(const Tensor4& t) : t_(t) {}
  friend CurvatureTensor kulkarni_nomizu_curvature(const Mat4&, const Mat4&);
  friend CurvatureTensor rotate(const CurvatureTensor&, const Mat4&);
  Tensor4 t_;
};

/// Largest violation of each symmetry identity, with its location.
struct SymmetryDefects {
  double antisymmetry = 0.0;
  double pair_symmetry = 0.0;
  double first_bianchi = 0.0;
  std::array<int, 4> worst_antisymmetry{}, worst_pair{}, worst_bianchi{};
};
SymmetryDefects symmetry_defects(const Tensor4& t);

/// (a o b)_ijkl = a_ik b_jl + a_jl b_ik - a_il b_jk - a_jk b_il.
Tensor4 kulkarni_nomizu(const Mat4& a, const Mat4& b);
/// Same product for symmetric a, b, returned as a curvature tensor.
CurvatureTensor kulkarni_nomizu_curvature(const Mat4& a, const Mat4& b);

/// <S,T> = 1/4 sum S_ijkl T_ijkl.
double inner_product(const Tensor4& s, const Tensor4& t);
inline double inner_product(const CurvatureTensor& s, const CurvatureTensor& t) {
  return inner_product(s.tensor(), t.tensor());
}
/// sqrt(<T,T>); equals the Frobenius norm of the curvature operator on Lambda^2.
double norm(const Tensor4& t);
inline double norm(const CurvatureTensor& t) { return norm(t.tensor()); }

Mat4 ricci(const CurvatureTensor& t);
double scalar(const CurvatureTensor& t);

struct CurvDecomposition {
  double scalar = 0.0;
  Mat4 traceless_ricci = Mat4::Zero();
  CurvatureTensor weyl;
};

/// R = -R/12 (g o g) + 1/2 (Ric o g) + W in dimension four.
CurvDecomposition standard_decompose(const CurvatureTensor& t);
CurvatureTensor recompose(const CurvDecomposition& d);

/// Components in the frame whose vectors are the columns of `frame`:
/// T'_ijkl = T(f_i, f_j, f_k, f_l). The frame must be orthonormal.
Tensor4 rotate(const Tensor4& t, const Mat4& frame);
CurvatureTensor rotate(const CurvatureTensor& t, const Mat4& frame);

/// T(X, Y, Z, W) for arbitrary vectors.
double evaluate(const Tensor4& t, const Vec4& x, const Vec4& y, const Vec4& z, const Vec4& w);

/// Constant sectional curvature tensor k (delta_ik delta_jl - delta_il delta_jk).
CurvatureTensor constant_curvature(double k);

}  // namespace fourcurv
