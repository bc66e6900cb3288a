#include "fourcurv/duality.hpp"

#include <cmath>

namespace fourcurv {

namespace {

int permutation_sign(const std::array<int, 4>& p) {
  int s = 1;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (p[a] > p[b]) s = -s;
  return s;
}

double levi_civita(int i, int j, int k, int l) {
  if (i == j || i == k || i == l || j == k || j == l || k == l) return 0.0;
  return permutation_sign({i, j, k, l});
}

// Columns are w1+, w2+, w3+, w1-, w2-, w3- in pair coordinates.
Mat6 omega_change() {
  const double s = 1.0 / std::sqrt(2.0);
  Mat6 p = Mat6::Zero();
  for (int a = 0; a < 3; ++a) {
    p(a, a) = s;
    p(a + 3, a) = s;
    p(a, a + 3) = s;
    p(a + 3, a + 3) = -s;
  }
  return p;
}

}  // namespace

std::array<int, 2> dual_pair(int k, int l) {
  if (k == l) return {-1, -1};
  std::array<int, 2> rest{};
  int n = 0;
  for (int m = 0; m < 4; ++m)
    if (m != k && m != l) rest[n++] = m;
  if (permutation_sign({k, l, rest[0], rest[1]}) < 0) std::swap(rest[0], rest[1]);
  return rest;
}

Mat4 wedge(const Vec4& u, const Vec4& v) { return u * v.transpose() - v * u.transpose(); }

Mat4 hodge_star(const Mat4& a) {
  Mat4 s = Mat4::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) s(i, j) += 0.5 * levi_civita(i, j, k, l) * a(k, l);
  return s;
}

double bivector_inner(const Mat4& a, const Mat4& b) { return 0.5 * (a.array() * b.array()).sum(); }

double apply(const Tensor4& t, const Mat4& a, const Mat4& b) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (a(i, j) == 0.0) continue;
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) s += t(i, j, k, l) * a(i, j) * b(k, l);
    }
  return 0.25 * s;
}

Bivectors duality_basis(const Mat4& f) {
  if ((f.transpose() * f - Mat4::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw NonOrthonormalFrame("duality basis needs an orthonormal frame");
  const double s = 1.0 / std::sqrt(2.0);
  Bivectors b;
  for (int a = 0; a < 3; ++a) {
    const auto p = kPairBasis[a];
    const auto q = kPairBasis[a + 3];
    const Mat4 e = wedge(f.col(p[0]), f.col(p[1]));
    const Mat4 d = wedge(f.col(q[0]), f.col(q[1]));
    b.plus[a] = s * (e + d);
    b.minus[a] = s * (e - d);
  }
  return b;
}

Mat6 pair_matrix(const Tensor4& t) {
  Mat6 m;
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q) m(p, q) = t(kPairBasis[p][0], kPairBasis[p][1], kPairBasis[q][0], kPairBasis[q][1]);
  return m;
}

Tensor4 tensor_from_pair_matrix(const Mat6& m) {
  Tensor4 t;
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q) {
      const int i = kPairBasis[p][0], j = kPairBasis[p][1];
      const int k = kPairBasis[q][0], l = kPairBasis[q][1];
      const double v = m(p, q);
      t(i, j, k, l) = v;
      t(j, i, k, l) = -v;
      t(i, j, l, k) = -v;
      t(j, i, l, k) = v;
    }
  return t;
}

Mat6 DualityBlocks::assembled() const {
  Mat6 a;
  a << m_plus, m_cross, m_cross.transpose(), m_minus;
  return a;
}

DualityBlocks to_blocks(const CurvatureTensor& t) {
  const Mat6 m = pair_matrix(t.tensor());
  const Mat6 p = omega_change();
  const Mat6 a = p.transpose() * m * p;
  DualityBlocks b;
  b.m_plus = 0.5 * (a.topLeftCorner<3, 3>() + a.topLeftCorner<3, 3>().transpose());
  b.m_minus = 0.5 * (a.bottomRightCorner<3, 3>() + a.bottomRightCorner<3, 3>().transpose());
  b.m_cross = 0.5 * (a.topRightCorner<3, 3>() + a.bottomLeftCorner<3, 3>().transpose());
  b.scalar = scalar(t);
  return b;
}

Tensor4 tensor_from_blocks(const Mat3& plus, const Mat3& minus, const Mat3& cross) {
  DualityBlocks b;
  b.m_plus = plus;
  b.m_minus = minus;
  b.m_cross = cross;
  const Mat6 p = omega_change();
  return tensor_from_pair_matrix(p * b.assembled() * p.transpose());
}

void sym_eigen3(const Mat3& m, Vec3& values, Mat3& vectors) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (m + m.transpose()));
  values = es.eigenvalues();
  vectors = es.eigenvectors();
}

WeylHalf make_weyl_half(const Mat3& w) {
  WeylHalf h;
  h.matrix = w;
  sym_eigen3(w, h.eigenvalues, h.eigenvectors);
  h.det = h.eigenvalues.prod();
  h.norm_sq = h.eigenvalues.squaredNorm();
  return h;
}

std::pair<WeylHalf, WeylHalf> weyl_halves(const CurvatureTensor& t) {
  const DualityBlocks b = to_blocks(t);
  const Mat3 shift = (b.scalar / 12.0) * Mat3::Identity();
  return {make_weyl_half(b.m_plus - shift), make_weyl_half(b.m_minus - shift)};
}

std::pair<Tensor4, Tensor4> pm_project(const Tensor4& t) {
  const SymmetryDefects d = symmetry_defects(t);
  const double tol = 1e-12 * t.max_abs();
  if (d.antisymmetry > tol || d.pair_symmetry > tol)
    throw NotPairSymmetric("pm_project needs a tensor antisymmetric in each pair and pair symmetric");
  Tensor4 plus, minus;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      const auto ij = dual_pair(i, j);
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          if (k == l) continue;
          const auto kl = dual_pair(k, l);
          const double a = t(i, j, k, l), b = t(i, j, kl[0], kl[1]);
          const double c = t(ij[0], ij[1], k, l), e = t(ij[0], ij[1], kl[0], kl[1]);
          plus(i, j, k, l) = 0.25 * (a + b + c + e);
          minus(i, j, k, l) = 0.25 * (a - b - c + e);
        }
    }
  return {plus, minus};
}

std::pair<Tensor4, Tensor4> pm_project_via_forms(const Tensor4& t) {
  Tensor4 plus, minus;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      const Mat4 a = wedge(Vec4::Unit(i), Vec4::Unit(j));
      const Mat4 as = hodge_star(a);
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          if (k == l) continue;
          const Mat4 b = wedge(Vec4::Unit(k), Vec4::Unit(l));
          const Mat4 bs = hodge_star(b);
          plus(i, j, k, l) = apply(t, 0.5 * (a + as), 0.5 * (b + bs));
          minus(i, j, k, l) = apply(t, 0.5 * (a - as), 0.5 * (b - bs));
        }
    }
  return {plus, minus};
}

double insertion_inner(const Tensor4& a, const Tensor4& b, const Vec4& v) {
  double s = 0.0;
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) {
      const double w = v[p] * v[q];
      if (w == 0.0) continue;
      double c = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) c += a(i, p, k, l) * b(i, q, k, l);
      s += w * c;
    }
  return 0.25 * s;
}

}  // namespace fourcurv
