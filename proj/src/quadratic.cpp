#include "fourcurv/quadratic.hpp"

#include <cmath>

namespace fourcurv {

Tensor4 b_tensor(const Tensor4& t) {
  // B_ijkl = sum_mp R_imjp R_kmlp, i.e. an inner product of the 4x4 slices
  // S(i,j)_mp = R_imjp.
  std::array<Mat4, 16> slice;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int m = 0; m < 4; ++m)
        for (int p = 0; p < 4; ++p) slice[i * 4 + j](m, p) = t(i, m, j, p);
  Tensor4 b;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) b(i, j, k, l) = (slice[i * 4 + j].array() * slice[k * 4 + l].array()).sum();
  return b;
}

Tensor4 q_tensor(const Tensor4& t) {
  const Tensor4 b = b_tensor(t);
  Tensor4 q;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) q(i, j, k, l) = b(i, j, k, l) - b(i, j, l, k) + b(i, k, j, l) - b(i, l, j, k);
  return q;
}

std::vector<QTableRow> q_table(const CurvatureTensor& t, const BergerForm& bf) {
  const Tensor4 q = q_tensor(rotate(t, bf.frame));
  const Vec3& a = bf.a;
  const Vec3& b = bf.b;
  const double v[6] = {a[0] * a[0] + b[0] * b[0] + 2 * a[1] * a[2] + 2 * b[1] * b[2],
                       a[1] * a[1] + b[1] * b[1] + 2 * a[0] * a[2] + 2 * b[0] * b[2],
                       a[2] * a[2] + b[2] * b[2] + 2 * a[0] * a[1] + 2 * b[0] * b[1],
                       2 * a[0] * b[0] + 2 * a[1] * b[2] + 2 * a[2] * b[1],
                       2 * a[1] * b[1] + 2 * a[0] * b[2] + 2 * a[2] * b[0],
                       2 * a[2] * b[2] + 2 * a[0] * b[1] + 2 * a[1] * b[0]};
  const std::array<std::array<int, 4>, 9> idx = {{{1, 2, 1, 2},
                                                  {3, 4, 3, 4},
                                                  {1, 3, 1, 3},
                                                  {2, 4, 2, 4},
                                                  {1, 4, 1, 4},
                                                  {2, 3, 2, 3},
                                                  {1, 2, 3, 4},
                                                  {1, 3, 4, 2},
                                                  {1, 4, 2, 3}}};
  const int which[9] = {0, 0, 1, 1, 2, 2, 3, 4, 5};
  std::vector<QTableRow> rows;
  for (int r = 0; r < 9; ++r) {
    const auto& c = idx[r];
    rows.push_back({c, v[which[r]], q(c[0] - 1, c[1] - 1, c[2] - 1, c[3] - 1)});
  }
  return rows;
}

double q_table_check(const CurvatureTensor& t, const BergerForm& bf) {
  double dev = 0.0;
  for (const auto& r : q_table(t, bf)) dev = std::max(dev, std::abs(r.actual - r.predicted));
  const Tensor4 q = q_tensor(rotate(t, bf.frame));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        if (i != j && j != k && i != k) dev = std::max(dev, std::abs(q(i, j, i, k)));
  return dev;
}

QPairing q_weyl_pairing(const CurvatureTensor& t) {
  const CurvDecomposition dec = standard_decompose(t);
  if (dec.traceless_ricci.norm() > kEinsteinTol * norm(t))
    throw NotEinstein("Q-Weyl pairing is defined here for Einstein tensors only");
  const auto [qp, qm] = pm_project(q_tensor(t));
  const auto [wp, wm] = pm_project(dec.weyl.tensor());
  const auto [hp, hm] = weyl_halves(t);
  QPairing r;
  r.direct_plus = inner_product(qp, wp);
  r.direct_minus = inner_product(qm, wm);
  r.det_plus = 9.0 * hp.det;
  r.det_minus = 9.0 * hm.det;
  const double scale = std::max({std::abs(r.det_plus), std::abs(r.det_minus), std::pow(norm(t), 3)});
  if (scale > 0)
    r.rel_disagreement =
        std::max(std::abs(r.direct_plus - r.det_plus), std::abs(r.direct_minus - r.det_minus)) / scale;
  return r;
}

Tensor4 cm_expansion_rhs(const CurvatureTensor& t) {
  const CurvDecomposition dec = standard_decompose(t);
  const Mat4 g = Mat4::Identity();
  const Mat4 ric = dec.traceless_ricci + 0.25 * dec.scalar * g;
  const double r = dec.scalar;
  const double n = 4.0;
  const Tensor4& w = dec.weyl.tensor();

  Tensor4 out = 2.0 * q_tensor(w);
  out += ((2 * (n - 1) * ric.squaredNorm() - 2 * r * r) / (2 * (n - 1) * (n - 2) * (n - 2))) * kulkarni_nomizu(g, g);
  out -= (2.0 / ((n - 2) * (n - 2))) * kulkarni_nomizu(ric * ric, g);
  out += (2.0 * r / ((n - 1) * (n - 2) * (n - 2))) * kulkarni_nomizu(ric, g);

  // wr_ik = W_ipkq R^pq
  Mat4 wr = Mat4::Zero();
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) wr(i, k) += w(i, p, k, q) * ric(p, q);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          out(i, j, k, l) += (2.0 / (n - 2)) * (ric(i, k) * ric(l, j) - ric(i, l) * ric(j, k));
          out(i, j, k, l) += (2.0 / (n - 2)) * (wr(i, k) * g(j, l) - wr(j, k) * g(i, l) + wr(j, l) * g(i, k) -
                                                 wr(i, l) * g(j, k));
        }
  return out;
}

double cm_expansion_check(const CurvatureTensor& t) {
  return (2.0 * q_tensor(t) - cm_expansion_rhs(t)).max_abs();
}

}  // namespace fourcurv
