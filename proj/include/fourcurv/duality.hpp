#pragma once

// Hodge-star splitting of bivectors and of curvature-type tensors.
//
// Bivectors are stored as antisymmetric 4x4 matrices with |a|^2 = 1/2 sum a_ij^2,
// so e_i ^ e_j has unit length. A (0,4) tensor acts on bivectors by
// T(a, b) = 1/4 sum T_ijkl a_ij b_kl.
//
// The pair basis is E_1..E_6 = e12, e13, e14, e34, e42, e23, so the Hodge
// star exchanges E_a and E_{a+3}, and w_a^(+-) = (E_a +- E_{a+3}) / sqrt(2).

#include <array>
#include <utility>

#include "fourcurv/tensor.hpp"

namespace fourcurv {

/// Index pairs (0-based) of the pair basis, in order.
inline constexpr std::array<std::array<int, 2>, 6> kPairBasis = {{{0, 1}, {0, 2}, {0, 3}, {2, 3}, {3, 1}, {1, 2}}};

/// The ordered pair (k', l') with (k l k' l') an even permutation of (1234).
/// Returns {-1, -1} when k == l.
std::array<int, 2> dual_pair(int k, int l);

struct Bivectors {
  std::array<Mat4, 3> plus;
  std::array<Mat4, 3> minus;
};

/// w1 = f1^f2 +- f3^f4, w2 = f1^f3 +- f4^f2, w3 = f1^f4 +- f2^f3, all over sqrt 2.
Bivectors duality_basis(const Mat4& frame = Mat4::Identity());

Mat4 wedge(const Vec4& u, const Vec4& v);
Mat4 hodge_star(const Mat4& bivector);
/// <a, b> = 1/2 sum a_ij b_ij.
double bivector_inner(const Mat4& a, const Mat4& b);
/// T(a, b) for bivectors a, b.
double apply(const Tensor4& t, const Mat4& a, const Mat4& b);

/// 6x6 matrix M_PQ = T(E_P, E_Q) in the pair basis.
Mat6 pair_matrix(const Tensor4& t);
/// Inverse of pair_matrix on tensors antisymmetric in each pair.
Tensor4 tensor_from_pair_matrix(const Mat6& m);

struct DualityBlocks {
  Mat3 m_plus = Mat3::Zero();
  Mat3 m_minus = Mat3::Zero();
  /// (m_cross)_ab = T(w_a^+, w_b^-).
  Mat3 m_cross = Mat3::Zero();
  double scalar = 0.0;

  /// Operator matrix in the basis (w1+, w2+, w3+, w1-, w2-, w3-).
  Mat6 assembled() const;
};

DualityBlocks to_blocks(const CurvatureTensor& t);

/// Builds a (0,4) tensor from its operator blocks in the standard duality
/// basis. Any block combination gives the pair symmetries; first Bianchi holds
/// iff tr(plus) == tr(minus).
Tensor4 tensor_from_blocks(const Mat3& plus, const Mat3& minus, const Mat3& cross);

struct WeylHalf {
  Mat3 matrix = Mat3::Zero();
  Vec3 eigenvalues = Vec3::Zero();  // ascending
  Mat3 eigenvectors = Mat3::Identity();
  double det = 0.0;
  double norm_sq = 0.0;
};

WeylHalf make_weyl_half(const Mat3& traceless);

/// (W+, W-) = (m_plus - R/12 I, m_minus - R/12 I).
std::pair<WeylHalf, WeylHalf> weyl_halves(const CurvatureTensor& t);

/// T+- via the index formula 1/4 (T_ijkl +- T_ijk'l' +- T_i'j'kl + T_i'j'k'l').
/// Throws NotPairSymmetric unless T is antisymmetric in each pair and pair symmetric.
std::pair<Tensor4, Tensor4> pm_project(const Tensor4& t);
/// Same projection computed as T(a+-, b+-) through explicit Hodge stars.
std::pair<Tensor4, Tensor4> pm_project_via_forms(const Tensor4& t);

/// 1/4 sum A_ipkl B_iqkl v_p v_q.
double insertion_inner(const Tensor4& a, const Tensor4& b, const Vec4& v);

/// Ascending eigen-decomposition of a symmetric 3x3 matrix.
void sym_eigen3(const Mat3& m, Vec3& values, Mat3& vectors);

}  // namespace fourcurv
