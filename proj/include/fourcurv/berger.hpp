#pragma once

// Berger normal form of Einstein-type curvature tensors.
//
// In a suitable oriented orthonormal frame the operator on the pair basis
// (12),(13),(14),(34),(42),(23) is [[A, B], [B, A]] with A = diag(a),
// B = diag(b). The frame comes from the eigenbases of the two Hodge blocks
// lifted through the double cover SU(2) x SU(2) -> SO(4).

#include <array>
#include <string>
#include <vector>

#include "fourcurv/duality.hpp"

namespace fourcurv {

struct BergerForm {
  Mat4 frame = Mat4::Identity();  // columns e1..e4, det +1
  Vec3 a = Vec3::Zero();          // ascending
  Vec3 b = Vec3::Zero();
  double residual = 0.0;          // max deviation from the block pattern
  bool used_fallback = false;
};

/// Relative size of the traceless Ricci part that still counts as Einstein.
inline constexpr double kEinsteinTol = 1e-9;

/// Throws NotEinstein if |traceless Ric| > kEinsteinTol |T|, and
/// FrameRecoveryFailure if the block residual stays above 1e-8 |T|.
BergerForm berger_form(const CurvatureTensor& t);

/// Target operator [[diag a, diag b], [diag b, diag a]] in the pair basis.
Mat6 berger_pattern(const Vec3& a, const Vec3& b);

/// R(X,Y,X,Y) / (|X|^2 |Y|^2 - <X,Y>^2). Throws DegeneratePlane.
double sectional(const CurvatureTensor& t, const Vec4& x, const Vec4& y);

struct ExtremalPlane {
  Vec4 x = Vec4::Zero();
  Vec4 y = Vec4::Zero();
  double value = 0.0;
};

/// Numerical minimum of the sectional curvature over Gr(2,4): seeded
/// multi-start alternating eigen-minimization. Deterministic for a seed.
ExtremalPlane extremal_plane(const CurvatureTensor& t, int starts = 24, unsigned seed = 7);

/// Max over dual pairs of |K(e_i,e_j) - K(e_i',e_j')| and |R_ijkl - R_i'j'k'l'|
/// in the given frame.
double berger_lemma_check(const CurvatureTensor& t, const Mat4& frame);

struct NamedResidual {
  std::string name;  // 1-based component label, e.g. "R1323"
  double value;
};

/// The twelve components that vanish in the Berger frame by the variational argument.
std::vector<NamedResidual> variational_conditions(const CurvatureTensor& t, const BergerForm& bf);

/// Deviations for the three listed properties of the normal form.
struct BergerProperties {
  double trace_dev = 0.0;       // |a1+a2+a3 - lambda|
  double sectional_dev = 0.0;   // |K(e_i,e_j) - a_k| over all six coordinate planes
  double b_dev = 0.0;           // |b_k - R_1234|, |b_k - R_1342|, |b_k - R_1423|
  double inequality_excess = 0.0;  // max(0, |b_j - b_i| - (a_j - a_i))
  double ordering_excess = 0.0;    // max(0, a_i - a_{i+1})
};
BergerProperties berger_properties(const CurvatureTensor& t, const BergerForm& bf);

}  // namespace fourcurv
