#pragma once

// Positivity cones of the curvature operator and of its Hodge blocks.

#include <string>
#include <vector>

#include "fourcurv/duality.hpp"

namespace fourcurv {

enum class Side { plus, minus };
const char* to_string(Side s);

/// Sum of the k smallest eigenvalues of a symmetric matrix. Throws BadK.
double k_sum(const Eigen::MatrixXd& m, int k);

struct HalfMargins {
  double plus = 0.0;   // k_sum(R+, 2)
  double minus = 0.0;  // k_sum(R-, 2)
};
HalfMargins half_two_positive(const CurvatureTensor& t);

/// K13 + K14 + K23 + K24 - 2 R1234 (plus) or + 2 R1234 (minus) in the
/// frame given by the columns of `frame` (assumed oriented orthonormal).
/// The minus sign pairs with the self-dual block: the expression equals
/// 2 (R(w2+, w2+) + R(w3+, w3+)).
double isotropic_curvature(const CurvatureTensor& t, const Mat4& frame, Side side);

struct IsotropicBudget {
  int starts = 8;
  int max_sweeps = 200;
  unsigned seed = 11;
};

/// Minimum of isotropic_curvature over SO(4): seeded random starts, then
/// sweeps of plane rotations. Each rotation angle is solved exactly, since
/// along a one-parameter plane rotation the expression is c0 + c1 cos 2t + c2 sin 2t.
double min_isotropic(const CurvatureTensor& t, Side side, const IsotropicBudget& budget = {});

/// R |W+-|^2 - 36 det W+-.
double halfpic_functional(const CurvatureTensor& t, Side side);

/// The same functional written on a traceless spectrum (x, y, z).
double halfpic_on_spectrum(double r, const Vec3& spec);

struct OracleResult {
  double min_value = 0.0;
  Vec3 argmin = Vec3::Zero();               // best spectrum (x <= y <= z)
  std::vector<Vec3> argmin_clusters;        // refined representatives of all near-minimal regions
  long evaluations = 0;
};

struct OracleBudget {
  int grid = 400;
  int refinements = 3;
};

/// Brute-force minimum of R(x^2+y^2+z^2) - 36xyz over traceless spectra with
/// x <= y <= z and x + y + R/6 >= 0. Throws InvalidInput for R < 0.
OracleResult halfpic_min_oracle(double r, const OracleBudget& budget = {});

struct PositivityReport {
  std::vector<double> sums_k_plus;   // k = 1..3
  std::vector<double> sums_k_minus;  // k = 1..3
  std::vector<double> sums_k_full;   // k = 1..6
  double min_isotropic_plus = 0.0;
  double min_isotropic_minus = 0.0;
  double halfpic_plus = 0.0;
  double halfpic_minus = 0.0;
  std::vector<std::string> classification;
};

/// Labels: kahler_type_+- when W+- has spectrum {-R/12, -R/12, R/6} (R > 0);
/// half_conformally_flat_plus / _minus when W+ / W- vanishes; indefinite when
/// neither block is two-nonnegative; none when nothing applies.
PositivityReport classify_point(const CurvatureTensor& t, const IsotropicBudget& budget = {});

}  // namespace fourcurv
