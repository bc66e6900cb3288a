#pragma once

// Generalized m-quasi-Einstein structures: Ric + Hess f - (1/m) df (x) df = lambda g.

#include <limits>
#include <optional>
#include <string>

#include "fourcurv/calculus.hpp"

namespace fourcurv {

inline constexpr double kInfiniteM = std::numeric_limits<double>::infinity();

struct QuasiEinsteinStructure {
  std::string name;
  ChartPtr chart;
  ScalarFieldPtr f;
  double m = kInfiniteM;
  std::optional<double> lambda;  // set when lambda is known to be constant

  double inv_m() const { return std::isinf(m) ? 0.0 : 1.0 / m; }
};

// Exact structure data at a point, all in the orthonormal frame of geo.
struct StructurePoint {
  LocalGeometry geo;
  ScalarJet f;           // coordinate components
  Vec4 df = Vec4::Zero();  // frame components
  Mat4 hess = Mat4::Zero();
  Mat4 ricci = Mat4::Zero();
  double lambda = 0.0;   // 1/4 trace of Ric + Hess f - (1/m) df df
  double validity = 0.0;  // max |traceless part|
};

StructurePoint structure_at(const QuasiEinsteinStructure& s, const Vec4& x);
double structure_lambda(const QuasiEinsteinStructure& s, const LocalGeometry& geo);

/// Flat R^4, f = lambda |x|^2 / 2, m = infinity.
QuasiEinsteinStructure gaussian_soliton(double lambda);

/// g = e^f gbar over an Einstein base, m = -2. Throws NotEinsteinChart when the
/// base is not Einstein and TracelessResidualTooLarge when the structure
/// equation fails at the validation points (a convention error).
QuasiEinsteinStructure conformal_to_einstein(ChartPtr base, ScalarFieldPtr f, std::string name = "conformal");

/// S^2(a) x R^2 with f = |y|^2 / (2 a^2), a shrinking soliton with W != 0.
QuasiEinsteinStructure cylinder_soliton(double a = 1.0);

/// An Einstein chart viewed as a structure with constant f.
QuasiEinsteinStructure einstein_structure(ChartPtr chart, double m = kInfiniteM);

/// Interior validation points used by the constructors and the suite.
std::vector<Vec4> interior_points(const Box& box, int count, unsigned seed, double margin = 0.3);

}  // namespace fourcurv
