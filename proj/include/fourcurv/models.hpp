#pragma once

// Closed-form curvature tensors of the model spaces, synthetic Einstein
// tensors built from prescribed Weyl spectra, and seeded random samplers.

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "fourcurv/duality.hpp"

namespace fourcurv {

/// name in {S4, H4, R4, CP2, S2xS2, S2axS2b}. Parameters:
///   S4, H4, S2xS2: "r" (radius, default 1)
///   CP2: "R" (scalar curvature, default 24)
///   S2axS2b: "a", "b" (radii)
struct ModelSpec {
  std::string name;
  std::map<std::string, double> params;

  double param(const std::string& key, double fallback) const;
};

/// Throws BadSpec on unknown names or non-positive parameters.
CurvatureTensor model_tensor(const ModelSpec& spec);

/// Einstein tensor with blocks R/12 I + diag(w+) and R/12 I + diag(w-) in the
/// standard duality basis. Throws NotTraceFree unless both triples sum to 0.
CurvatureTensor synth_einstein(const Vec3& w_plus, const Vec3& w_minus, double r);

/// General algebraic curvature tensor from its operator blocks; the Bianchi
/// identity requires tr(plus) == tr(minus).
CurvatureTensor compose_from_blocks(const Mat3& plus, const Mat3& minus, const Mat3& cross);

/// Seeded samplers used by the property tests and the acceptance suite.
class TensorSampler {
public:
  explicit TensorSampler(std::uint64_t seed) : rng_(seed) {}

  Vec3 traceless_triple(double scale = 1.0);
  Mat3 traceless_sym(double scale = 1.0);
  Mat3 any_matrix(double scale = 1.0);
  Vec4 vector(double scale = 1.0);
  Mat4 rotation();  // uniform-ish element of SO(4)
  double normal() { return nd_(rng_); }

  /// Einstein tensor with random W+-, random R, in a random frame.
  CurvatureTensor einstein();
  /// Arbitrary algebraic curvature tensor (non-Einstein in general).
  CurvatureTensor general();

private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> nd_;
};

}  // namespace fourcurv
