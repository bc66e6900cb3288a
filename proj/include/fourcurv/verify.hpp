#pragma once

// Pointwise verification of the differential curvature identities, and
// convergence studies under step refinement.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fourcurv/structures.hpp"

namespace fourcurv {

struct IdentityResult {
  std::string identity;
  Vec4 x = Vec4::Zero();
  /// Named max-abs residuals; each should tend to zero when its form is correct.
  std::vector<std::pair<std::string, double>> residuals;
  /// Diagnostic values (left side, individual terms).
  std::vector<std::pair<std::string, double>> values;
  /// Size of the finite-differenced data, used to place the roundoff floor.
  double scale = 1.0;

  double residual(const std::string& name) const;
  double value(const std::string& name) const;
};

/// Delta Rm + 2 Q(Rm) - 2 lambda Rm with lambda = R/4.
IdentityResult verify_hamilton(const Chart& chart, const Vec4& x, const DiffConfig& cfg, bool force = false);
/// Delta |W+-|^2 against 2 |nabla W+-|^2 + 4 lambda |W+-|^2 - 36 det W+-. The
/// left side is evaluated both as 2 <Delta W, W> + 2 |nabla W|^2 ("plus",
/// "minus") and by differencing |W+-|^2 directly ("*_scalar_route").
IdentityResult verify_weitzenbock_einstein(const Chart& chart, const Vec4& x, const DiffConfig& cfg,
                                           bool force = false);
IdentityResult verify_prop32(const QuasiEinsteinStructure& s, const Vec4& x, const DiffConfig& cfg);
IdentityResult verify_weitzenbock_gqe(const QuasiEinsteinStructure& s, const Vec4& x, const DiffConfig& cfg);
IdentityResult verify_lemma31(const QuasiEinsteinStructure& s, const Vec4& x, const DiffConfig& cfg);
/// 2|nabla W+-|^2 - 8|delta W+-|^2 + R|W+-|^2 - 36 det W+- (values, not residuals).
IdentityResult cgy_integrand(const Chart& chart, const Vec4& x, const DiffConfig& cfg);

struct WeylDerivatives {
  Tensor4 weyl;                       // frame components
  std::array<Tensor4, 4> nabla_weyl;  // (nabla_a W) in the frame
  double grad_sq_plus = 0.0, grad_sq_minus = 0.0;
  std::vector<double> div_plus, div_minus;  // (delta W+-)_jkl, 64 entries
  double div_sq_plus = 0.0, div_sq_minus = 0.0;
};
WeylDerivatives cov_deriv_weyl(const Chart& chart, const Vec4& x, const DiffConfig& cfg);

/// Residuals below kFloorFactor * scale / h^2 are treated as roundoff.
inline constexpr double kFloorFactor = 1e-13;

enum class Convergence { nominal, superconvergent, floor, subnominal, nonconvergent };
const char* to_string(Convergence c);
inline bool converged(Convergence c) { return c == Convergence::nominal || c == Convergence::superconvergent || c == Convergence::floor; }

struct ConvergenceRecord {
  std::string name;
  std::vector<double> steps, residuals, floors, ratios;
  double observed_order = 0.0;
  Convergence status = Convergence::nonconvergent;
};

struct ConvergenceStudy {
  std::string identity;
  Vec4 x = Vec4::Zero();
  int nominal_order = 4;
  std::vector<ConvergenceRecord> records;
  const ConvergenceRecord& record(const std::string& name) const;
};

using PointVerifier = std::function<IdentityResult(const Vec4&, const DiffConfig&)>;

/// Runs the verifier at h, h/2, ... (levels steps) and classifies each named
/// residual. Ratios must sit within 25% (order 2) or 40% (higher) of 2^order.
ConvergenceStudy convergence_study(const PointVerifier& verifier, const Vec4& x, const DiffConfig& cfg, int levels = 3);

/// Status of one residual sequence (step halves between entries).
Convergence classify(const std::vector<double>& residuals, const std::vector<double>& floors, int order,
                     std::vector<double>* ratios = nullptr, double* observed = nullptr);

}  // namespace fourcurv
