#pragma once

// Coordinate charts: a metric on an open box in R^4 whose components are
// evaluated on jets, so first and second metric derivatives are exact.

#include <functional>
#include <memory>
#include <string>

#include "fourcurv/expr.hpp"
#include "fourcurv/tensor.hpp"

namespace fourcurv {

using JetVec = std::array<Jet2, 4>;
using MetricJet = std::array<std::array<Jet2, 4>, 4>;

struct Box {
  Vec4 lo = Vec4::Constant(-1.0);
  Vec4 hi = Vec4::Constant(1.0);
  bool contains(const Vec4& x) const { return (x.array() > lo.array()).all() && (x.array() < hi.array()).all(); }
};

class ScalarField {
public:
  virtual ~ScalarField() = default;
  virtual Jet2 eval(const JetVec& x) const = 0;
  virtual std::string describe() const = 0;
};
using ScalarFieldPtr = std::shared_ptr<const ScalarField>;

ScalarFieldPtr constant_field(double c);
ScalarFieldPtr expression_field(const std::string& text);
ScalarFieldPtr function_field(std::function<Jet2(const JetVec&)> f, std::string description);

class Chart {
public:
  virtual ~Chart() = default;
  virtual std::string name() const = 0;
  virtual Box domain() const = 0;
  /// Metric components at jet-valued coordinates.
  virtual MetricJet metric(const JetVec& x) const = 0;

  /// Metric jets at a point (coordinates seeded as independent variables).
  MetricJet metric_at(const Vec4& x) const;
  Mat4 metric_value(const Vec4& x) const;
};
using ChartPtr = std::shared_ptr<const Chart>;

JetVec seed(const Vec4& x);

ChartPtr flat_chart();
/// Stereographic chart of the round sphere: 4 r^2 / (1 + |x|^2)^2 delta.
ChartPtr sphere_chart(double r = 1.0);
/// Poincare ball: 4 r^2 / (1 - |x|^2)^2 delta on a box inside the unit ball.
ChartPtr hyperbolic_chart(double r = 1.0);
/// Fubini-Study on the affine chart C^2, normalized to R = 24.
ChartPtr fubini_study_chart();
/// S^2(a) x S^2(b), each factor in stereographic coordinates.
ChartPtr sphere_product_chart(double a, double b);
/// S^2(a) x R^2.
ChartPtr cylinder_chart(double a);
/// Riemannian Schwarzschild-de Sitter, coordinates (t, r, theta, phi):
/// V dt^2 + dr^2 / V + r^2 (dtheta^2 + sin^2 theta dphi^2), V = 1 - 2M/r - L r^2 / 3.
/// Einstein with Ric = L g and non-constant |W|^2.
ChartPtr schwarzschild_de_sitter_chart(double mass = 0.1, double lambda = 0.3);
/// e^f times the base metric.
ChartPtr conformal_chart(ChartPtr base, ScalarFieldPtr f, Box domain);
ChartPtr conformal_chart(ChartPtr base, ScalarFieldPtr f);
/// Pullback by x = A y (+ shift); requires det A > 0 to keep the orientation.
ChartPtr linear_chart(ChartPtr base, const Mat4& a, const Vec4& shift = Vec4::Zero());

}  // namespace fourcurv
