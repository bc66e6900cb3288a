#pragma once

// Chart-level covariant calculus. Metric derivatives up to order two are exact
// (jets); anything deeper is obtained by central differences of exact
// quantities evaluated at stencil points, with Christoffel corrections applied
// at the centre.

#include <functional>
#include <vector>

#include "fourcurv/chart.hpp"
#include "fourcurv/tensor.hpp"

namespace fourcurv {

struct DiffConfig {
  double h = 1e-2;
  int order = 4;       // 2 or 4
  int richardson = 1;  // 0..2
};
void check_config(const DiffConfig& cfg);

// Exact pointwise geometry (no differencing).
struct LocalGeometry {
  Vec4 x = Vec4::Zero();
  Mat4 g, ginv;
  std::array<Mat4, 4> dg;                    // dg[c](a,b) = d_c g_ab
  std::array<Mat4, 4> gamma;                 // gamma[a](b,c) = Gamma^a_bc
  std::array<std::array<Mat4, 4>, 4> dgamma;  // dgamma[d][a](b,c) = d_d Gamma^a_bc
  Tensor4 riemann;                           // coordinate components, R_ijij is the sectional numerator
  Mat4 ricci;
  double scalar = 0.0;
  Tensor4 weyl;  // coordinate components
  Mat4 frame;    // columns: Gram-Schmidt orthonormalization of the coordinate basis
};

/// Throws SingularMetric when g is not positive definite.
LocalGeometry local_geometry(const Chart& chart, const Vec4& x);

Tensor4 to_frame(const Tensor4& t, const Mat4& frame);
Mat4 to_frame(const Mat4& t, const Mat4& frame);
Vec4 to_frame(const Vec4& v, const Mat4& frame);

// Exact gradient and Hessian (coordinate components) of a scalar field.
struct ScalarJet {
  double value = 0.0;
  Vec4 grad = Vec4::Zero();  // d_a f
  Mat4 hess = Mat4::Zero();  // nabla_a nabla_b f
};
ScalarJet scalar_jet(const ScalarField& f, const LocalGeometry& geo);

// Finite-difference partials of a vector of components.
struct Partials {
  std::vector<double> v;
  std::vector<std::array<double, 4>> d;    // d[k][a] = d_a F_k
  std::vector<std::array<double, 16>> dd;  // dd[k][4a+b] = d_a d_b F_k
};
using SampleFn = std::function<std::vector<double>(const Vec4&)>;

/// Central differences at x; every stencil point must lie in the domain
/// (StencilOutOfDomain otherwise). Richardson levels reuse halved steps.
Partials differentiate(const SampleFn& f, const Vec4& x, const Box& domain, const DiffConfig& cfg,
                       bool second = true);

// Covariant derivatives of a rank-r covariant tensor whose components are
// flattened with the first index most significant. The new derivative
// indices are prepended: nabla gives (p, I), nabla2 gives (q, p, I) for
// nabla_q nabla_p T_I.
std::vector<double> nabla(int rank, const Partials& t, const LocalGeometry& geo);
std::vector<double> nabla2(int rank, const Partials& t, const LocalGeometry& geo);
std::vector<double> laplacian(int rank, const Partials& t, const LocalGeometry& geo);

std::vector<double> flatten(const Tensor4& t);
Tensor4 unflatten(const double* data);
std::vector<double> flatten(const Mat4& m);

}  // namespace fourcurv
