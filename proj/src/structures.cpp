#include "fourcurv/structures.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fourcurv {

double structure_lambda(const QuasiEinsteinStructure& s, const LocalGeometry& geo) {
  const ScalarJet f = scalar_jet(*s.f, geo);
  const Mat4 t = geo.ricci + f.hess - s.inv_m() * f.grad * f.grad.transpose();
  return 0.25 * geo.ginv.cwiseProduct(t).sum();
}

StructurePoint structure_at(const QuasiEinsteinStructure& s, const Vec4& x) {
  StructurePoint p;
  p.geo = local_geometry(*s.chart, x);
  p.f = scalar_jet(*s.f, p.geo);
  const Mat4& e = p.geo.frame;
  p.df = to_frame(p.f.grad, e);
  p.hess = to_frame(p.f.hess, e);
  p.ricci = to_frame(p.geo.ricci, e);
  const Mat4 t = p.ricci + p.hess - s.inv_m() * p.df * p.df.transpose();
  p.lambda = 0.25 * t.trace();
  p.validity = (t - p.lambda * Mat4::Identity()).cwiseAbs().maxCoeff();
  return p;
}

std::vector<Vec4> interior_points(const Box& box, int count, unsigned seed, double margin) {
  std::mt19937_64 rng(seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Vec4> pts;
  for (int n = 0; n < count; ++n) {
    Vec4 x;
    for (int a = 0; a < 4; ++a) {
      const double w = box.hi[a] - box.lo[a];
      x[a] = box.lo[a] + w * (margin + (1.0 - 2.0 * margin) * unit());
    }
    pts.push_back(x);
  }
  return pts;
}

QuasiEinsteinStructure gaussian_soliton(double lambda) {
  QuasiEinsteinStructure s;
  s.name = "gaussian";
  s.chart = flat_chart();
  s.f = function_field(
      [lambda](const JetVec& x) {
        Jet2 r;
        for (const auto& c : x) r += c * c;
        return r *= 0.5 * lambda;
      },
      std::to_string(lambda) + "*|x|^2/2");
  s.lambda = lambda;
  return s;
}

QuasiEinsteinStructure conformal_to_einstein(ChartPtr base, ScalarFieldPtr f, std::string name) {
  const std::vector<Vec4> pts = interior_points(base->domain(), 3, 17);
  for (const Vec4& x : pts) {
    const LocalGeometry geo = local_geometry(*base, x);
    const Mat4 ric = to_frame(geo.ricci, geo.frame);
    const Mat4 tl = ric - 0.25 * ric.trace() * Mat4::Identity();
    if (tl.cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, std::abs(geo.scalar)))
      throw NotEinsteinChart("base chart '" + base->name() + "' is not Einstein");
  }
  QuasiEinsteinStructure s;
  s.name = std::move(name);
  s.chart = conformal_chart(base, f);
  s.f = std::move(f);
  s.m = -2.0;
  for (const Vec4& x : pts) {
    const StructurePoint p = structure_at(s, x);
    const double scale = std::max({1.0, p.ricci.cwiseAbs().maxCoeff(), p.hess.cwiseAbs().maxCoeff()});
    if (p.validity > 1e-8 * scale)
      throw TracelessResidualTooLarge("traceless part of Ric + Hess f + df df / 2 is " + std::to_string(p.validity));
  }
  return s;
}

QuasiEinsteinStructure cylinder_soliton(double a) {
  if (!(a > 0.0)) throw InvalidInput("cylinder radius must be positive");
  QuasiEinsteinStructure s;
  s.name = "cylinder";
  s.chart = cylinder_chart(a);
  const double lambda = 1.0 / (a * a);
  s.f = function_field([lambda](const JetVec& x) { return (x[2] * x[2] + x[3] * x[3]) * Jet2(0.5 * lambda); },
                       "|y|^2/(2a^2)");
  s.lambda = lambda;
  return s;
}

QuasiEinsteinStructure einstein_structure(ChartPtr chart, double m) {
  QuasiEinsteinStructure s;
  s.name = chart->name();
  s.chart = std::move(chart);
  s.f = constant_field(0.0);
  s.m = m;
  return s;
}

}  // namespace fourcurv
