#pragma once

// Second-order forward-mode jets in four variables: value, gradient and
// Hessian propagated exactly through arithmetic and elementary functions.

#include <array>
#include <cmath>

namespace fourcurv {

struct Jet2 {
  double v = 0.0;
  std::array<double, 4> g{};
  std::array<std::array<double, 4>, 4> h{};

  Jet2() = default;
  Jet2(double c) : v(c) {}  // NOLINT: constants convert implicitly

  static Jet2 variable(double value, int index) {
    Jet2 j(value);
    j.g[index] = 1.0;
    return j;
  }

  bool is_constant() const {
    for (int i = 0; i < 4; ++i) {
      if (g[i] != 0.0) return false;
      for (int k = 0; k < 4; ++k)
        if (h[i][k] != 0.0) return false;
    }
    return true;
  }

  Jet2& operator+=(const Jet2& o) {
    v += o.v;
    for (int i = 0; i < 4; ++i) {
      g[i] += o.g[i];
      for (int k = 0; k < 4; ++k) h[i][k] += o.h[i][k];
    }
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    v -= o.v;
    for (int i = 0; i < 4; ++i) {
      g[i] -= o.g[i];
      for (int k = 0; k < 4; ++k) h[i][k] -= o.h[i][k];
    }
    return *this;
  }
  Jet2& operator*=(double s) {
    v *= s;
    for (int i = 0; i < 4; ++i) {
      g[i] *= s;
      for (int k = 0; k < 4; ++k) h[i][k] *= s;
    }
    return *this;
  }
};

// phi(a) given phi, phi', phi'' at a.v
inline Jet2 chain(const Jet2& a, double f0, double f1, double f2) {
  Jet2 r(f0);
  for (int i = 0; i < 4; ++i) {
    r.g[i] = f1 * a.g[i];
    for (int k = 0; k < 4; ++k) r.h[i][k] = f1 * a.h[i][k] + f2 * a.g[i] * a.g[k];
  }
  return r;
}

inline Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
inline Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
inline Jet2 operator-(Jet2 a) { return a *= -1.0; }

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r(a.v * b.v);
  for (int i = 0; i < 4; ++i) {
    r.g[i] = a.g[i] * b.v + a.v * b.g[i];
    for (int k = 0; k < 4; ++k)
      r.h[i][k] = a.h[i][k] * b.v + a.v * b.h[i][k] + a.g[i] * b.g[k] + b.g[i] * a.g[k];
  }
  return r;
}

inline Jet2 reciprocal(const Jet2& a) {
  const double iv = 1.0 / a.v;
  return chain(a, iv, -iv * iv, 2.0 * iv * iv * iv);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) {
  if (b.is_constant()) {
    Jet2 r = a;
    return r *= 1.0 / b.v;
  }
  return a * reciprocal(b);
}

inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.v);
  return chain(a, e, e, e);
}
inline Jet2 log(const Jet2& a) { return chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }
inline Jet2 sin(const Jet2& a) { return chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline Jet2 cos(const Jet2& a) { return chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
inline Jet2 sqrt(const Jet2& a) {
  const double s = std::sqrt(a.v);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}
inline Jet2 pow(const Jet2& a, double p) {
  if (p == 0.0) return Jet2(1.0);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return chain(a, std::pow(a.v, p), p * std::pow(a.v, p - 1.0), p * (p - 1.0) * std::pow(a.v, p - 2.0));
}
inline Jet2 pow(const Jet2& a, const Jet2& b) {
  if (b.is_constant()) return pow(a, b.v);
  return exp(b * log(a));
}

}  // namespace fourcurv
