#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace petrov::ad {

/// Forward-mode dual number carrying up to kDirections partial derivatives.
/// Catalog charts have at most four coordinates.
struct Dual {
  static constexpr int kDirections = 4;

  double v = 0.0;
  std::array<double, kDirections> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT(google-explicit-constructor)

  static Dual variable(double value, int direction) {
    Dual x(value);
    x.d[direction] = 1.0;
    return x;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int k = 0; k < kDirections; ++k) d[k] += o.d[k];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int k = 0; k < kDirections; ++k) d[k] -= o.d[k];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int k = 0; k < kDirections; ++k) d[k] = d[k] * o.v + v * o.d[k];
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.v;
    for (int k = 0; k < kDirections; ++k) d[k] = (d[k] - v * inv * o.d[k]) * inv;
    v *= inv;
    return *this;
  }
};

inline Dual operator-(Dual a) {
  a.v = -a.v;
  for (auto& x : a.d) x = -x;
  return a;
}
inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }

// Applies a scalar function with derivative fp at a.v.
inline Dual chain(const Dual& a, double value, double fp) {
  Dual r(value);
  for (int k = 0; k < Dual::kDirections; ++k) r.d[k] = fp * a.d[k];
  return r;
}

inline Dual sin(const Dual& a) { return chain(a, std::sin(a.v), std::cos(a.v)); }
inline Dual cos(const Dual& a) { return chain(a, std::cos(a.v), -std::sin(a.v)); }
inline Dual sqrt(const Dual& a) {
  const double r = std::sqrt(a.v);
  return chain(a, r, 0.5 / r);
}

inline double value(double x) { return x; }
inline double value(const Dual& x) { return x.v; }

using DualVector = std::vector<Dual>;

}  // namespace petrov::ad
