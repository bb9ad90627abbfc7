#pragma once

#include <array>
#include <cmath>

namespace twp {

// Truncated Taylor series c[0] + c[1] e + ... + c[D] e^D. Derivative of
// order k is k! * c[k].
template <int D>
struct Jet {
  std::array<double, D + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(double v) {
    Jet j;
    j.c[0] = v;
    if constexpr (D >= 1) j.c[1] = 1.0;
    return j;
  }

  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f * c[k];
  }

  friend Jet operator+(Jet a, const Jet& b) {
    for (int i = 0; i <= D; ++i) a.c[i] += b.c[i];
    return a;
  }
  friend Jet operator-(Jet a, const Jet& b) {
    for (int i = 0; i <= D; ++i) a.c[i] -= b.c[i];
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= D; ++i)
      for (int k = 0; k <= i; ++k) r.c[i] += a.c[k] * b.c[i - k];
    return r;
  }
  friend Jet operator*(double s, Jet a) {
    for (auto& v : a.c) v *= s;
    return a;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= D; ++i) {
      double v = a.c[i];
      for (int k = 1; k <= i; ++k) v -= b.c[k] * r.c[i - k];
      r.c[i] = v / b.c[0];
    }
    return r;
  }
};

template <int D>
Jet<D> exp(const Jet<D>& a) {
  Jet<D> r;
  r.c[0] = std::exp(a.c[0]);
  for (int i = 1; i <= D; ++i) {
    double v = 0.0;
    for (int k = 1; k <= i; ++k) v += k * a.c[k] * r.c[i - k];
    r.c[i] = v / i;
  }
  return r;
}

}  // namespace twp
