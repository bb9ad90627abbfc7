#include "twp/cutoffs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fft.hpp"
#include "twp/error.hpp"
#include "twp/taylor.hpp"

namespace twp {
namespace {

using J = Jet<kMaxCutoffDerivative>;

// exp(-1/t) for t > 0; flushed to zero once it underflows.
J smooth_h(const J& t) {
  if (t.c[0] <= 0.0 || 1.0 / t.c[0] > 700.0) return J{};
  return exp(J::constant(-1.0) / t);
}

double smooth_h(double t) {
  if (t <= 0.0 || 1.0 / t > 700.0) return 0.0;
  return std::exp(-1.0 / t);
}

J theta_jet(double r) {
  J t = J::variable(r);
  J u = smooth_h(J::constant(1.0) - t);
  J v = smooth_h(t - J::constant(0.5));
  return u / (u + v);
}

}  // namespace

double CutoffProfile::operator()(double tau) const {
  double r = std::abs(tau);
  if (r <= 0.5) return 1.0;
  if (r >= 1.0) return 0.0;
  double u = smooth_h(1.0 - r);
  double v = smooth_h(r - 0.5);
  return u / (u + v);
}

std::array<double, kMaxCutoffDerivative + 1> CutoffProfile::derivatives(double tau) const {
  std::array<double, kMaxCutoffDerivative + 1> d{};
  double r = std::abs(tau);
  if (r <= 0.5) {
    d[0] = 1.0;
    return d;
  }
  if (r >= 1.0) return d;
  J j = theta_jet(r);
  for (int k = 0; k <= kMaxCutoffDerivative; ++k) {
    double v = j.derivative(k);
    d[k] = (tau < 0.0 && (k % 2 == 1)) ? -v : v;
  }
  d[0] = (*this)(tau);
  return d;
}

double CutoffProfile::derivative(double tau, int order) const {
  if (order < 0 || order > kMaxCutoffDerivative)
    throw std::invalid_argument("cutoff derivative order must be in [0, 6]");
  if (order == 0) return (*this)(tau);
  return derivatives(tau)[order];
}

double AnnularProfile::operator()(double tau) const { return theta_(0.5 * tau) - theta_(tau); }

double AnnularProfile::derivative(double tau, int order) const {
  if (order == 0) return (*this)(tau);
  return std::ldexp(theta_.derivative(0.5 * tau, order), -order) - theta_.derivative(tau, order);
}

CutoffProfile make_theta() { return CutoffProfile{}; }

AnnularProfile make_vartheta(const CutoffProfile& theta) { return AnnularProfile(theta); }

PartitionReport partition_check(const AnnularProfile& vartheta, int k_min, int k_max,
                                const std::vector<double>& taus) {
  if (k_min >= k_max) throw std::invalid_argument("partition_check needs k_min < k_max");
  PartitionReport rep;
  const double lo = std::ldexp(1.0, k_min), hi = std::ldexp(1.0, k_max);
  for (double tau : taus) {
    double sum = 0.0;
    for (int k = k_min; k <= k_max; ++k) sum += vartheta(std::ldexp(tau, -k));
    double dev = std::abs(sum - 1.0);
    double r = std::abs(tau);
    if (r >= lo && r <= hi) {
      ++rep.valid_samples;
      if (dev > rep.max_deviation) {
        rep.max_deviation = dev;
        rep.worst_tau = tau;
      }
    } else {
      ++rep.outside_samples;
      rep.max_outside_deviation = std::max(rep.max_outside_deviation, dev);
    }
  }
  return rep;
}

std::vector<double> log_spaced_taus(int k_min, int k_max, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = std::ldexp(1.0, k_min);
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    double e = k_min + (k_max - k_min) * static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = std::exp2(e);
  }
  out.front() = std::ldexp(1.0, k_min);
  out.back() = std::ldexp(1.0, k_max);
  return out;
}

SchwartzProfile::SchwartzProfile(Spectrum spectrum, double support_radius,
                                 std::optional<double> inner_radius, Space space)
    : spectrum_(std::move(spectrum)), radius_(support_radius), inner_(inner_radius),
      space_(std::move(space)) {
  if (!(support_radius > 0.0)) throw std::invalid_argument("support radius must be positive");
  if (inner_ && !(*inner_ > 0.0 && *inner_ < support_radius))
    throw std::invalid_argument("inner radius must lie in (0, support radius)");
}

std::complex<double> SchwartzProfile::space(double t, int order) const {
  if (order == 0 && space_) return space_(t);
  // Trapezoid rule on [-R, R]; the integrand vanishes smoothly at both ends.
  const double r = radius_;
  double cells = std::max(1024.0, 16.0 * r * (std::abs(t) + 4.0));
  std::size_t k = std::size_t{1} << static_cast<int>(std::ceil(std::log2(cells)));
  const double h = 2.0 * r / static_cast<double>(k);
  const double two_pi = 2.0 * std::numbers::pi;
  std::complex<double> acc = 0.0;
  for (std::size_t i = 1; i < k; ++i) {
    double xi = -r + h * static_cast<double>(i);
    if (inner_ && std::abs(xi) < *inner_) continue;
    std::complex<double> w = spectrum_(xi) * std::polar(1.0, two_pi * t * xi);
    if (order > 0) w *= std::pow(std::complex<double>(0.0, two_pi * xi), order);
    acc += w;
  }
  return acc * h;
}

SchwartzProfile SchwartzProfile::dilated(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("dilation factor must be positive");
  Spectrum s = [base = spectrum_, factor](double xi) { return base(xi / factor); };
  Space sp;
  if (space_) sp = [base = space_, factor](double t) { return factor * base(factor * t); };
  std::optional<double> inner;
  if (inner_) inner = *inner_ * factor;
  return SchwartzProfile(std::move(s), radius_ * factor, inner, std::move(sp));
}

SchwartzProfile theta_profile(const CutoffProfile& theta) {
  return SchwartzProfile([theta](double xi) { return std::complex<double>(theta(xi)); }, 1.0);
}

SchwartzProfile vartheta_profile(const AnnularProfile& vartheta) {
  return SchwartzProfile([vartheta](double xi) { return std::complex<double>(vartheta(xi)); }, 2.0,
                         0.5);
}

SeminormEstimate schwartz_seminorm(const SchwartzProfile& phi, int alpha, int beta,
                                   std::size_t mesh_points) {
  if (alpha < 0 || alpha > 3 || beta < 0 || beta > 3)
    throw std::invalid_argument("seminorm indices must lie in [0, 3]");
  if (mesh_points < 64 || (mesh_points & (mesh_points - 1)) != 0 || mesh_points % 4 != 0)
    throw std::invalid_argument("mesh must be a power of two >= 64");

  const std::size_t m = mesh_points;
  const double r = phi.support_radius();
  const double dxi = 8.0 * r / static_cast<double>(m);  // 4x oversampled band
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<std::complex<double>> buf(m);
  for (std::size_t k = 0; k < m; ++k) {
    double xi = (static_cast<double>(k) - static_cast<double>(m / 2)) * dxi;
    std::complex<double> v = std::abs(xi) <= r ? phi.spectrum(xi) : 0.0;
    if (beta > 0) v *= std::pow(std::complex<double>(0.0, two_pi * xi), beta);
    buf[k] = (k % 2 ? -v : v) * dxi;
  }
  detail::fft_1d(buf.data(), static_cast<int>(m), detail::FftSign::backward);

  SeminormEstimate est;
  est.mesh = 1.0 / (static_cast<double>(m) * dxi);
  est.half_width = 0.5 / dxi;
  est.samples = m;
  double tail = 0.0;
  std::size_t best = 0;
  for (std::size_t j = 0; j < m; ++j) {
    double t = (static_cast<double>(j) - static_cast<double>(m / 2)) * est.mesh;
    double v = std::abs(j % 2 ? -buf[j] : buf[j]) * std::pow(std::abs(t), alpha);
    if (v > est.value) {
      est.value = v;
      best = j;
    }
    if (std::abs(t) >= 0.95 * est.half_width) tail = std::max(tail, v);
  }
  est.argmax = (static_cast<double>(best) - static_cast<double>(m / 2)) * est.mesh;

  // Refine around the mesh maximum by direct quadrature.
  for (int i = -16; i <= 16; ++i) {
    double t = est.argmax + est.mesh * i / 16.0;
    double v = std::abs(phi.space(t, beta)) * std::pow(std::abs(t), alpha);
    if (v > est.value) {
      est.value = v;
      est.argmax = t;
    }
  }
  est.tail_ratio = est.value > 0.0 ? tail / est.value : 0.0;
  if (est.tail_ratio > 0.01)
    throw NonConvergence("seminorm tail at |t| = " + std::to_string(est.half_width) +
                         " is " + std::to_string(est.tail_ratio) + " of the sup");
  return est;
}

ModulatedProfile make_modulated(int n, std::optional<int> annulus, int a) {
  if (a < 0) throw std::invalid_argument("shift exponent must be nonnegative");
  const double w = std::ldexp(std::numbers::pi, -a - 4) * n;
  if (!annulus) {
    const double s = std::ldexp(1.0, -a - 4);
    CutoffProfile theta;
    SchwartzProfile p(
        [theta, s, w](double tau) { return theta(s * tau) * std::polar(1.0, w * tau); },
        std::ldexp(1.0, a + 4));
    return ModulatedProfile{n, std::nullopt, a, std::move(p)};
  }
  int i = *annulus;
  if (i < -1 || i > 1) throw std::invalid_argument("annulus index must be -1, 0 or 1");
  AnnularProfile vartheta;
  const double s = std::ldexp(1.0, -i);
  SchwartzProfile p(
      [vartheta, s, w](double tau) { return vartheta(s * tau) * std::polar(1.0, w * tau); },
      std::ldexp(2.0, i), std::ldexp(0.5, i));
  return ModulatedProfile{n, i, a, std::move(p)};
}

}  // namespace twp
