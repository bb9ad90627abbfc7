#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace twp {

inline constexpr int kMaxCutoffDerivative = 6;

// Smooth even step: 1 on |t| <= 1/2, 0 on |t| >= 1, monotone in between.
class CutoffProfile {
 public:
  double operator()(double tau) const;
  // Derivative of order 0..6.
  double derivative(double tau, int order) const;
  std::array<double, kMaxCutoffDerivative + 1> derivatives(double tau) const;
};

// theta(tau / 2) - theta(tau); supported in 1/2 <= |tau| <= 2.
class AnnularProfile {
 public:
  AnnularProfile() = default;
  explicit AnnularProfile(CutoffProfile theta) : theta_(theta) {}
  double operator()(double tau) const;
  double derivative(double tau, int order) const;
  const CutoffProfile& theta() const noexcept { return theta_; }

 private:
  CutoffProfile theta_;
};

CutoffProfile make_theta();
AnnularProfile make_vartheta(const CutoffProfile& theta);

struct PartitionReport {
  double max_deviation = 0.0;       // over samples with 2^k_min <= |tau| <= 2^k_max
  double worst_tau = 0.0;
  std::size_t valid_samples = 0;
  double max_outside_deviation = 0.0;  // samples outside the valid range
  std::size_t outside_samples = 0;
};

PartitionReport partition_check(const AnnularProfile& vartheta, int k_min, int k_max,
                                const std::vector<double>& taus);

// n log-spaced points covering 2^k_min <= tau <= 2^k_max.
std::vector<double> log_spaced_taus(int k_min, int k_max, std::size_t count);

// A band-limited profile given by its spectrum, with the space side obtained by
// numerical inverse transform unless an analytic form is supplied.
class SchwartzProfile {
 public:
  using Spectrum = std::function<std::complex<double>(double)>;
  using Space = std::function<std::complex<double>(double)>;

  SchwartzProfile(Spectrum spectrum, double support_radius,
                  std::optional<double> inner_radius = std::nullopt,
                  Space space = nullptr);

  std::complex<double> spectrum(double xi) const { return spectrum_(xi); }
  const Spectrum& spectrum_fn() const noexcept { return spectrum_; }
  double support_radius() const noexcept { return radius_; }
  std::optional<double> inner_radius() const noexcept { return inner_; }
  bool has_analytic_space() const noexcept { return static_cast<bool>(space_); }

  // phi(t) and its derivatives, by analytic form when available, else by
  // quadrature of the spectrum.
  std::complex<double> space(double t, int order = 0) const;

  // 2^s phi(2^s t) has spectrum phi_hat(2^-s xi).
  SchwartzProfile dilated(double factor) const;

 private:
  Spectrum spectrum_;
  double radius_;
  std::optional<double> inner_;
  Space space_;
};

SchwartzProfile theta_profile(const CutoffProfile& theta = {});
SchwartzProfile vartheta_profile(const AnnularProfile& vartheta = {});

struct SeminormEstimate {
  double value = 0.0;
  double argmax = 0.0;
  double half_width = 0.0;   // t ranges over [-T, T]
  double mesh = 0.0;         // spacing of the sample mesh
  std::size_t samples = 0;
  double tail_ratio = 0.0;   // boundary value relative to the sup
};

// sup_t |t|^alpha |d^beta phi(t)|, 0 <= alpha, beta <= 3.
SeminormEstimate schwartz_seminorm(const SchwartzProfile& phi, int alpha, int beta,
                                   std::size_t mesh_points = 1u << 14);

struct ModulatedProfile {
  int n = 0;
  std::optional<int> annulus;  // set on the psi side, in {-1, 0, 1}
  int a = 0;
  SchwartzProfile profile;
};

// phi side: theta(2^{-a-4} tau) e^{i pi 2^{-a-4} n tau};
// psi side: vartheta(2^{-i} tau) e^{i pi 2^{-a-4} n tau}.
ModulatedProfile make_modulated(int n, std::optional<int> annulus, int a);

}  // namespace twp
