#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twp/grid.hpp"

namespace twp {

struct SymbolTraits {
  std::string name = "symbol";
  // m vanishes wherever |tau1| > c |tau2|; nullopt means unrestricted.
  std::optional<double> support_constant;
  bool homogeneous = false;
  // Value used at (0, 0). Homogeneous symbols default to 0 there.
  std::optional<cplx> origin_value;
  // Optional bounds C_{b1,b2} on |d^b1_1 d^b2_2 m| |tau|^{b1+b2}.
  std::map<std::pair<int, int>, double> derivative_bounds;
};

// m(tau1, tau2): tau1 pairs with the first frequency of f, tau2 with the
// second frequency of g.
class TwistedSymbol {
 public:
  using Evaluator = std::function<cplx(double, double)>;

  TwistedSymbol(Evaluator eval, SymbolTraits traits = {});

  cplx operator()(double tau1, double tau2) const;
  const SymbolTraits& traits() const noexcept { return traits_; }
  const std::string& name() const noexcept { return traits_.name; }
  std::optional<double> support_constant() const noexcept { return traits_.support_constant; }
  bool homogeneous() const noexcept { return traits_.homogeneous; }

  // Row-major table m(xi_p, eta_q) over grid frequencies in FFT order, with
  // the -N/2 slot zeroed on both axes. Cached per geometry.
  std::shared_ptr<const std::vector<cplx>> grid_table(const GridGeometry& geo) const;

  // Largest |m| found where |tau1| > c |tau2| (0 when unrestricted), over the
  // grid frequencies of geo plus a log-polar sample.
  double support_leakage(const GridGeometry& geo) const;
  // Throws SupportViolation when the leakage exceeds tol.
  void check_support(const GridGeometry& geo, double tol = 1e-12) const;

 private:
  struct Cache;
  Evaluator eval_;
  SymbolTraits traits_;
  std::shared_ptr<Cache> cache_;
};

TwistedSymbol zero_symbol();
TwistedSymbol constant_symbol(cplx value);
// sum_k theta(2^{1-k} tau1 / c) vartheta(2^{-k} tau2) over all integers k.
TwistedSymbol cone_symbol(double c);
double cone_value(double c, double tau1, double tau2);
// Indicator of |tau1| <= c |tau2| / 2; discontinuous.
TwistedSymbol hard_cone_symbol(double c);
TwistedSymbol product_symbol(const TwistedSymbol& a, const TwistedSymbol& b);

// sigma(x, y, tau1, tau2), either general or a finite sum of
// amplitude_j(x, y) * m_j(tau1, tau2).
class SpatialSymbol {
 public:
  using Evaluator = std::function<cplx(double, double, double, double)>;
  using Amplitude = std::function<cplx(double, double)>;
  struct Term {
    Amplitude amplitude;
    TwistedSymbol symbol;
  };

  SpatialSymbol(Evaluator eval, std::optional<double> support_constant, std::string name = "sigma");
  explicit SpatialSymbol(std::vector<Term> terms, std::string name = "sigma");
  static SpatialSymbol from_symbol(const TwistedSymbol& m);

  cplx operator()(double x, double y, double tau1, double tau2) const;
  bool separable() const noexcept { return !terms_.empty(); }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::optional<double> support_constant() const noexcept { return support_; }
  const std::string& name() const noexcept { return name_; }
  // Largest |sigma| where |tau1| > c |tau2|, over the grid points and frequencies.
  double support_leakage(const GridGeometry& geo) const;

 private:
  Evaluator eval_;
  std::vector<Term> terms_;
  std::optional<double> support_;
  std::string name_;
};

// 1 + depth * sin(2 pi kx x / L) cos(2 pi ky y / L).
SpatialSymbol::Amplitude sinusoidal_amplitude(double depth, double l, int kx = 1, int ky = 1);

}  // namespace twp
