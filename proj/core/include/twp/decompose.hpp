#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "twp/operators.hpp"
#include "twp/symbol.hpp"

namespace twp {

// Smallest a >= 0 with c <= 2^a.
int shift_exponent(double c);

// m_k = m(tau) theta(2^{-k-a-3} tau1) vartheta(2^{-k} tau2).
class DyadicSlice {
 public:
  DyadicSlice(std::shared_ptr<const TwistedSymbol> m, int k, int a);

  cplx operator()(double tau1, double tau2) const;
  int k() const noexcept { return k_; }
  int a() const noexcept { return a_; }
  // Half-width 2^{k+a+4} of the square on which m_k is expanded.
  double box_half_width() const noexcept { return std::ldexp(1.0, k_ + a_ + 4); }
  double tau1_extent() const noexcept { return std::ldexp(1.0, k_ + a_ + 3); }
  double tau2_extent() const noexcept { return std::ldexp(1.0, k_ + 1); }
  const TwistedSymbol& symbol() const noexcept { return *m_; }

 private:
  std::shared_ptr<const TwistedSymbol> m_;
  int k_;
  int a_;
};

// Requires a support constant c with a == shift_exponent(c); verifies the
// support condition on the slice region and throws SupportViolation otherwise.
DyadicSlice slice_symbol(std::shared_ptr<const TwistedSymbol> m, int k, int a);

struct FourierSeriesCoeffs {
  int k = 0;
  int n_max = 0;
  std::size_t resolution = 0;  // quadrature points per axis
  std::vector<cplx> table;     // (2 n_max + 1)^2, row n1, column n2

  cplx at(int n1, int n2) const {
    const int side = 2 * n_max + 1;
    return table[static_cast<std::size_t>((n1 + n_max) * side + (n2 + n_max))];
  }
  cplx& at(int n1, int n2) {
    const int side = 2 * n_max + 1;
    return table[static_cast<std::size_t>((n1 + n_max) * side + (n2 + n_max))];
  }
};

// Mean of m_k(tau) e^{-i pi 2^{-k-a-4} n.tau} over an M x M periodic grid on
// the expansion box; no accuracy check.
FourierSeriesCoeffs fourier_coefficients_fixed(const DyadicSlice& slice, int n_max, std::size_t m);

// As above, then recomputes at 2M and throws QuadratureResolutionError when
// any coefficient moves by more than tol. Requires M >= 4 (2 n_max + 1).
FourierSeriesCoeffs fourier_coefficients(const DyadicSlice& slice, int n_max, std::size_t m,
                                         double tol = 1e-8);

// Doubles M from max(8 (2 n_max + 1), 128) until consecutive tables agree to
// tol; throws NonConvergence past max_resolution.
FourierSeriesCoeffs fourier_coefficients_auto(const DyadicSlice& slice, int n_max,
                                              double tol = 1e-8,
                                              std::size_t max_resolution = 1u << 14);

std::size_t default_resolution(int n_max);

struct DecompositionOptions {
  int n_max = 8;
  std::optional<ScaleRange> scales;   // default: grid_scale_range
  std::optional<std::size_t> resolution;  // fixed M; default adaptive
  double tolerance = 1e-8;
};

struct Decomposition {
  int a = 0;
  ScaleRange scales;
  int n_max = 0;
  std::vector<int> i_list{-1, 0, 1};
  std::map<int, FourierSeriesCoeffs> coeffs;
  double error_budget = 0.0;
  std::shared_ptr<const TwistedSymbol> source;  // absent after import

  std::size_t term_count() const { return i_list.size() * static_cast<std::size_t>((2 * n_max + 1) * (2 * n_max + 1)); }
};

// Scales whose slices meet a grid frequency: 2^{k-1} < Nyquist and 2^{k+1} > 1/L.
ScaleRange grid_scale_range(const GridGeometry& geo);

Decomposition decompose(std::shared_ptr<const TwistedSymbol> m, const GridGeometry& geo,
                        const DecompositionOptions& opts = {});
Decomposition decompose(std::shared_ptr<const TwistedSymbol> m, ScaleRange scales,
                        const DecompositionOptions& opts = {});

// Truncated synthesis sum_i sum_n sum_k kappa phi_hat^{(n1)}(2^-k tau1) psi_hat^{(n2,i)}(2^-k tau2).
cplx reconstructed_value(const Decomposition& d, double tau1, double tau2);
TwistedSymbol reconstructed_symbol(const Decomposition& d);

struct ReconstructionReport {
  double sup_error = 0.0;
  double worst_tau1 = 0.0;
  double worst_tau2 = 0.0;
  std::size_t samples = 0;
};

// Sup |m - reconstruction| over |tau1| <= 2c |tau2| with 2^{k_min} <= |tau2| <= 2^{k_max}.
ReconstructionReport reconstruct_symbol(const Decomposition& d, std::size_t radial = 48,
                                        std::size_t angular = 97);

std::vector<ParaproductSpec> synthesize_paraproducts(const Decomposition& d);

// Sum of the synthesized paraproducts, sharing the filtered inputs.
GridFunction2D apply_decomposed(const Decomposition& d, const GridFunction2D& f,
                                const GridFunction2D& g, Diagnostics* diag = nullptr);

struct DecayReport {
  std::vector<double> weighted;  // R -> max_{|n1|+|n2|=R} |kappa| (1+R)^10
  std::vector<double> raw;       // R -> max_{|n1|+|n2|=R} |kappa|
  double median = 0.0;
  double max_over_median = 0.0;
  bool flagged = false;          // some entry exceeds twice the median
};

// Over R <= r_max (default 2 n_max).
DecayReport decay_report(const FourierSeriesCoeffs& coeffs, std::optional<int> r_max = std::nullopt);
// Entrywise maximum over scales.
DecayReport decay_report(const Decomposition& d, std::optional<int> r_max = std::nullopt);

nlohmann::json to_json(const Decomposition& d);
Decomposition decomposition_from_json(const nlohmann::json& j);

}  // namespace twp
