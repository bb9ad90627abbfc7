#pragma once

#include <map>
#include <string>
#include <vector>

#include "twp/cutoffs.hpp"
#include "twp/grid.hpp"
#include "twp/symbol.hpp"

namespace twp {

struct NyquistWarning {
  Axis axis = Axis::x;
  int k = 0;
  // Fraction of the L1 mass of the rescaled spectrum lying beyond Nyquist.
  double clipped_mass = 0.0;
  std::string context;
};

struct Diagnostics {
  std::vector<NyquistWarning> nyquist;
  std::vector<std::string> notes;
};

struct ScaleRange {
  int k_min = 0;
  int k_max = 0;
  int size() const noexcept { return k_max - k_min + 1; }
  bool operator==(const ScaleRange&) const = default;
};

// k in [1 - log2 L, log2(N / (8 L))]: every rescaled annulus 2^{k+1} sits
// under Nyquist.
ScaleRange default_scale_range(const GridGeometry& geo);

// Filter f along one axis by the multiplier profile_hat(2^{-k} xi).
GridFunction2D partial_convolution(const GridFunction2D& f, Axis axis,
                                   const SchwartzProfile& profile, int k,
                                   Diagnostics* diag = nullptr);

GridFunction2D littlewood_paley(const GridFunction2D& f, Axis axis, int k,
                                Diagnostics* diag = nullptr);

struct ParaproductSpec {
  SchwartzProfile phi;
  SchwartzProfile psi;
  std::map<int, cplx> lambda;  // scale k -> lambda_k

  double lambda_sup() const;
};

// Throws std::invalid_argument unless psi has an annular spectrum of dyadic
// width (outer radius <= 4 * inner radius).
void validate(const ParaproductSpec& spec);

// sum_k lambda_k (P^{phi_k}_x f)(P^{psi_k}_y g).
GridFunction2D apply_paraproduct(const ParaproductSpec& spec, const GridFunction2D& f,
                                 const GridFunction2D& g, Diagnostics* diag = nullptr);

// m(tau1, tau2) = sum_k lambda_k phi_hat(2^-k tau1) psi_hat(2^-k tau2).
TwistedSymbol induced_symbol(const ParaproductSpec& spec);

// T_m(f, g)(x, y) = sum_{xi, eta} m(xi1, eta2) f_hat(xi) g_hat(eta) e^{2 pi i ...},
// regrouped through one-axis transforms. O(N^3 log N).
GridFunction2D apply_twisted_multiplier(const TwistedSymbol& m, const GridFunction2D& f,
                                        const GridFunction2D& g);

// T_sigma with an (x, y)-dependent symbol. Separable symbols reduce to T_m
// calls; general ones cost O(N^4).
GridFunction2D apply_spatial_multiplier(const SpatialSymbol& sigma, const GridFunction2D& f,
                                        const GridFunction2D& g);

}  // namespace twp
