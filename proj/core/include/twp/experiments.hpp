#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twp/config.hpp"
#include "twp/decompose.hpp"
#include "twp/operators.hpp"
#include "twp/report.hpp"

namespace twp {

struct RatioRow {
  int trial = 0;
  int dilation = 0;
  double lambda = 0.0;   // carrier frequency in probe sweeps
  double ratio = 0.0;
  double norm_t = 0.0;   // ||T(f,g)||_{L^r_y W^{s,r}_x}
  double norm_f = 0.0;   // ||f||_{L^p}
  double norm_g = 0.0;   // ||g||_{W^{s,q}}
  double nu = 0.0;       // probe diagnostic symbol at the carriers
  std::vector<std::string> flags;
};

struct RatioReport {
  std::string label;  // "in-range" or "outside boundedness hypotheses"
  std::vector<RatioRow> rows;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double max_over_min = 0.0;
  bool all_finite = true;
  std::optional<double> fitted_exponent;
  std::vector<double> skipped_lambdas;
  Diagnostics diagnostics;
};

// Fraction of spectral energy with |xi|_inf >= 3/4 Nyquist.
double nyquist_mass(const GridFunction2D& f);

double mixed_ratio(const GridFunction2D& t, const GridFunction2D& f, const GridFunction2D& g,
                   const ExponentTuple& e, double* norm_t = nullptr, double* norm_f = nullptr,
                   double* norm_g = nullptr);

// Ratio of ||T(f,g)||_{L^r_y(W^{s,r}_x)} to ||f||_{L^p} ||g||_{W^{s,q}} across
// the ensemble and the dilation sweep. Throws HypothesisViolation outside probe
// mode when the exponents or the symbol's support fail the hypotheses.
RatioReport ratio_sweep(const ExperimentConfig& cfg);

// Least-squares slope of log(ratio) against log(lambda); ratios floored at 1e-300.
std::optional<double> fit_growth_exponent(const std::vector<double>& lambdas,
                                          const std::vector<double>& ratios);

RatioReport prop1_probe(const TwistedSymbol& m, const ExperimentConfig& cfg);

struct RecoveryRow {
  double epsilon = 0.0;
  cplx value;
  double abs_error = 0.0;
  double rel_error = 0.0;
};

struct RecoveryReport {
  cplx target;
  std::vector<RecoveryRow> rows;
  bool strictly_decreasing = false;
  bool non_convergence = false;
};

// <T_m(f_eps, g_eps), h_eps> against m(xi0_1, eta0_2), with f, g built from
// lemma_phi and h from lemma_psi carrying the eps^2 prefactor.
RecoveryReport recover_symbol(const TwistedSymbol& m, const GridGeometry& geo,
                              const RecoverySpec& spec);

struct LeibnizReport {
  int order = 0;
  double lhs_norm = 0.0;
  double rel_error = 0.0;
};

// Spectral d^s_x of the paraproduct against the product-rule expansion.
LeibnizReport leibniz_check(const ParaproductSpec& spec, const GridFunction2D& f,
                            const GridFunction2D& g, int s);

// Paraproduct used by the Leibniz check: theta / vartheta profiles over the
// default scale range with unit or seeded random lambda.
ParaproductSpec leibniz_spec(const GridGeometry& geo, const std::string& lambda, std::uint64_t seed);

nlohmann::json to_json(const RatioReport& r);
CsvTable to_csv(const RatioReport& r);
nlohmann::json to_json(const RecoveryReport& r);
CsvTable to_csv(const RecoveryReport& r);
nlohmann::json to_json(const Diagnostics& d);

}  // namespace twp
