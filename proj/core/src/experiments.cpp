#include "twp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "twp/error.hpp"
#include "twp/generator.hpp"

namespace twp {
namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t global, std::uint64_t local, int trial) {
  return splitmix(splitmix(global) ^ splitmix(local + 0x51ed2701ull) ^
                  static_cast<std::uint64_t>(trial));
}

GridFunction2D sample_flagged(const Generator& gen, const GridGeometry& geo,
                              std::vector<std::string>& flags, const char* name) {
  try {
    return sample(gen, geo);
  } catch (const SupportViolation&) {
    flags.push_back(std::string(name) + "_support_violation");
    Generator relaxed = gen;
    relaxed.check_support = false;
    return sample(relaxed, geo);
  }
}

void summarise(RatioReport& rep) {
  if (rep.rows.empty()) return;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0.0;
  for (const auto& r : rep.rows) {
    if (!std::isfinite(r.ratio) || r.ratio < 0.0) rep.all_finite = false;
    rep.min_ratio = std::min(rep.min_ratio, r.ratio);
    rep.max_ratio = std::max(rep.max_ratio, r.ratio);
  }
  rep.max_over_min = rep.min_ratio > 0.0 ? rep.max_ratio / rep.min_ratio
                                         : (rep.max_ratio > 0.0 ? INFINITY : 0.0);
}

const char* kProbeLabel = "outside boundedness hypotheses";

}  // namespace

double nyquist_mass(const GridFunction2D& f) {
  const auto& geo = f.geometry();
  auto spec = forward_transform(f);
  const double edge = 0.75 * geo.nyquist();
  double total = 0.0, outer = 0.0;
  for (std::size_t j = 0; j < geo.n(); ++j)
    for (std::size_t l = 0; l < geo.n(); ++l) {
      double w = std::norm(spec(j, l));
      total += w;
      if (std::abs(geo.frequency(j)) >= edge || std::abs(geo.frequency(l)) >= edge) outer += w;
    }
  return total > 0.0 ? outer / total : 0.0;
}

double mixed_ratio(const GridFunction2D& t, const GridFunction2D& f, const GridFunction2D& g,
                   const ExponentTuple& e, double* norm_t, double* norm_f, double* norm_g) {
  double nt = mixed_sobolev_norm(t, e.s, e.r);
  double nf = lp_norm(f, e.p);
  double ng = sobolev_norm(g, e.s, e.q);
  if (norm_t) *norm_t = nt;
  if (norm_f) *norm_f = nf;
  if (norm_g) *norm_g = ng;
  double den = nf * ng;
  return den > 0.0 ? nt / den : 0.0;
}

RatioReport ratio_sweep(const ExperimentConfig& cfg) {
  const auto geo = cfg.geometry();
  RatioReport rep;
  rep.label = cfg.probe ? kProbeLabel : "in-range";
  auto gate = exponent_gate(cfg.exponents);
  const TwistedSymbol m = build_symbol(cfg.symbol);
  auto sigma = build_spatial_symbol(cfg.symbol, geo);
  if (!cfg.probe) {
    if (!gate.valid) throw HypothesisViolation("exponent gate: " + gate.reason);
    if (!m.support_constant())
      throw HypothesisViolation("symbol '" + m.name() + "' declares no support constant");
    try {
      m.check_support(geo);
    } catch (const SupportViolation& e) {
      throw HypothesisViolation(e.what());
    }
  } else if (!gate.valid) {
    rep.diagnostics.notes.push_back("exponent gate: " + gate.reason);
  }

  std::string op = cfg.sweep.op;
  if (sigma && op == "multiplier") op = "spatial";
  if (op == "spatial" && !sigma) sigma = SpatialSymbol::from_symbol(m);
  std::optional<Decomposition> dec;
  if (op == "decomposed") {
    DecompositionOptions o;
    o.n_max = cfg.decomposition.n_max;
    o.resolution = cfg.decomposition.resolution;
    dec = decompose(std::make_shared<const TwistedSymbol>(m), geo, o);
    rep.diagnostics.notes.push_back("decomposition error budget " + format_double(dec->error_budget));
  }

  for (int t = 0; t < cfg.ensemble.trials; ++t) {
    Generator fg = cfg.ensemble.f, gg = cfg.ensemble.g;
    fg.seed = trial_seed(cfg.seed, cfg.ensemble.f.seed, 2 * t);
    gg.seed = trial_seed(cfg.seed, cfg.ensemble.g.seed, 2 * t + 1);
    for (int a : cfg.sweep.dilations) {
      RatioRow row;
      row.trial = t;
      row.dilation = a;
      auto f = sample_flagged(dilate_generator(fg, a), geo, row.flags, "f");
      auto g = sample_flagged(dilate_generator(gg, a), geo, row.flags, "g");
      double nm = std::max(nyquist_mass(f), nyquist_mass(g));
      if (nm > 1e-6) row.flags.push_back("nyquist_mass=" + format_double(nm));
      GridFunction2D out = op == "spatial"      ? apply_spatial_multiplier(*sigma, f, g)
                           : op == "decomposed" ? apply_decomposed(*dec, f, g)
                                                : apply_twisted_multiplier(m, f, g);
      row.ratio = mixed_ratio(out, f, g, cfg.exponents, &row.norm_t, &row.norm_f, &row.norm_g);
      rep.rows.push_back(std::move(row));
    }
  }
  summarise(rep);
  return rep;
}

std::optional<double> fit_growth_exponent(const std::vector<double>& lambdas,
                                          const std::vector<double>& ratios) {
  if (lambdas.size() != ratios.size() || lambdas.size() < 2) return std::nullopt;
  const double n = static_cast<double>(lambdas.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    double x = std::log(lambdas[i]);
    double y = std::log(std::max(ratios[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double den = n * sxx - sx * sx;
  if (den == 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / den;
}

RatioReport prop1_probe(const TwistedSymbol& m, const ExperimentConfig& cfg) {
  const auto geo = cfg.geometry();
  RatioReport rep;
  rep.label = kProbeLabel;
  const auto& e = cfg.exponents;
  const double w = cfg.prop1.width;
  if (!(w > 0.0)) throw InvalidConfig("probe packet width must be positive");
  // Gaussian spectrum exp(-2 pi^2 w^2 d^2) is below 1e-16 past this distance.
  const double spread = std::sqrt(16.0 * std::log(10.0) / (2.0 * std::numbers::pi * std::numbers::pi)) / w;
  const auto& eta = cfg.prop1.eta0;
  const double c4 = 4.0 * std::numbers::pi * std::numbers::pi;

  Generator g;
  g.kind = GeneratorKind::wave_packet;
  g.center = {0.5 * geo.l(), 0.5 * geo.l()};
  g.width = w;
  g.modulation = eta;
  if (std::max(std::abs(eta[0]), std::abs(eta[1])) + spread > geo.nyquist())
    throw InvalidConfig("probe carrier eta0 is too close to Nyquist");
  auto gs = sample(g, geo);

  std::vector<double> lams, ratios;
  int idx = 0;
  for (double lam : cfg.prop1.lambdas) {
    if (std::abs(lam) + spread > geo.nyquist()) {
      rep.skipped_lambdas.push_back(lam);
      continue;
    }
    Generator f = g;
    f.modulation = {lam, 0.0};
    auto fs = sample(f, geo);
    RatioRow row;
    row.trial = idx++;
    row.lambda = lam;
    auto out = apply_twisted_multiplier(m, fs, gs);
    row.ratio = mixed_ratio(out, fs, gs, e, &row.norm_t, &row.norm_f, &row.norm_g);
    double num = 1.0 + c4 * (lam + eta[0]) * (lam + eta[0]);
    double den = 1.0 + c4 * (eta[0] * eta[0] + eta[1] * eta[1]);
    row.nu = std::abs(m(lam, eta[1])) * std::pow(num / den, 0.5 * e.s);
    lams.push_back(lam);
    ratios.push_back(row.ratio);
    rep.rows.push_back(std::move(row));
  }
  rep.fitted_exponent = fit_growth_exponent(lams, ratios);
  summarise(rep);
  return rep;
}

RecoveryReport recover_symbol(const TwistedSymbol& m, const GridGeometry& geo,
                              const RecoverySpec& spec) {
  if (spec.epsilons.empty()) throw InvalidConfig("recovery needs at least one epsilon");
  const auto& xi = spec.xi0;
  const auto& eta = spec.eta0;
  const std::array<double, 2> zeta{xi[0] + eta[0], xi[1] + eta[1]};
  const double nyq = geo.nyquist();
  for (double eps : spec.epsilons) {
    if (!(eps > 0.0)) throw InvalidConfig("epsilon must be positive");
    for (int c = 0; c < 2; ++c) {
      if (std::abs(xi[c]) + eps > nyq || std::abs(eta[c]) + eps > nyq ||
          std::abs(zeta[c]) + 2.0 * eps > nyq)
        throw InvalidConfig("recovery frequencies exceed Nyquist at epsilon " + format_double(eps));
    }
  }
  RecoveryReport rep;
  rep.target = m(xi[0], eta[1]);
  const double h2 = geo.spacing() * geo.spacing();
  const GridShift shift{spec.shift_j, spec.shift_l};
  for (double eps : spec.epsilons) {
    Generator f;
    f.kind = GeneratorKind::lemma_phi;
    f.center = {0.0, 0.0};
    f.epsilon = eps;
    f.check_support = false;
    Generator g = f;
    f.modulation = xi;
    g.modulation = eta;
    Generator h = f;
    h.kind = GeneratorKind::lemma_psi;
    h.modulation = zeta;
    h.amplitude = eps * eps;
    auto fs = translate(sample(f, geo), shift);
    auto gs = translate(sample(g, geo), shift);
    auto hs = translate(sample(h, geo), shift);
    auto t = apply_twisted_multiplier(m, fs, gs);
    cplx pairing = 0.0;
    for (std::size_t i = 0; i < t.values().size(); ++i)
      pairing += t.values()[i] * std::conj(hs.values()[i]);
    pairing *= h2;
    RecoveryRow row;
    row.epsilon = eps;
    row.value = pairing;
    row.abs_error = std::abs(pairing - rep.target);
    row.rel_error = std::abs(rep.target) > 0.0 ? row.abs_error / std::abs(rep.target) : row.abs_error;
    rep.rows.push_back(row);
  }
  rep.strictly_decreasing = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (!(rep.rows[i].abs_error < rep.rows[i - 1].abs_error)) rep.strictly_decreasing = false;
  rep.non_convergence = !rep.strictly_decreasing && rep.rows.back().abs_error > 1e-10;
  return rep;
}

LeibnizReport leibniz_check(const ParaproductSpec& spec, const GridFunction2D& f,
                            const GridFunction2D& g, int s) {
  if (s < 1 || s > 3) throw std::invalid_argument("Leibniz order must be 1, 2 or 3");
  auto lhs = partial_derivative(apply_paraproduct(spec, f, g), Axis::x, s);
  GridFunction2D rhs(f.geometry());
  double binom = 1.0;
  for (int beta = 0; beta <= s; ++beta) {
    if (beta > 0) binom = binom * (s - beta + 1) / beta;
    auto df = partial_derivative(f, Axis::x, beta);
    auto dg = partial_derivative(g, Axis::x, s - beta);
    for (const auto& [k, lam] : spec.lambda) {
      if (lam == cplx{}) continue;
      auto pf = partial_convolution(df, Axis::x, spec.phi, k);
      auto pg = partial_convolution(dg, Axis::y, spec.psi, k);
      for (std::size_t i = 0; i < rhs.values().size(); ++i)
        rhs.values()[i] += binom * lam * pf.values()[i] * pg.values()[i];
    }
  }
  LeibnizReport rep;
  rep.order = s;
  rep.lhs_norm = lp_norm(lhs, 2.0);
  rep.rel_error = relative_l2_error(rhs, lhs);
  return rep;
}

ParaproductSpec leibniz_spec(const GridGeometry& geo, const std::string& lambda, std::uint64_t seed) {
  ParaproductSpec spec{theta_profile(), vartheta_profile(), {}};
  auto range = default_scale_range(geo);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  for (int k = range.k_min; k <= range.k_max; ++k) {
    if (lambda == "unit") {
      spec.lambda[k] = 1.0;
    } else if (lambda == "random") {
      double re = normal(rng);
      double im = normal(rng);
      spec.lambda[k] = {re, im};
    } else {
      throw InvalidConfig("lambda must be 'unit' or 'random'");
    }
  }
  return spec;
}

nlohmann::json to_json(const Diagnostics& d) {
  nlohmann::json warn = nlohmann::json::array();
  for (const auto& w : d.nyquist)
    warn.push_back({{"axis", w.axis == Axis::x ? "x" : "y"},
                    {"k", w.k},
                    {"clipped_mass", w.clipped_mass},
                    {"context", w.context}});
  return {{"nyquist_warnings", warn}, {"notes", d.notes}};
}

nlohmann::json to_json(const RatioReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"trial_id", row.trial},
                    {"a_dilation", row.dilation},
                    {"lambda", row.lambda},
                    {"ratio", row.ratio},
                    {"norm_t", row.norm_t},
                    {"norm_f", row.norm_f},
                    {"norm_g", row.norm_g},
                    {"nu", row.nu},
                    {"flags", row.flags}});
  nlohmann::json j = {{"label", r.label},
                      {"rows", rows},
                      {"min_ratio", r.min_ratio},
                      {"max_ratio", r.max_ratio},
                      {"max_over_min", std::isfinite(r.max_over_min) ? nlohmann::json(r.max_over_min)
                                                                     : nlohmann::json("inf")},
                      {"all_finite", r.all_finite},
                      {"skipped_lambdas", r.skipped_lambdas},
                      {"diagnostics", to_json(r.diagnostics)}};
  j["fitted_exponent"] = r.fitted_exponent ? nlohmann::json(*r.fitted_exponent) : nlohmann::json(nullptr);
  return j;
}

CsvTable to_csv(const RatioReport& r) {
  CsvTable t;
  t.header = {"trial_id", "a_dilation", "lambda", "ratio", "norm_t", "norm_f", "norm_g", "nu", "flags"};
  for (const auto& row : r.rows) {
    std::string flags;
    for (const auto& f : row.flags) flags += (flags.empty() ? "" : ";") + f;
    t.rows.push_back({std::to_string(row.trial), std::to_string(row.dilation),
                      format_double(row.lambda), format_double(row.ratio), format_double(row.norm_t),
                      format_double(row.norm_f), format_double(row.norm_g), format_double(row.nu),
                      flags});
  }
  return t;
}

nlohmann::json to_json(const RecoveryReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"epsilon", row.epsilon},
                    {"re", row.value.real()},
                    {"im", row.value.imag()},
                    {"abs_error", row.abs_error},
                    {"rel_error", row.rel_error}});
  return {{"target", {{"re", r.target.real()}, {"im", r.target.imag()}}},
          {"rows", rows},
          {"strictly_decreasing", r.strictly_decreasing},
          {"non_convergence", r.non_convergence}};
}

CsvTable to_csv(const RecoveryReport& r) {
  CsvTable t;
  t.header = {"trial_id", "epsilon", "re", "im", "abs_error", "rel_error"};
  int i = 0;
  for (const auto& row : r.rows)
    t.rows.push_back({std::to_string(i++), format_double(row.epsilon), format_double(row.value.real()),
                      format_double(row.value.imag()), format_double(row.abs_error),
                      format_double(row.rel_error)});
  return t;
}

}  // namespace twp
