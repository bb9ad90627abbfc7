// Acceptance gate: one PASS/FAIL line per criterion.
//
//   twp_acceptance [--criterion N]

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "twp/config.hpp"
#include "twp/cutoffs.hpp"
#include "twp/decompose.hpp"
#include "twp/experiments.hpp"
#include "twp/grid.hpp"
#include "twp/operators.hpp"
#include "twp/symbol.hpp"

using namespace twp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit;  // seconds
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

GridFunction2D random_field(const GridGeometry& geo, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  GridFunction2D f(geo);
  for (auto& v : f.values()) v = {nd(rng), nd(rng)};
  return f;
}

// Sum of random plane waves with |k|_inf < band, periodic on the box.
GridFunction2D random_trig(const GridGeometry& geo, double band_x, double band_y, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  GridFunction2D hat(geo);
  const std::size_t n = geo.n();
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      if (std::abs(geo.frequency(p)) < band_x && std::abs(geo.frequency(q)) < band_y)
        hat(p, q) = {nd(rng), nd(rng)};
  return inverse_transform(hat);
}

// ---------------------------------------------------------------------------

Outcome spectral_core() {
  double worst_rt = 0.0, worst_pl = 0.0;
  for (std::size_t n : {16u, 64u, 128u}) {
    GridGeometry geo(n, 16.0);
    auto f = random_field(geo, 7 + n);
    auto fh = forward_transform(f);
    auto back = inverse_transform(fh);
    worst_rt = std::max(worst_rt, max_abs(back - f) / max_abs(f));
    double h = geo.spacing();
    double lhs = 0.0, rhs = 0.0;
    for (auto v : f.values()) lhs += std::norm(v) * h * h;
    for (auto v : fh.values()) rhs += std::norm(v) / (geo.l() * geo.l());
    worst_pl = std::max(worst_pl, std::abs(lhs - rhs) / lhs);
  }
  return {worst_rt <= 1e-12 && worst_pl <= 1e-12,
          fmt("round-trip %.3g, Plancherel %.3g (tol 1e-12)", worst_rt, worst_pl)};
}

Outcome cutoff_calculus() {
  const int k_min = -4, k_max = 4;
  const auto vt = make_vartheta(make_theta());
  auto taus = log_spaced_taus(k_min, k_max, 10000);
  auto rep = partition_check(vt, k_min, k_max, taus);

  double leak = 0.0;
  for (int k = k_min; k <= k_max; ++k) {
    const double lo = std::ldexp(1.0, k - 1), hi = std::ldexp(1.0, k + 1);
    for (int i = 0; i <= 4000; ++i) {
      double t = std::ldexp(1.0, k + 3) * i / 4000.0;
      if (t >= lo && t <= hi) continue;
      for (double s : {t, -t}) leak = std::max(leak, std::abs(vt(std::ldexp(s, -k))));
    }
  }
  return {rep.valid_samples == taus.size() && rep.max_deviation <= 1e-12 && leak <= 1e-14,
          fmt("partition deviation %.3g over %zu samples (tol 1e-12), leakage %.3g (tol 1e-14)",
              rep.max_deviation, rep.valid_samples, leak)};
}

// Direct quadruple sum over (xi, eta) with hand-rolled DFTs.
GridFunction2D brute_twisted(const std::function<cplx(double, double)>& m, const GridFunction2D& f,
                             const GridFunction2D& g) {
  const auto& geo = f.geometry();
  const std::size_t n = geo.n();
  const double l = geo.l(), h = geo.spacing();
  const long half = static_cast<long>(n / 2);
  std::vector<cplx> e(n);
  for (std::size_t k = 0; k < n; ++k)
    e[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  auto slot = [&](long v) { return static_cast<std::size_t>(((v % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n)); };

  auto dft = [&](const GridFunction2D& u) {
    std::vector<cplx> hat(n * n);
    for (long p = -half; p < half; ++p)
      for (long q = -half; q < half; ++q) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k)
            s += u(j, k) * std::conj(e[slot(p * static_cast<long>(j) + q * static_cast<long>(k))]);
        hat[slot(p) * n + slot(q)] = s * h * h;
      }
    return hat;
  };
  auto fh = dft(f), gh = dft(g);

  GridFunction2D out(geo);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      cplx s = 0.0;
      for (long p1 = -half; p1 < half; ++p1)
        for (long q2 = -half; q2 < half; ++q2) {
          if (p1 == -half || q2 == -half) continue;
          cplx mv = m(static_cast<double>(p1) / l, static_cast<double>(q2) / l);
          if (mv == 0.0) continue;
          for (long p2 = -half; p2 < half; ++p2)
            for (long q1 = -half; q1 < half; ++q1)
              s += mv * fh[slot(p1) * n + slot(p2)] * gh[slot(q1) * n + slot(q2)] *
                   e[slot((p1 + q1) * static_cast<long>(j) + (p2 + q2) * static_cast<long>(k))];
        }
      out(j, k) = s / (l * l * l * l);
    }
  return out;
}

Outcome oracle_equivalence() {
  GridGeometry small(16, 4.0);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const double a = u(rng), b = u(rng), w1 = 2.0 * u(rng), w2 = 2.0 * u(rng), c = 0.5 + std::abs(u(rng));
    auto fn = [=](double t1, double t2) {
      return cplx(a, b) * cone_value(c, t1, t2) + std::exp(cplx(0.0, w1 * t1 + w2 * t2)) * (1.0 + a * t2 * t2);
    };
    TwistedSymbol m(fn);
    auto f = random_field(small, 100 + 2 * t), g = random_field(small, 101 + 2 * t);
    worst = std::max(worst, relative_l2_error(apply_twisted_multiplier(m, f, g), brute_twisted(fn, f, g)));
  }

  GridGeometry big(128, 16.0);
  auto spec = leibniz_spec(big, "random", 99);
  auto f = random_trig(big, 3.0, 3.0, 5), g = random_trig(big, 3.0, 3.0, 6);
  double para = relative_l2_error(apply_paraproduct(spec, f, g),
                                  apply_twisted_multiplier(induced_symbol(spec), f, g));
  return {worst <= 1e-10 && para <= 1e-10,
          fmt("N=16 brute-force %.3g, N=128 paraproduct %.3g (tol 1e-10)", worst, para)};
}

Outcome decomposition_fidelity() {
  GridGeometry geo(64, 16.0);
  auto m = std::make_shared<const TwistedSymbol>(cone_symbol(1.0));
  std::vector<double> err;
  DecayReport decay;
  for (int n : {2, 4, 8, 16}) {
    DecompositionOptions o;
    o.n_max = n;
    auto d = decompose(m, geo, o);
    err.push_back(reconstruct_symbol(d).sup_error);
    if (n == 16) decay = decay_report(d, 16);
  }
  bool decreasing = err[0] > err[1] && err[1] > err[2] && err[2] > err[3];
  bool fast = err[3] <= err[1] / 100.0;
  return {decreasing && fast && !decay.flagged,
          fmt("errors %.3g %.3g %.3g %.3g; err16/err4 %.3g (tol 0.01); weighted decay max/median %.3g (tol 2)",
              err[0], err[1], err[2], err[3], err[3] / err[1], decay.max_over_median)};
}

Outcome operator_synthesis() {
  GridGeometry geo(64, 16.0);
  auto m = std::make_shared<const TwistedSymbol>(cone_symbol(1.0));
  DecompositionOptions o;
  o.n_max = 8;
  auto d = decompose(m, geo, o);
  auto base = default_config();
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    Generator fg = base.ensemble.f, gg = base.ensemble.g;
    fg.center = gg.center = {8.0, 8.0};
    fg.annulus = gg.annulus = {0.0, 1.5};
    fg.seed = 10 + 2 * t;
    gg.seed = 11 + 2 * t;
    auto f = sample(fg, geo), g = sample(gg, geo);
    worst = std::max(worst, relative_l2_error(apply_decomposed(d, f, g), apply_twisted_multiplier(*m, f, g)));
  }
  return {worst <= 1e-3, fmt("worst relative L2 %.3g over 5 pairs (tol 1e-3)", worst)};
}

Outcome recovery() {
  GridGeometry geo(64, 32.0);
  RecoverySpec spec;
  spec.xi0 = {0.1875, -0.5};
  spec.eta0 = {-0.1875, 0.5};
  spec.epsilons = {0.5, 0.25, 0.125};
  auto cone = recover_symbol(cone_symbol(1.0), geo, spec);
  auto flat = recover_symbol(constant_symbol(1.0), geo, spec);
  double flat_worst = 0.0;
  for (const auto& r : flat.rows) flat_worst = std::max(flat_worst, r.rel_error);
  const auto& e = cone.rows;
  return {cone.strictly_decreasing && e.back().rel_error <= 0.05 && flat_worst <= 1e-6,
          fmt("cone(1) at %.4g: errors %.3g %.3g %.3g (final tol 0.05); constant worst %.3g (tol 1e-6)",
              cone.target.real(), e[0].rel_error, e[1].rel_error, e[2].rel_error, flat_worst)};
}

Outcome necessity_probe() {
  auto cfg = default_config();
  cfg.n = 256;
  cfg.l = 4.0;
  cfg.exponents.s = 1.0;
  cfg.prop1.lambdas = {4.0, 8.0, 16.0};
  auto one = prop1_probe(constant_symbol(1.0), cfg);
  auto cone = prop1_probe(cone_symbol(1.0), cfg);
  double a = one.fitted_exponent.value_or(-INFINITY), b = cone.fitted_exponent.value_or(INFINITY);
  return {a >= 0.8 && b <= 0.1 && one.skipped_lambdas.empty() && cone.skipped_lambdas.empty(),
          fmt("m=1 exponent %.3g (min 0.8), cone(1) exponent %.3g (max 0.1)", a, b)};
}

Outcome leibniz() {
  GridGeometry geo(128, 16.0);
  auto spec = leibniz_spec(geo, "random", 3);
  double worst = 0.0;
  for (int t = 0; t < 3; ++t) {
    auto f = random_trig(geo, 1.5, 3.0, 40 + 2 * t), g = random_trig(geo, 3.0, 3.0, 41 + 2 * t);
    for (int s : {1, 2}) worst = std::max(worst, leibniz_check(spec, f, g, s).rel_error);
  }
  return {worst <= 1e-8, fmt("worst relative L2 %.3g for s=1,2 (tol 1e-8)", worst)};
}

Outcome cone_sweep() {
  auto cfg = default_config();
  cfg.symbol.catalog = "cone";
  cfg.symbol.c = 1.0;
  cfg.exponents = {3.0, 3.0, 1.5, 1.0};
  cfg.ensemble.trials = 20;
  cfg.sweep.dilations = {-2, -1, 0, 1, 2};
  auto a = ratio_sweep(cfg);
  auto b = ratio_sweep(cfg);
  bool same = to_csv(a).str() == to_csv(b).str();
  return {a.all_finite && a.rows.size() == 100 && a.max_over_min <= 10.0 && same,
          fmt("%zu ratios in [%.3g, %.3g], max/min %.3g (tol 10), rerun %s", a.rows.size(), a.min_ratio,
              a.max_ratio, a.max_over_min, same ? "bit-exact" : "differs")};
}

Outcome spatial_sweep() {
  auto cfg = default_config();
  cfg.n = 64;
  cfg.symbol.catalog = "cone";
  cfg.symbol.modulation_depth = 0.5;
  cfg.exponents = {3.0, 3.0, 1.5, 1.0};
  cfg.ensemble.trials = 10;
  auto rep = ratio_sweep(cfg);

  const auto geo = cfg.geometry();
  auto sigma = *build_spatial_symbol(cfg.symbol, geo);
  auto m = build_symbol(cfg.symbol);
  auto f = sample(cfg.ensemble.f, geo), g = sample(cfg.ensemble.g, geo);
  const GridShift shift{5, 3};
  auto sf = translate(f, shift), sg = translate(g, shift);
  auto equiv = [&](const GridFunction2D& lhs, const GridFunction2D& rhs) { return relative_l2_error(lhs, rhs); };
  double dm = equiv(apply_twisted_multiplier(m, sf, sg), translate(apply_twisted_multiplier(m, f, g), shift));
  double ds = equiv(apply_spatial_multiplier(sigma, sf, sg), translate(apply_spatial_multiplier(sigma, f, g), shift));
  return {rep.all_finite && rep.max_over_min <= 10.0 && dm <= 1e-12 && ds > 1e-6,
          fmt("max/min %.3g (tol 10); equivariance defect T_m %.3g (max 1e-12), T_sigma %.3g (min 1e-6)",
              rep.max_over_min, dm, ds)};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "spectral core", 1.0, spectral_core},
      {2, "cutoff calculus", 1.0, cutoff_calculus},
      {3, "oracle equivalence", 30.0, oracle_equivalence},
      {4, "decomposition fidelity", 120.0, decomposition_fidelity},
      {5, "operator-level synthesis", 120.0, operator_synthesis},
      {6, "symbol recovery", 60.0, recovery},
      {7, "necessity probe", 180.0, necessity_probe},
      {8, "Leibniz identity", 30.0, leibniz},
      {9, "cone consistency sweep", 300.0, cone_sweep},
      {10, "spatial symbol consistency", 180.0, spatial_sweep},
  };

  int failures = 0;
  bool ran = false;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    ran = true;
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = out.pass && secs < c.time_limit;
    if (!pass) ++failures;
    std::printf("criterion %2d %-28s %s  %s; %.2fs (limit %.0fs)\n", c.id, c.title, pass ? "PASS" : "FAIL",
                out.detail.c_str(), secs, c.time_limit);
    std::fflush(stdout);
  }
  if (!ran) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return failures ? 1 : 0;
}
