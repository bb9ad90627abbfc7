// twp: command-line front end for the twisted paraproduct toolkit.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "twp/config.hpp"
#include "twp/cutoffs.hpp"
#include "twp/decompose.hpp"
#include "twp/error.hpp"
#include "twp/experiments.hpp"
#include "twp/gfn.hpp"
#include "twp/report.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kInvalidConfig = 2, kHypothesis = 3, kNonConvergence = 4 };

struct Globals {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string grid;
};

twp::ExperimentConfig resolve(const Globals& g) {
  auto cfg = g.config.empty() ? twp::default_config() : twp::load_config(g.config);
  if (g.seed) cfg.seed = *g.seed;
  if (!g.out.empty()) cfg.out_dir = g.out;
  if (!g.grid.empty()) {
    std::istringstream in(g.grid);
    std::size_t n = 0;
    char comma = 0;
    double l = 0.0;
    if (!(in >> n >> comma >> l) || comma != ',')
      throw twp::InvalidConfig("--grid expects N,L");
    double old_l = cfg.l;
    cfg.n = n;
    cfg.l = l;
    try {
      (void)cfg.geometry();
    } catch (const std::invalid_argument& e) {
      throw twp::InvalidConfig(e.what());
    }
    // Keep default centers in the middle of the resized box.
    for (auto* gen : {&cfg.ensemble.f, &cfg.ensemble.g})
      if (gen->center[0] == 0.5 * old_l && gen->center[1] == 0.5 * old_l) gen->center = {0.5 * l, 0.5 * l};
  }
  return cfg;
}

nlohmann::json envelope(const std::string& command, const twp::ExperimentConfig& cfg) {
  return {{"command", command}, {"config", twp::to_json(cfg)}};
}

twp::GridFunction2D trial_input(const twp::Generator& base, const twp::ExperimentConfig& cfg,
                                std::uint64_t salt) {
  twp::Generator gen = base;
  gen.seed = base.seed + cfg.seed * 2 + salt;
  return twp::sample(gen, cfg.geometry());
}

int cmd_partition(const twp::ExperimentConfig& cfg) {
  const auto& p = cfg.partition;
  if (p.k_min >= p.k_max) throw twp::InvalidConfig("partition needs k_min < k_max");
  auto taus = twp::log_spaced_taus(p.k_min, p.k_max, p.samples);
  auto rep = twp::partition_check(twp::make_vartheta(twp::make_theta()), p.k_min, p.k_max, taus);
  auto j = envelope("partition-check", cfg);
  j["result"] = {{"max_deviation", rep.max_deviation},
                 {"worst_tau", rep.worst_tau},
                 {"valid_samples", rep.valid_samples}};
  twp::CsvTable t{{"trial_id", "k_min", "k_max", "samples", "max_deviation", "worst_tau"},
                  {{"0", std::to_string(p.k_min), std::to_string(p.k_max), std::to_string(rep.valid_samples),
                    twp::format_double(rep.max_deviation), twp::format_double(rep.worst_tau)}}};
  twp::write_report(cfg.out_dir, j, t);
  std::printf("max deviation %.3e over %zu samples\n", rep.max_deviation, rep.valid_samples);
  return kOk;
}

twp::DecompositionOptions decomposition_options(const twp::ExperimentConfig& cfg, int n_max) {
  twp::DecompositionOptions o;
  o.n_max = n_max;
  o.resolution = cfg.decomposition.resolution;
  if (cfg.decomposition.k_min || cfg.decomposition.k_max) {
    auto r = twp::grid_scale_range(cfg.geometry());
    o.scales = twp::ScaleRange{cfg.decomposition.k_min.value_or(r.k_min),
                               cfg.decomposition.k_max.value_or(r.k_max)};
  }
  return o;
}

int cmd_decompose(const twp::ExperimentConfig& cfg) {
  auto m = std::make_shared<const twp::TwistedSymbol>(twp::build_symbol(cfg.symbol));
  auto d = twp::decompose(m, cfg.geometry(), decomposition_options(cfg, cfg.decomposition.n_max));
  auto decay = twp::decay_report(d);
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream(std::filesystem::path(cfg.out_dir) / "decomposition.json") << twp::to_json(d).dump(1) << '\n';
  auto j = envelope("decompose", cfg);
  j["result"] = {{"a", d.a},
                 {"k_range", {d.scales.k_min, d.scales.k_max}},
                 {"terms", d.term_count()},
                 {"error_budget", d.error_budget},
                 {"decay_weighted", decay.weighted},
                 {"decay_raw", decay.raw},
                 {"decay_median", decay.median},
                 {"smoothness_flag", decay.flagged}};
  twp::CsvTable t{{"trial_id", "R", "max_abs_kappa", "weighted"}, {}};
  for (std::size_t r = 0; r < decay.raw.size(); ++r)
    t.rows.push_back({std::to_string(r), std::to_string(r), twp::format_double(decay.raw[r]),
                      twp::format_double(decay.weighted[r])});
  twp::write_report(cfg.out_dir, j, t);
  std::printf("a = %d, %zu terms, reconstruction error %.3e%s\n", d.a, d.term_count(), d.error_budget,
              decay.flagged ? ", decay flag raised" : "");
  return kOk;
}

int cmd_reconstruct(const twp::ExperimentConfig& cfg) {
  auto m = std::make_shared<const twp::TwistedSymbol>(twp::build_symbol(cfg.symbol));
  auto j = envelope("reconstruct-error", cfg);
  twp::CsvTable t{{"trial_id", "n_max", "sup_error", "tau1", "tau2"}, {}};
  nlohmann::json rows = nlohmann::json::array();
  double prev = INFINITY;
  bool decreasing = true;
  int i = 0;
  for (int n : cfg.decomposition.n_max_list) {
    auto d = twp::decompose(m, cfg.geometry(), decomposition_options(cfg, n));
    auto rep = twp::reconstruct_symbol(d);
    if (!(rep.sup_error < prev)) decreasing = false;
    prev = rep.sup_error;
    rows.push_back({{"n_max", n}, {"sup_error", rep.sup_error}});
    t.rows.push_back({std::to_string(i++), std::to_string(n), twp::format_double(rep.sup_error),
                      twp::format_double(rep.worst_tau1), twp::format_double(rep.worst_tau2)});
    std::printf("n_max %3d  sup error %.6e\n", n, rep.sup_error);
  }
  j["result"] = {{"rows", rows}, {"strictly_decreasing", decreasing}};
  twp::write_report(cfg.out_dir, j, t);
  return kOk;
}

int cmd_apply(const twp::ExperimentConfig& cfg) {
  if (cfg.apply.f.empty() || cfg.apply.g.empty()) throw twp::InvalidConfig("apply needs f and g paths");
  auto f = twp::read_gfn(cfg.apply.f);
  auto g = twp::read_gfn(cfg.apply.g);
  if (f.geometry() != g.geometry()) throw twp::InvalidConfig("f and g live on different grids");
  twp::Diagnostics diag;
  std::optional<twp::GridFunction2D> out;
  if (cfg.apply.op == "decomposed") {
    if (cfg.apply.decomposition.empty()) throw twp::InvalidConfig("apply: decomposition path missing");
    std::ifstream in(cfg.apply.decomposition);
    if (!in) throw twp::InvalidConfig("cannot open " + cfg.apply.decomposition);
    nlohmann::json dj;
    try {
      in >> dj;
    } catch (const nlohmann::json::parse_error& e) {
      throw twp::InvalidConfig(e.what());
    }
    out = twp::apply_decomposed(twp::decomposition_from_json(dj), f, g, &diag);
  } else {
    auto m = twp::build_symbol(cfg.symbol);
    if (cfg.apply.op == "spatial") {
      auto sigma = twp::build_spatial_symbol(cfg.symbol, f.geometry());
      out = twp::apply_spatial_multiplier(sigma ? *sigma : twp::SpatialSymbol::from_symbol(m), f, g);
    } else {
      out = twp::apply_twisted_multiplier(m, f, g);
    }
  }
  std::filesystem::create_directories(cfg.out_dir);
  auto path = (std::filesystem::path(cfg.out_dir) / cfg.apply.output).string();
  twp::write_gfn(path, *out);
  auto j = envelope("apply", cfg);
  double l2 = twp::lp_norm(*out, 2.0);
  j["result"] = {{"output", path}, {"l2_norm", l2}, {"diagnostics", twp::to_json(diag)}};
  twp::write_report(cfg.out_dir, j, {{"trial_id", "l2_norm"}, {{"0", twp::format_double(l2)}}});
  std::printf("wrote %s (L2 norm %.6e)\n", path.c_str(), l2);
  return kOk;
}

int cmd_ratio(const twp::ExperimentConfig& cfg) {
  auto rep = twp::ratio_sweep(cfg);
  auto j = envelope("ratio-sweep", cfg);
  j["result"] = twp::to_json(rep);
  twp::write_report(cfg.out_dir, j, twp::to_csv(rep));
  std::printf("%zu ratios in [%.6e, %.6e], max/min %.3f\n", rep.rows.size(), rep.min_ratio,
              rep.max_ratio, rep.max_over_min);
  return kOk;
}

int cmd_recover(const twp::ExperimentConfig& cfg) {
  auto m = twp::build_symbol(cfg.symbol);
  auto rep = twp::recover_symbol(m, cfg.geometry(), cfg.recovery);
  auto j = envelope("recover-symbol", cfg);
  j["result"] = twp::to_json(rep);
  twp::write_report(cfg.out_dir, j, twp::to_csv(rep));
  for (const auto& r : rep.rows)
    std::printf("eps %.6g  value %.10f%+.10fi  rel error %.3e\n", r.epsilon, r.value.real(),
                r.value.imag(), r.rel_error);
  if (rep.non_convergence) {
    std::fprintf(stderr, "pairing errors do not decrease along the schedule\n");
    return kNonConvergence;
  }
  return kOk;
}

int cmd_prop1(twp::ExperimentConfig cfg) {
  cfg.probe = true;
  auto m = twp::build_symbol(cfg.symbol);
  auto rep = twp::prop1_probe(m, cfg);
  auto j = envelope("prop1-probe", cfg);
  j["result"] = twp::to_json(rep);
  twp::write_report(cfg.out_dir, j, twp::to_csv(rep));
  for (const auto& r : rep.rows) std::printf("lambda %6.2f  ratio %.6e\n", r.lambda, r.ratio);
  if (rep.fitted_exponent) std::printf("fitted growth exponent %.4f\n", *rep.fitted_exponent);
  return kOk;
}

int cmd_leibniz(const twp::ExperimentConfig& cfg) {
  auto spec = twp::leibniz_spec(cfg.geometry(), cfg.leibniz.lambda, cfg.seed);
  auto f = trial_input(cfg.ensemble.f, cfg, 0);
  auto g = trial_input(cfg.ensemble.g, cfg, 1);
  auto j = envelope("leibniz-check", cfg);
  twp::CsvTable t{{"trial_id", "order", "lhs_norm", "rel_error"}, {}};
  nlohmann::json rows = nlohmann::json::array();
  int i = 0;
  for (int s : cfg.leibniz.orders) {
    if (s < 1 || s > 3) throw twp::InvalidConfig("Leibniz orders must lie in {1, 2, 3}");
    auto rep = twp::leibniz_check(spec, f, g, s);
    rows.push_back({{"order", s}, {"lhs_norm", rep.lhs_norm}, {"rel_error", rep.rel_error}});
    t.rows.push_back({std::to_string(i++), std::to_string(s), twp::format_double(rep.lhs_norm),
                      twp::format_double(rep.rel_error)});
    std::printf("s = %d  relative error %.3e\n", s, rep.rel_error);
  }
  j["result"] = {{"rows", rows}};
  twp::write_report(cfg.out_dir, j, t);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral toolkit for twisted paraproducts and bilinear multipliers"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "Experiment configuration (JSON)")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "Output directory for report.json and report.csv");
  app.add_option("--seed", g.seed, "Global random seed");
  app.add_option("--grid", g.grid, "Grid as N,L");

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const twp::ExperimentConfig&);
  };
  static const Command commands[] = {
      {"partition-check", "Check the dyadic partition of unity", cmd_partition},
      {"decompose", "Decompose a symbol into twisted paraproducts", cmd_decompose},
      {"reconstruct-error", "Reconstruction error against n_max", cmd_reconstruct},
      {"apply", "Apply an operator to .gfn inputs", cmd_apply},
      {"ratio-sweep", "Sobolev ratio sweep over an ensemble", cmd_ratio},
      {"recover-symbol", "Recover a symbol value from wave-packet pairings", cmd_recover},
      {"prop1-probe", "Growth probe for symbols without the support condition",
       [](const twp::ExperimentConfig& c) { return cmd_prop1(c); }},
      {"leibniz-check", "Product-rule identity for a paraproduct", cmd_leibniz},
  };
  for (const auto& c : commands) app.add_subcommand(c.name, c.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalidConfig;
  }

  try {
    auto cfg = resolve(g);
    for (const auto& c : commands)
      if (app.got_subcommand(c.name)) return c.run(cfg);
  } catch (const twp::InvalidConfig& e) {
    std::fprintf(stderr, "invalid config: %s\n", e.what());
    return kInvalidConfig;
  } catch (const twp::ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kInvalidConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return kInvalidConfig;
  } catch (const twp::HypothesisViolation& e) {
    std::fprintf(stderr, "hypothesis violation: %s\n", e.what());
    return kHypothesis;
  } catch (const twp::SupportViolation& e) {
    std::fprintf(stderr, "support violation: %s\n", e.what());
    return kHypothesis;
  } catch (const twp::NonConvergence& e) {
    std::fprintf(stderr, "non-convergence: %s\n", e.what());
    return kNonConvergence;
  } catch (const twp::QuadratureResolutionError& e) {
    std::fprintf(stderr, "quadrature resolution: %s\n", e.what());
    return kNonConvergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailure;
  }
  return kFailure;
}
