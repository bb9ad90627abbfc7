#include "twp/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

#include "twp/error.hpp"
#include "twp/expression.hpp"

namespace twp {

using nlohmann::json;

GateResult exponent_gate(const ExponentTuple& t) {
  for (double e : {t.p, t.q, t.r})
    if (!(e > 1.0) || !std::isfinite(e)) return {false, "exponents p, q, r must lie in (1, inf)"};
  if (!(t.s >= 0.0) || !std::isfinite(t.s)) return {false, "smoothness s must be >= 0"};
  double lhs = 1.0 / t.p + 1.0 / t.q, rhs = 1.0 / t.r;
  if (std::abs(lhs - rhs) > 1e-12) return {false, "1/p + 1/q != 1/r"};
  if (!(rhs > 0.5)) return {false, "1/r must exceed 1/2"};
  return {true, ""};
}

TwistedSymbol build_symbol(const SymbolSpec& spec) {
  if (spec.catalog == "zero") return zero_symbol();
  if (spec.catalog == "constant") return constant_symbol(spec.value);
  if (spec.catalog == "cone") return cone_symbol(spec.c);
  if (spec.catalog == "hard_cone") return hard_cone_symbol(spec.c);
  if (!spec.catalog.empty()) throw InvalidConfig("unknown symbol catalog entry '" + spec.catalog + "'");
  if (spec.expression.empty()) throw InvalidConfig("symbol needs a catalog name or an expression");
  return parse_symbol_expression(spec.expression, spec.support_constant, spec.homogeneous);
}

std::optional<SpatialSymbol> build_spatial_symbol(const SymbolSpec& spec, const GridGeometry& geo) {
  if (!spec.modulation_depth) return std::nullopt;
  auto m = build_symbol(spec);
  return SpatialSymbol({SpatialSymbol::Term{
                           sinusoidal_amplitude(*spec.modulation_depth, geo.l(), spec.kx, spec.ky), m}},
                       "modulated " + m.name());
}

namespace {

void check_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw InvalidConfig(std::string(where) + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key()))
      throw InvalidConfig("unknown field '" + it.key() + "' in " + where);
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <typename T>
void read_opt(const json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const Generator& g) {
  return {{"kind", to_string(g.kind)},     {"center", g.center},     {"width", g.width},
          {"modulation", g.modulation},    {"epsilon", g.epsilon},   {"amplitude", g.amplitude},
          {"annulus", g.annulus},          {"lattice", g.lattice},   {"seed", g.seed},
          {"dilation", g.dilation},        {"check_support", g.check_support}};
}

Generator generator_from_json(const json& j, const Generator& base) {
  check_keys(j, "generator",
             {"kind", "center", "width", "modulation", "epsilon", "amplitude", "annulus", "lattice",
              "seed", "dilation", "check_support"});
  Generator g = base;
  if (j.contains("kind")) {
    try {
      g.kind = generator_kind_from_string(j.at("kind").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw InvalidConfig(e.what());
    }
  }
  read(j, "center", g.center);
  read(j, "width", g.width);
  read(j, "modulation", g.modulation);
  read(j, "epsilon", g.epsilon);
  read(j, "amplitude", g.amplitude);
  read(j, "annulus", g.annulus);
  read(j, "lattice", g.lattice);
  read(j, "seed", g.seed);
  read(j, "dilation", g.dilation);
  read(j, "check_support", g.check_support);
  return g;
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  Generator g;
  g.kind = GeneratorKind::band_limited_random;
  g.center = {0.5 * c.l, 0.5 * c.l};
  g.width = 0.75;
  g.annulus = {0.5, 1.0};
  c.ensemble.f = g;
  g.seed = 1;
  c.ensemble.g = g;
  c.ensemble.trials = 20;
  return c;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c = default_config();
  try {
    check_keys(j, "config",
               {"grid", "seed", "probe", "symbol", "exponents", "ensemble", "sweep", "prop1",
                "recovery", "decomposition", "partition", "leibniz", "apply", "output"});
    bool centers_given[2] = {false, false};
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      check_keys(g, "grid", {"n", "l"});
      read(g, "n", c.n);
      read(g, "l", c.l);
    }
    read(j, "seed", c.seed);
    read(j, "probe", c.probe);
    if (j.contains("symbol")) {
      const auto& s = j["symbol"];
      check_keys(s, "symbol",
                 {"catalog", "expression", "c", "value", "support_constant", "homogeneous",
                  "modulation_depth", "kx", "ky"});
      if (s.contains("expression") && !s.contains("catalog")) c.symbol.catalog.clear();
      read(s, "catalog", c.symbol.catalog);
      read(s, "expression", c.symbol.expression);
      read(s, "c", c.symbol.c);
      read(s, "value", c.symbol.value);
      read_opt(s, "support_constant", c.symbol.support_constant);
      read_opt(s, "homogeneous", c.symbol.homogeneous);
      read_opt(s, "modulation_depth", c.symbol.modulation_depth);
      read(s, "kx", c.symbol.kx);
      read(s, "ky", c.symbol.ky);
    }
    if (j.contains("exponents")) {
      const auto& e = j["exponents"];
      check_keys(e, "exponents", {"p", "q", "r", "s"});
      read(e, "p", c.exponents.p);
      read(e, "q", c.exponents.q);
      read(e, "r", c.exponents.r);
      read(e, "s", c.exponents.s);
    }
    if (j.contains("ensemble")) {
      const auto& e = j["ensemble"];
      check_keys(e, "ensemble", {"f", "g", "trials"});
      if (e.contains("f")) {
        c.ensemble.f = generator_from_json(e["f"], c.ensemble.f);
        centers_given[0] = e["f"].contains("center");
      }
      if (e.contains("g")) {
        c.ensemble.g = generator_from_json(e["g"], c.ensemble.g);
        centers_given[1] = e["g"].contains("center");
      }
      read(e, "trials", c.ensemble.trials);
    }
    if (!centers_given[0]) c.ensemble.f.center = {0.5 * c.l, 0.5 * c.l};
    if (!centers_given[1]) c.ensemble.g.center = {0.5 * c.l, 0.5 * c.l};
    if (j.contains("sweep")) {
      const auto& s = j["sweep"];
      check_keys(s, "sweep", {"dilations", "operator"});
      read(s, "dilations", c.sweep.dilations);
      read(s, "operator", c.sweep.op);
    }
    if (j.contains("prop1")) {
      const auto& s = j["prop1"];
      check_keys(s, "prop1", {"lambdas", "eta0", "width"});
      read(s, "lambdas", c.prop1.lambdas);
      read(s, "eta0", c.prop1.eta0);
      read(s, "width", c.prop1.width);
    }
    if (j.contains("recovery")) {
      const auto& s = j["recovery"];
      check_keys(s, "recovery", {"xi0", "eta0", "epsilons", "shift"});
      read(s, "xi0", c.recovery.xi0);
      read(s, "eta0", c.recovery.eta0);
      read(s, "epsilons", c.recovery.epsilons);
      if (s.contains("shift")) {
        auto v = s["shift"].get<std::array<long, 2>>();
        c.recovery.shift_j = v[0];
        c.recovery.shift_l = v[1];
      }
    }
    if (j.contains("decomposition")) {
      const auto& s = j["decomposition"];
      check_keys(s, "decomposition", {"n_max", "n_max_list", "resolution", "k_min", "k_max"});
      read(s, "n_max", c.decomposition.n_max);
      read(s, "n_max_list", c.decomposition.n_max_list);
      read_opt(s, "resolution", c.decomposition.resolution);
      read_opt(s, "k_min", c.decomposition.k_min);
      read_opt(s, "k_max", c.decomposition.k_max);
    }
    if (j.contains("partition")) {
      const auto& s = j["partition"];
      check_keys(s, "partition", {"k_min", "k_max", "samples"});
      read(s, "k_min", c.partition.k_min);
      read(s, "k_max", c.partition.k_max);
      read(s, "samples", c.partition.samples);
    }
    if (j.contains("leibniz")) {
      const auto& s = j["leibniz"];
      check_keys(s, "leibniz", {"orders", "lambda"});
      read(s, "orders", c.leibniz.orders);
      read(s, "lambda", c.leibniz.lambda);
    }
    if (j.contains("apply")) {
      const auto& s = j["apply"];
      check_keys(s, "apply", {"f", "g", "operator", "decomposition", "output"});
      read(s, "f", c.apply.f);
      read(s, "g", c.apply.g);
      read(s, "operator", c.apply.op);
      read(s, "decomposition", c.apply.decomposition);
      read(s, "output", c.apply.output);
    }
    if (j.contains("output")) {
      const auto& s = j["output"];
      check_keys(s, "output", {"dir"});
      read(s, "dir", c.out_dir);
    }
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("malformed config: ") + e.what());
  }
  try {
    (void)c.geometry();
  } catch (const std::invalid_argument& e) {
    throw InvalidConfig(e.what());
  }
  if (c.ensemble.trials < 0) throw InvalidConfig("trial count must be nonnegative");
  if (c.decomposition.n_max < 0) throw InvalidConfig("n_max must be nonnegative");
  for (const auto* op : {&c.sweep.op, &c.apply.op})
    if (*op != "multiplier" && *op != "decomposed" && *op != "spatial")
      throw InvalidConfig("unknown operator '" + *op + "'");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidConfig("config " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

json to_json(const ExperimentConfig& c) {
  json sym = {{"catalog", c.symbol.catalog},
              {"expression", c.symbol.expression},
              {"c", c.symbol.c},
              {"value", c.symbol.value},
              {"support_constant", opt(c.symbol.support_constant)},
              {"homogeneous", c.symbol.homogeneous ? json(*c.symbol.homogeneous) : json(nullptr)},
              {"modulation_depth", opt(c.symbol.modulation_depth)},
              {"kx", c.symbol.kx},
              {"ky", c.symbol.ky}};
  json dec = {{"n_max", c.decomposition.n_max}, {"n_max_list", c.decomposition.n_max_list}};
  dec["resolution"] = c.decomposition.resolution ? json(*c.decomposition.resolution) : json(nullptr);
  dec["k_min"] = c.decomposition.k_min ? json(*c.decomposition.k_min) : json(nullptr);
  dec["k_max"] = c.decomposition.k_max ? json(*c.decomposition.k_max) : json(nullptr);
  return {{"grid", {{"n", c.n}, {"l", c.l}}},
          {"seed", c.seed},
          {"probe", c.probe},
          {"symbol", sym},
          {"exponents", {{"p", c.exponents.p}, {"q", c.exponents.q}, {"r", c.exponents.r}, {"s", c.exponents.s}}},
          {"ensemble", {{"f", to_json(c.ensemble.f)}, {"g", to_json(c.ensemble.g)}, {"trials", c.ensemble.trials}}},
          {"sweep", {{"dilations", c.sweep.dilations}, {"operator", c.sweep.op}}},
          {"prop1", {{"lambdas", c.prop1.lambdas}, {"eta0", c.prop1.eta0}, {"width", c.prop1.width}}},
          {"recovery", {{"xi0", c.recovery.xi0}, {"eta0", c.recovery.eta0}, {"epsilons", c.recovery.epsilons},
                        {"shift", {c.recovery.shift_j, c.recovery.shift_l}}}},
          {"decomposition", dec},
          {"partition", {{"k_min", c.partition.k_min}, {"k_max", c.partition.k_max}, {"samples", c.partition.samples}}},
          {"leibniz", {{"orders", c.leibniz.orders}, {"lambda", c.leibniz.lambda}}},
          {"apply", {{"f", c.apply.f}, {"g", c.apply.g}, {"operator", c.apply.op},
                     {"decomposition", c.apply.decomposition}, {"output", c.apply.output}}},
          {"output", {{"dir", c.out_dir}}}};
}

}  // namespace twp
