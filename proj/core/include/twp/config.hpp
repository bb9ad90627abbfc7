#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twp/generator.hpp"
#include "twp/grid.hpp"
#include "twp/symbol.hpp"

namespace twp {

struct ExponentTuple {
  double p = 3.0;
  double q = 3.0;
  double r = 1.5;
  double s = 1.0;
};

struct GateResult {
  bool valid = false;
  std::string reason;
};

// Valid iff 1/p + 1/q = 1/r (to 1e-12), 1/r > 1/2, all exponents in (1, inf), s >= 0.
GateResult exponent_gate(const ExponentTuple& t);

struct SymbolSpec {
  // "zero", "constant", "cone", "hard_cone"; empty selects expression.
  std::string catalog = "cone";
  std::string expression;
  double c = 1.0;
  double value = 1.0;
  std::optional<double> support_constant;
  std::optional<bool> homogeneous;
  // When set, sigma(x, y, tau) = (1 + depth sin(2 pi kx x / L) cos(2 pi ky y / L)) m(tau).
  std::optional<double> modulation_depth;
  int kx = 1;
  int ky = 1;
};

TwistedSymbol build_symbol(const SymbolSpec& spec);
std::optional<SpatialSymbol> build_spatial_symbol(const SymbolSpec& spec, const GridGeometry& geo);

struct EnsembleSpec {
  Generator f;
  Generator g;
  int trials = 1;
};

struct SweepSpec {
  std::vector<int> dilations{0};
  // "multiplier", "decomposed" or "spatial"
  std::string op = "multiplier";
};

struct ProbeSpec {
  std::vector<double> lambdas{4.0, 8.0, 16.0};
  std::array<double, 2> eta0{0.0, 2.0};
  double width = 0.3;
};

struct RecoverySpec {
  std::array<double, 2> xi0{0.1875, -0.5};
  std::array<double, 2> eta0{-0.1875, 0.5};
  std::vector<double> epsilons{0.5, 0.25, 0.125};
  long shift_j = 0;
  long shift_l = 0;
};

struct DecomposeSpec {
  int n_max = 8;
  std::vector<int> n_max_list{2, 4, 8, 16};
  std::optional<std::size_t> resolution;
  std::optional<int> k_min;
  std::optional<int> k_max;
};

struct PartitionSpec {
  int k_min = -4;
  int k_max = 4;
  std::size_t samples = 10000;
};

struct LeibnizSpec {
  std::vector<int> orders{1, 2};
  // lambda_k over the default scale range; "unit" or "random"
  std::string lambda = "random";
};

struct ApplySpec {
  std::string f;
  std::string g;
  std::string op = "multiplier";  // multiplier, decomposed, spatial
  std::string decomposition;      // JSON file for op = decomposed
  std::string output = "result.gfn";
};

struct ExperimentConfig {
  std::size_t n = 128;
  double l = 16.0;
  std::uint64_t seed = 0;
  bool probe = false;
  SymbolSpec symbol;
  ExponentTuple exponents;
  EnsembleSpec ensemble;
  SweepSpec sweep;
  ProbeSpec prop1;
  RecoverySpec recovery;
  DecomposeSpec decomposition;
  PartitionSpec partition;
  LeibnizSpec leibniz;
  ApplySpec apply;
  std::string out_dir = "out";

  GridGeometry geometry() const { return GridGeometry(n, l); }
};

ExperimentConfig default_config();
// Throws InvalidConfig on malformed or unknown fields.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& cfg);
nlohmann::json to_json(const Generator& g);
Generator generator_from_json(const nlohmann::json& j, const Generator& base);

}  // namespace twp
