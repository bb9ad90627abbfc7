#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twp/symbol.hpp"

namespace twp {

// Real arithmetic over named variables: + - * / ^, unary minus, parentheses,
// numbers, pi, e, abs sin cos exp min max theta vartheta and cone(c) with a
// constant aperture c (cone reads the variables tau1, tau2).
class Expression {
 public:
  static Expression parse(const std::string& source,
                          std::vector<std::string> variables = {"tau1", "tau2"});

  // Compiled stack-machine evaluation.
  double evaluate(std::span<const double> vars) const;
  // Tree-walking reference interpreter.
  double interpret(std::span<const double> vars) const;

  const std::string& source() const noexcept { return source_; }
  const std::vector<std::string>& variables() const noexcept { return variables_; }
  bool uses_variable(std::size_t index) const;

  // c such that the expression vanishes wherever |tau1| > c |tau2|, when it
  // can be read off the structure (cone factors, zero constants).
  std::optional<double> inferred_support_constant() const;
  // Degree-0 homogeneity read off the structure.
  bool inferred_homogeneous() const;

  struct Node;

 private:
  struct Instr {
    int op;
    double value;
    int index;
  };

  std::string source_;
  std::vector<std::string> variables_;
  std::shared_ptr<const Node> root_;
  std::vector<Instr> code_;
  std::size_t max_depth_ = 0;

  void compile();
};

// Symbol m(tau1, tau2) from an expression; traits inferred unless overridden.
TwistedSymbol parse_symbol_expression(const std::string& source,
                                      std::optional<double> support_constant = std::nullopt,
                                      std::optional<bool> homogeneous = std::nullopt);

}  // namespace twp
