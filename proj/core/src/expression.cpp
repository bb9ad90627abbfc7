#include "twp/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

#include "twp/cutoffs.hpp"
#include "twp/error.hpp"

namespace twp {

namespace {

enum Op {
  kConst, kVar, kNeg, kAdd, kSub, kMul, kDiv, kPow,
  kAbs, kSin, kCos, kExp, kMin, kMax, kTheta, kVartheta, kCone
};

struct FunctionInfo {
  const char* name;
  Op op;
  int arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"abs", kAbs, 1},   {"sin", kSin, 1},     {"cos", kCos, 1},
    {"exp", kExp, 1},   {"min", kMin, 2},     {"max", kMax, 2},
    {"theta", kTheta, 1}, {"vartheta", kVartheta, 1}, {"cone", kCone, 1},
};

const CutoffProfile kThetaFn{};
const AnnularProfile kVarthetaFn{};

double apply_unary(int op, double a) {
  switch (op) {
    case kNeg: return -a;
    case kAbs: return std::abs(a);
    case kSin: return std::sin(a);
    case kCos: return std::cos(a);
    case kExp: return std::exp(a);
    case kTheta: return kThetaFn(a);
    case kVartheta: return kVarthetaFn(a);
  }
  throw std::logic_error("bad unary op");
}

double apply_binary(int op, double a, double b) {
  switch (op) {
    case kAdd: return a + b;
    case kSub: return a - b;
    case kMul: return a * b;
    case kDiv: return a / b;
    case kPow: return std::pow(a, b);
    case kMin: return std::min(a, b);
    case kMax: return std::max(a, b);
  }
  throw std::logic_error("bad binary op");
}

bool is_unary(int op) {
  return op == kNeg || op == kAbs || op == kSin || op == kCos || op == kExp || op == kTheta ||
         op == kVartheta;
}

}  // namespace

struct Expression::Node {
  int op = kConst;
  double value = 0.0;  // constant, or aperture of cone
  int index = -1;      // variable slot
  std::vector<std::shared_ptr<const Node>> kids;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make(int op, std::vector<NodePtr> kids, double value = 0.0, int index = -1) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->kids = std::move(kids);
  n->value = value;
  n->index = index;
  return n;
}

bool is_constant(const NodePtr& n) {
  if (n->op == kVar || n->op == kCone) return false;
  return std::all_of(n->kids.begin(), n->kids.end(), is_constant);
}

double eval_node(const Expression::Node& n, std::span<const double> vars, int t1, int t2) {
  switch (n.op) {
    case kConst: return n.value;
    case kVar: return vars[static_cast<std::size_t>(n.index)];
    case kCone: return cone_value(n.value, vars[static_cast<std::size_t>(t1)], vars[static_cast<std::size_t>(t2)]);
  }
  if (is_unary(n.op)) return apply_unary(n.op, eval_node(*n.kids[0], vars, t1, t2));
  return apply_binary(n.op, eval_node(*n.kids[0], vars, t1, t2), eval_node(*n.kids[1], vars, t1, t2));
}

class Parser {
 public:
  Parser(const std::string& src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

  NodePtr parse() {
    auto n = expr();
    skip();
    if (pos_ != src_.size()) throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
    return n;
  }

 private:
  const std::string& src_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) throw ParseError(std::string("expected '") + c + "' before end of input", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(kAdd, {lhs, term()});
      else if (accept('-')) lhs = make(kSub, {lhs, term()});
      else return lhs;
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(kMul, {lhs, unary()});
      else if (accept('/')) lhs = make(kDiv, {lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(kNeg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return make(kPow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      auto n = expr();
      expect(')');
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  NodePtr number() {
    const char* begin = src_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError("malformed number", pos_);
    pos_ += static_cast<std::size_t>(end - begin);
    return make(kConst, {}, v);
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string name = src_.substr(start, pos_ - start);
    skip();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      ++pos_;
      const FunctionInfo* fn = nullptr;
      for (const auto& f : kFunctions)
        if (name == f.name) fn = &f;
      if (!fn) throw UnknownIdentifier(name, start);
      std::vector<NodePtr> args;
      if (!accept(')')) {
        do args.push_back(expr());
        while (accept(','));
        expect(')');
      }
      if (static_cast<int>(args.size()) != fn->arity)
        throw ParseError(name + " takes " + std::to_string(fn->arity) + " argument(s), got " +
                             std::to_string(args.size()),
                         start);
      if (fn->op == kCone) {
        if (!is_constant(args[0])) throw ParseError("cone aperture must be a constant", start);
        double c = eval_node(*args[0], {}, 0, 1);
        if (!(c > 0.0)) throw ParseError("cone aperture must be positive", start);
        if (slot("tau1") < 0 || slot("tau2") < 0) throw ParseError("cone needs tau1 and tau2", start);
        return make(kCone, {}, c);
      }
      return make(fn->op, std::move(args));
    }
    if (name == "pi") return make(kConst, {}, std::numbers::pi);
    if (name == "e") return make(kConst, {}, std::numbers::e);
    int idx = slot(name);
    if (idx < 0) throw UnknownIdentifier(name, start);
    return make(kVar, {}, 0.0, idx);
  }

  int slot(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return static_cast<int>(i);
    return -1;
  }
};

std::optional<double> support_of(const Expression::Node& n) {
  switch (n.op) {
    case kConst: return n.value == 0.0 ? std::optional<double>(0.0) : std::nullopt;
    case kCone: return n.value;
    case kNeg: return support_of(*n.kids[0]);
    case kMul: {
      auto a = support_of(*n.kids[0]), b = support_of(*n.kids[1]);
      if (a && b) return std::min(*a, *b);
      return a ? a : b;
    }
    case kDiv: return support_of(*n.kids[0]);
    case kAdd:
    case kSub: {
      auto a = support_of(*n.kids[0]), b = support_of(*n.kids[1]);
      if (a && b) return std::max(*a, *b);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

bool homogeneous_of(const Expression::Node& n) {
  switch (n.op) {
    case kConst:
    case kCone: return true;
    case kNeg:
    case kAbs: return homogeneous_of(*n.kids[0]);
    case kAdd:
    case kSub:
    case kMul:
    case kDiv:
    case kMin:
    case kMax: return homogeneous_of(*n.kids[0]) && homogeneous_of(*n.kids[1]);
  }
  return false;
}

bool uses(const Expression::Node& n, int index) {
  if (n.op == kVar) return n.index == index;
  if (n.op == kCone) return true;
  return std::any_of(n.kids.begin(), n.kids.end(), [&](const auto& k) { return uses(*k, index); });
}

}  // namespace

Expression Expression::parse(const std::string& source, std::vector<std::string> variables) {
  Expression e;
  e.source_ = source;
  e.variables_ = std::move(variables);
  Parser p(e.source_, e.variables_);
  e.root_ = p.parse();
  e.compile();
  return e;
}

void Expression::compile() {
  code_.clear();
  std::size_t depth = 0;
  max_depth_ = 0;
  auto emit = [&](auto&& self, const Node& n) -> void {
    for (const auto& k : n.kids) self(self, *k);
    if (n.op == kConst || n.op == kVar || n.op == kCone) {
      ++depth;
    } else if (!is_unary(n.op)) {
      --depth;
    }
    max_depth_ = std::max(max_depth_, depth);
    code_.push_back({n.op, n.value, n.index});
  };
  emit(emit, *root_);
}

double Expression::evaluate(std::span<const double> vars) const {
  if (vars.size() < variables_.size()) throw std::invalid_argument("too few variable values");
  double small[32]{};
  std::vector<double> big;
  double* stack = small;
  if (max_depth_ > 32) {
    big.resize(max_depth_);
    stack = big.data();
  }
  std::size_t sp = 0;
  const int t1 = 0, t2 = 1;
  for (const auto& in : code_) {
    switch (in.op) {
      case kConst: stack[sp++] = in.value; break;
      case kVar: stack[sp++] = vars[static_cast<std::size_t>(in.index)]; break;
      case kCone: stack[sp++] = cone_value(in.value, vars[t1], vars[t2]); break;
      default:
        if (is_unary(in.op)) {
          stack[sp - 1] = apply_unary(in.op, stack[sp - 1]);
        } else {
          --sp;
          stack[sp - 1] = apply_binary(in.op, stack[sp - 1], stack[sp]);
        }
    }
  }
  return stack[0];
}

double Expression::interpret(std::span<const double> vars) const {
  if (vars.size() < variables_.size()) throw std::invalid_argument("too few variable values");
  return eval_node(*root_, vars, 0, 1);
}

bool Expression::uses_variable(std::size_t index) const { return uses(*root_, static_cast<int>(index)); }

std::optional<double> Expression::inferred_support_constant() const { return support_of(*root_); }

bool Expression::inferred_homogeneous() const { return homogeneous_of(*root_); }

TwistedSymbol parse_symbol_expression(const std::string& source,
                                      std::optional<double> support_constant,
                                      std::optional<bool> homogeneous) {
  auto expr = std::make_shared<const Expression>(Expression::parse(source));
  SymbolTraits t;
  t.name = source;
  t.support_constant = support_constant ? support_constant : expr->inferred_support_constant();
  t.homogeneous = homogeneous.value_or(expr->inferred_homogeneous());
  const double origin[2] = {0.0, 0.0};
  double v0 = expr->evaluate(origin);
  t.origin_value = std::isfinite(v0) ? cplx(v0) : cplx{};
  return TwistedSymbol(
      [expr](double t1, double t2) {
        const double v[2] = {t1, t2};
        return cplx(expr->evaluate(v));
      },
      t);
}

}  // namespace twp
