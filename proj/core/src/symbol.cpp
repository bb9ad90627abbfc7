#include "twp/symbol.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <stdexcept>

#include "twp/cutoffs.hpp"
#include "twp/error.hpp"

namespace twp {

struct TwistedSymbol::Cache {
  std::shared_mutex mutex;
  std::map<std::pair<std::size_t, double>, std::shared_ptr<const std::vector<cplx>>> tables;
};

TwistedSymbol::TwistedSymbol(Evaluator eval, SymbolTraits traits)
    : eval_(std::move(eval)), traits_(std::move(traits)), cache_(std::make_shared<Cache>()) {
  if (!eval_) throw std::invalid_argument("symbol needs an evaluator");
  if (traits_.support_constant && !(*traits_.support_constant >= 0.0))
    throw std::invalid_argument("support constant must be nonnegative");
}

cplx TwistedSymbol::operator()(double tau1, double tau2) const {
  if (tau1 == 0.0 && tau2 == 0.0) {
    if (traits_.origin_value) return *traits_.origin_value;
    if (traits_.homogeneous) return 0.0;
  }
  return eval_(tau1, tau2);
}

std::shared_ptr<const std::vector<cplx>> TwistedSymbol::grid_table(const GridGeometry& geo) const {
  const auto key = std::make_pair(geo.n(), geo.l());
  {
    std::shared_lock lock(cache_->mutex);
    auto it = cache_->tables.find(key);
    if (it != cache_->tables.end()) return it->second;
  }
  const std::size_t n = geo.n();
  auto table = std::make_shared<std::vector<cplx>>(n * n);
  for (std::size_t p = 0; p < n; ++p) {
    if (geo.is_nyquist(p)) continue;
    for (std::size_t q = 0; q < n; ++q) {
      if (geo.is_nyquist(q)) continue;
      (*table)[p * n + q] = (*this)(geo.frequency(p), geo.frequency(q));
    }
  }
  std::unique_lock lock(cache_->mutex);
  auto [it, inserted] = cache_->tables.emplace(key, std::move(table));
  return it->second;
}

double TwistedSymbol::support_leakage(const GridGeometry& geo) const {
  if (!traits_.support_constant) return 0.0;
  const double c = *traits_.support_constant;
  double worst = 0.0;
  auto probe = [&](double t1, double t2) {
    if (std::abs(t1) > c * std::abs(t2)) worst = std::max(worst, std::abs((*this)(t1, t2)));
  };
  for (std::size_t p = 0; p < geo.n(); ++p)
    for (std::size_t q = 0; q < geo.n(); ++q) probe(geo.frequency(p), geo.frequency(q));
  // Log-polar sample reaching inside the cone boundary at several scales.
  for (int e = -12; e <= 12; ++e) {
    double r = std::exp2(0.5 * e);
    for (int k = 0; k < 256; ++k) {
      double ang = 2.0 * std::numbers::pi * (k + 0.5) / 256.0;
      probe(r * std::cos(ang), r * std::sin(ang));
    }
  }
  return worst;
}

void TwistedSymbol::check_support(const GridGeometry& geo, double tol) const {
  double leak = support_leakage(geo);
  if (leak > tol)
    throw SupportViolation("symbol '" + traits_.name + "' is nonzero (" + std::to_string(leak) +
                           ") outside |tau1| <= " + std::to_string(*traits_.support_constant) +
                           " |tau2|");
}

TwistedSymbol zero_symbol() {
  SymbolTraits t;
  t.name = "zero";
  t.support_constant = 0.0;
  t.homogeneous = true;
  return TwistedSymbol([](double, double) { return cplx{}; }, t);
}

TwistedSymbol constant_symbol(cplx value) {
  SymbolTraits t;
  t.name = "constant";
  t.homogeneous = true;
  t.origin_value = value;
  if (value == cplx{}) t.support_constant = 0.0;
  return TwistedSymbol([value](double, double) { return value; }, t);
}

double cone_value(double c, double tau1, double tau2) {
  const double r = std::abs(tau2);
  if (r == 0.0) return 0.0;
  static const CutoffProfile theta;
  static const AnnularProfile vartheta;
  // vartheta(2^-k tau2) is nonzero only for k = floor(log2 |tau2|) and its neighbour.
  int k0 = std::ilogb(r);
  double sum = 0.0;
  for (int k = k0 - 1; k <= k0 + 2; ++k) {
    double v = vartheta(std::ldexp(tau2, -k));
    if (v == 0.0) continue;
    sum += theta(std::ldexp(tau1, 1 - k) / c) * v;
  }
  return sum;
}

TwistedSymbol cone_symbol(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("cone aperture must be positive");
  SymbolTraits t;
  t.name = "cone(" + std::to_string(c) + ")";
  t.support_constant = c;
  t.homogeneous = true;
  return TwistedSymbol([c](double t1, double t2) { return cplx(cone_value(c, t1, t2)); }, t);
}

TwistedSymbol hard_cone_symbol(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("cone aperture must be positive");
  SymbolTraits t;
  t.name = "hard_cone(" + std::to_string(c) + ")";
  t.support_constant = c;
  t.homogeneous = true;
  return TwistedSymbol(
      [c](double t1, double t2) {
        return cplx(t2 != 0.0 && std::abs(t1) <= 0.5 * c * std::abs(t2) ? 1.0 : 0.0);
      },
      t);
}

TwistedSymbol product_symbol(const TwistedSymbol& a, const TwistedSymbol& b) {
  SymbolTraits t;
  t.name = a.name() + "*" + b.name();
  auto ca = a.support_constant(), cb = b.support_constant();
  if (ca && cb)
    t.support_constant = std::min(*ca, *cb);
  else if (ca)
    t.support_constant = ca;
  else
    t.support_constant = cb;
  t.homogeneous = a.homogeneous() && b.homogeneous();
  t.origin_value = a(0.0, 0.0) * b(0.0, 0.0);
  return TwistedSymbol([a, b](double t1, double t2) { return a(t1, t2) * b(t1, t2); }, t);
}

SpatialSymbol::SpatialSymbol(Evaluator eval, std::optional<double> support_constant,
                             std::string name)
    : eval_(std::move(eval)), support_(support_constant), name_(std::move(name)) {
  if (!eval_) throw std::invalid_argument("spatial symbol needs an evaluator");
}

SpatialSymbol::SpatialSymbol(std::vector<Term> terms, std::string name)
    : terms_(std::move(terms)), name_(std::move(name)) {
  if (terms_.empty()) throw std::invalid_argument("spatial symbol needs at least one term");
  bool all_known = true;
  double c = 0.0;
  for (const auto& t : terms_) {
    if (!t.amplitude) throw std::invalid_argument("spatial term needs an amplitude");
    auto tc = t.symbol.support_constant();
    if (!tc) all_known = false; else c = std::max(c, *tc);
  }
  if (all_known) support_ = c;
  eval_ = [terms = terms_](double x, double y, double t1, double t2) {
    cplx s = 0.0;
    for (const auto& t : terms) s += t.amplitude(x, y) * t.symbol(t1, t2);
    return s;
  };
}

SpatialSymbol SpatialSymbol::from_symbol(const TwistedSymbol& m) {
  return SpatialSymbol({Term{[](double, double) { return cplx(1.0); }, m}}, m.name());
}

cplx SpatialSymbol::operator()(double x, double y, double tau1, double tau2) const {
  return eval_(x, y, tau1, tau2);
}

double SpatialSymbol::support_leakage(const GridGeometry& geo) const {
  if (!support_) return 0.0;
  const double c = *support_;
  const std::size_t n = geo.n();
  const std::size_t stride = std::max<std::size_t>(1, n / 16);
  double worst = 0.0;
  for (std::size_t j = 0; j < n; j += stride)
    for (std::size_t l = 0; l < n; l += stride)
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) {
          double t1 = geo.frequency(p), t2 = geo.frequency(q);
          if (std::abs(t1) > c * std::abs(t2))
            worst = std::max(worst, std::abs(eval_(geo.coordinate(j), geo.coordinate(l), t1, t2)));
        }
  return worst;
}

SpatialSymbol::Amplitude sinusoidal_amplitude(double depth, double l, int kx, int ky) {
  const double w = 2.0 * std::numbers::pi / l;
  return [=](double x, double y) {
    return cplx(1.0 + depth * std::sin(w * kx * x) * std::cos(w * ky * y));
  };
}

}  // namespace twp
