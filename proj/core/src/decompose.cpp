#include "twp/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>
#include <stdexcept>

#include "twp/cutoffs.hpp"
#include "twp/error.hpp"

namespace twp {
namespace {

const CutoffProfile kTheta{};
const AnnularProfile kVartheta{};

// e^{i n w} for n in [-n_max, n_max], by repeated multiplication.
std::vector<cplx> harmonics(double w, int n_max) {
  std::vector<cplx> h(static_cast<std::size_t>(2 * n_max + 1));
  cplx step = std::polar(1.0, w);
  h[static_cast<std::size_t>(n_max)] = 1.0;
  cplx up = 1.0, down = 1.0;
  cplx back = std::conj(step);
  for (int n = 1; n <= n_max; ++n) {
    if (n % 16 == 0) {
      up = std::polar(1.0, n * w);
      down = std::conj(up);
    } else {
      up *= step;
      down *= back;
    }
    h[static_cast<std::size_t>(n_max + n)] = up;
    h[static_cast<std::size_t>(n_max - n)] = down;
  }
  return h;
}

double max_difference(const FourierSeriesCoeffs& a, const FourierSeriesCoeffs& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.table.size(); ++i) d = std::max(d, std::abs(a.table[i] - b.table[i]));
  return d;
}

}  // namespace

int shift_exponent(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("support constant must be positive");
  int a = 0;
  while (std::ldexp(1.0, a) < c) ++a;
  return a;
}

DyadicSlice::DyadicSlice(std::shared_ptr<const TwistedSymbol> m, int k, int a)
    : m_(std::move(m)), k_(k), a_(a) {
  if (!m_) throw std::invalid_argument("slice needs a symbol");
  if (a < 0) throw std::invalid_argument("shift exponent must be nonnegative");
}

cplx DyadicSlice::operator()(double tau1, double tau2) const {
  double w1 = kTheta(std::ldexp(tau1, -k_ - a_ - 3));
  if (w1 == 0.0) return 0.0;
  double w2 = kVartheta(std::ldexp(tau2, -k_));
  if (w2 == 0.0) return 0.0;
  return (*m_)(tau1, tau2) * (w1 * w2);
}

DyadicSlice slice_symbol(std::shared_ptr<const TwistedSymbol> m, int k, int a) {
  if (!m) throw std::invalid_argument("slice needs a symbol");
  auto c = m->support_constant();
  if (!c) throw HypothesisViolation("symbol '" + m->name() + "' has no support constant");
  if (*c > 0.0 && a != shift_exponent(*c))
    throw std::invalid_argument("shift exponent " + std::to_string(a) + " does not match c = " +
                                std::to_string(*c));
  DyadicSlice slice(m, k, a);
  const double e1 = slice.tau1_extent();
  const double lo = std::ldexp(1.0, k - 1), hi = std::ldexp(1.0, k + 1);
  double worst = 0.0;
  for (int s = 0; s < 64; ++s) {
    double t2 = lo + (hi - lo) * (s + 0.5) / 64.0;
    for (int r = 0; r <= 128; ++r) {
      double t1 = -e1 + 2.0 * e1 * r / 128.0;
      for (double sign : {1.0, -1.0}) {
        if (std::abs(t1) > *c * t2) worst = std::max(worst, std::abs((*m)(t1, sign * t2)));
      }
    }
  }
  if (worst > 1e-12)
    throw SupportViolation("symbol '" + m->name() + "' is nonzero (" + std::to_string(worst) +
                           ") outside its support cone at scale " + std::to_string(k));
  return slice;
}

FourierSeriesCoeffs fourier_coefficients_fixed(const DyadicSlice& slice, int n_max, std::size_t m) {
  if (n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
  if (m < 2) throw std::invalid_argument("quadrature needs at least two points");
  const double b = slice.box_half_width();
  const double md = static_cast<double>(m);
  auto node = [&](std::size_t j) { return -b + 2.0 * b * static_cast<double>(j) / md; };
  auto range = [&](double extent) {
    double lo = std::ceil((b - extent) * md / (2.0 * b));
    double hi = std::floor((b + extent) * md / (2.0 * b));
    std::size_t j0 = static_cast<std::size_t>(std::max(0.0, lo));
    std::size_t j1 = static_cast<std::size_t>(std::min(md - 1.0, hi));
    return std::make_pair(j0, j1);
  };
  const auto [a0, a1] = range(slice.tau1_extent());
  const auto [b0, b1] = range(slice.tau2_extent());
  const std::size_t rows = a1 - a0 + 1, cols = b1 - b0 + 1;

  std::vector<cplx> v(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) v[r * cols + c] = slice(node(a0 + r), node(b0 + c));

  const int side = 2 * n_max + 1;
  auto twiddle = [&](int n, std::size_t j) {
    long long p = (static_cast<long long>(n) * static_cast<long long>(j)) % static_cast<long long>(m);
    return std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(p) / md);
  };
  // w[n2][r] = sum_c v[r][c] e^{-2 pi i n2 (b0 + c) / M}
  std::vector<cplx> w(static_cast<std::size_t>(side) * rows);
  std::vector<cplx> tw(cols);
  for (int n2 = -n_max; n2 <= n_max; ++n2) {
    for (std::size_t c = 0; c < cols; ++c) tw[c] = twiddle(n2, b0 + c);
    cplx* out = w.data() + static_cast<std::size_t>(n2 + n_max) * rows;
    for (std::size_t r = 0; r < rows; ++r) {
      cplx s = 0.0;
      const cplx* row = v.data() + r * cols;
      for (std::size_t c = 0; c < cols; ++c) s += row[c] * tw[c];
      out[r] = s;
    }
  }
  FourierSeriesCoeffs res;
  res.k = slice.k();
  res.n_max = n_max;
  res.resolution = m;
  res.table.assign(static_cast<std::size_t>(side * side), cplx{});
  std::vector<cplx> tr(rows);
  for (int n1 = -n_max; n1 <= n_max; ++n1) {
    for (std::size_t r = 0; r < rows; ++r) tr[r] = twiddle(n1, a0 + r);
    for (int n2 = -n_max; n2 <= n_max; ++n2) {
      const cplx* col = w.data() + static_cast<std::size_t>(n2 + n_max) * rows;
      cplx s = 0.0;
      for (std::size_t r = 0; r < rows; ++r) s += col[r] * tr[r];
      // Nodes start at -B, so e^{-i pi n tau / B} picks up (-1)^n.
      double sign = ((n1 + n2) % 2 == 0) ? 1.0 : -1.0;
      res.at(n1, n2) = sign * s / (md * md);
    }
  }
  return res;
}

FourierSeriesCoeffs fourier_coefficients(const DyadicSlice& slice, int n_max, std::size_t m,
                                         double tol) {
  if (m < static_cast<std::size_t>(4 * (2 * n_max + 1)))
    throw std::invalid_argument("quadrature resolution must be at least 4 (2 n_max + 1)");
  auto base = fourier_coefficients_fixed(slice, n_max, m);
  auto fine = fourier_coefficients_fixed(slice, n_max, 2 * m);
  double d = max_difference(base, fine);
  if (d > tol)
    throw QuadratureResolutionError("doubling M = " + std::to_string(m) + " moves kappa by " +
                                    std::to_string(d) + " at scale " + std::to_string(slice.k()));
  return base;
}

std::size_t default_resolution(int n_max) {
  return std::max<std::size_t>(8 * static_cast<std::size_t>(2 * n_max + 1), 128);
}

FourierSeriesCoeffs fourier_coefficients_auto(const DyadicSlice& slice, int n_max, double tol,
                                              std::size_t max_resolution) {
  std::size_t m = default_resolution(n_max);
  auto prev = fourier_coefficients_fixed(slice, n_max, m);
  double d = 0.0;
  while (2 * m <= max_resolution) {
    m *= 2;
    auto cur = fourier_coefficients_fixed(slice, n_max, m);
    d = max_difference(prev, cur);
    if (d <= tol) return cur;
    prev = std::move(cur);
  }
  throw NonConvergence("kappa not stable to " + std::to_string(tol) + " at M = " +
                       std::to_string(m) + " (last change " + std::to_string(d) + ")");
}

ScaleRange grid_scale_range(const GridGeometry& geo) {
  int lo = static_cast<int>(std::floor(-std::log2(geo.l())));
  int hi = static_cast<int>(std::ceil(std::log2(geo.nyquist())));
  return {lo, hi};
}

Decomposition decompose(std::shared_ptr<const TwistedSymbol> m, const GridGeometry& geo,
                        const DecompositionOptions& opts) {
  return decompose(std::move(m), opts.scales.value_or(grid_scale_range(geo)), opts);
}

Decomposition decompose(std::shared_ptr<const TwistedSymbol> m, ScaleRange scales,
                        const DecompositionOptions& opts) {
  if (!m) throw std::invalid_argument("decompose needs a symbol");
  if (scales.k_max < scales.k_min) throw std::invalid_argument("empty scale range");
  auto c = m->support_constant();
  if (!c) throw HypothesisViolation("symbol '" + m->name() + "' has no support constant");
  Decomposition d;
  d.a = *c > 0.0 ? shift_exponent(*c) : 0;
  d.scales = scales;
  d.n_max = opts.n_max;
  d.source = m;
  for (int k = scales.k_min; k <= scales.k_max; ++k) {
    auto slice = slice_symbol(m, k, d.a);
    d.coeffs.emplace(k, opts.resolution
                            ? fourier_coefficients_fixed(slice, opts.n_max, *opts.resolution)
                            : fourier_coefficients_auto(slice, opts.n_max, opts.tolerance));
  }
  d.error_budget = reconstruct_symbol(d).sup_error;
  return d;
}

cplx reconstructed_value(const Decomposition& d, double tau1, double tau2) {
  cplx total = 0.0;
  for (const auto& [k, table] : d.coeffs) {
    double w1 = kTheta(std::ldexp(tau1, -k - d.a - 4));
    if (w1 == 0.0) continue;
    double w2 = 0.0;
    for (int i : d.i_list) w2 += kVartheta(std::ldexp(tau2, -k - i));
    if (w2 == 0.0) continue;
    const double scale = std::ldexp(std::numbers::pi, -d.a - 4 - k);
    const auto h1 = harmonics(scale * tau1, d.n_max);
    const auto h2 = harmonics(scale * tau2, d.n_max);
    const int side = 2 * d.n_max + 1;
    cplx s = 0.0;
    for (int r = 0; r < side; ++r) {
      cplx inner = 0.0;
      const cplx* row = table.table.data() + static_cast<std::size_t>(r * side);
      for (int c = 0; c < side; ++c) inner += row[c] * h2[static_cast<std::size_t>(c)];
      s += h1[static_cast<std::size_t>(r)] * inner;
    }
    total += s * (w1 * w2);
  }
  return total;
}

TwistedSymbol reconstructed_symbol(const Decomposition& d) {
  SymbolTraits t;
  t.name = "reconstruction";
  if (d.source) {
    t.support_constant = std::nullopt;
    t.homogeneous = false;
  }
  t.origin_value = cplx{};
  return TwistedSymbol([d](double t1, double t2) { return reconstructed_value(d, t1, t2); }, t);
}

ReconstructionReport reconstruct_symbol(const Decomposition& d, std::size_t radial,
                                        std::size_t angular) {
  if (!d.source) throw std::invalid_argument("decomposition has no source symbol");
  if (radial < 2 || angular < 2) throw std::invalid_argument("need at least two samples per axis");
  const double c = std::max(1.0, d.source->support_constant().value_or(1.0));
  ReconstructionReport rep;
  for (std::size_t r = 0; r < radial; ++r) {
    double e = d.scales.k_min + (d.scales.k_max - d.scales.k_min) * static_cast<double>(r) /
                                    static_cast<double>(radial - 1);
    double t2 = std::exp2(e);
    for (std::size_t q = 0; q < angular; ++q) {
      double s = -2.0 * c + 4.0 * c * static_cast<double>(q) / static_cast<double>(angular - 1);
      double t1 = s * t2;
      for (double sign : {1.0, -1.0}) {
        double err = std::abs((*d.source)(t1, sign * t2) - reconstructed_value(d, t1, sign * t2));
        ++rep.samples;
        if (err > rep.sup_error) {
          rep.sup_error = err;
          rep.worst_tau1 = t1;
          rep.worst_tau2 = sign * t2;
        }
      }
    }
  }
  return rep;
}

std::vector<ParaproductSpec> synthesize_paraproducts(const Decomposition& d) {
  std::vector<ParaproductSpec> specs;
  specs.reserve(d.term_count());
  for (int i : d.i_list) {
    for (int n1 = -d.n_max; n1 <= d.n_max; ++n1) {
      auto phi = make_modulated(n1, std::nullopt, d.a).profile;
      for (int n2 = -d.n_max; n2 <= d.n_max; ++n2) {
        ParaproductSpec spec{phi, make_modulated(n2, i, d.a).profile, {}};
        for (const auto& [k, table] : d.coeffs) spec.lambda[k] = table.at(n1, n2);
        specs.push_back(std::move(spec));
      }
    }
  }
  return specs;
}

GridFunction2D apply_decomposed(const Decomposition& d, const GridFunction2D& f,
                                const GridFunction2D& g, Diagnostics* diag) {
  const auto& geo = f.geometry();
  if (geo != g.geometry()) throw std::invalid_argument("grid geometries differ");
  const int side = 2 * d.n_max + 1;
  const double w = std::ldexp(std::numbers::pi, -d.a - 4);
  GridFunction2D out(geo);
  for (const auto& [k, table] : d.coeffs) {
    if (diag) {
      double phi_edge = std::ldexp(1.0, k + d.a + 5);
      if (phi_edge > geo.nyquist())
        diag->nyquist.push_back({Axis::x, k, 0.0, "apply_decomposed: phi support beyond Nyquist"});
    }
    std::vector<GridFunction2D> gs;
    gs.reserve(static_cast<std::size_t>(side));
    for (int n2 = -d.n_max; n2 <= d.n_max; ++n2) {
      gs.push_back(apply_axis_multiplier(g, Axis::y, [&](double xi) {
        double t = std::ldexp(xi, -k);
        double s = 0.0;
        for (int i : d.i_list) s += kVartheta(std::ldexp(t, -i));
        return s * std::polar(1.0, w * n2 * t);
      }));
    }
    for (int n1 = -d.n_max; n1 <= d.n_max; ++n1) {
      auto fk = apply_axis_multiplier(f, Axis::x, [&](double xi) {
        double t = std::ldexp(xi, -k);
        return kTheta(std::ldexp(t, -d.a - 4)) * std::polar(1.0, w * n1 * t);
      });
      GridFunction2D h(geo);
      for (int n2 = -d.n_max; n2 <= d.n_max; ++n2) {
        cplx kap = table.at(n1, n2);
        if (kap == cplx{}) continue;
        const auto& gv = gs[static_cast<std::size_t>(n2 + d.n_max)].values();
        for (std::size_t i = 0; i < gv.size(); ++i) h.values()[i] += kap * gv[i];
      }
      for (std::size_t i = 0; i < h.values().size(); ++i) out.values()[i] += fk.values()[i] * h.values()[i];
    }
  }
  return out;
}

namespace {

void finish_decay(DecayReport& rep) {
  if (rep.weighted.empty()) return;
  std::vector<double> sorted = rep.weighted;
  std::sort(sorted.begin(), sorted.end());
  std::size_t n = sorted.size();
  rep.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  double mx = sorted.back();
  if (rep.median > 0.0) {
    rep.max_over_median = mx / rep.median;
    rep.flagged = mx > 2.0 * rep.median;
  } else {
    rep.max_over_median = mx > 0.0 ? INFINITY : 0.0;
    rep.flagged = mx > 0.0;
  }
}

}  // namespace

DecayReport decay_report(const FourierSeriesCoeffs& coeffs, std::optional<int> r_max) {
  int rm = r_max.value_or(2 * coeffs.n_max);
  rm = std::min(rm, 2 * coeffs.n_max);
  DecayReport rep;
  rep.raw.assign(static_cast<std::size_t>(rm + 1), 0.0);
  for (int n1 = -coeffs.n_max; n1 <= coeffs.n_max; ++n1)
    for (int n2 = -coeffs.n_max; n2 <= coeffs.n_max; ++n2) {
      int r = std::abs(n1) + std::abs(n2);
      if (r > rm) continue;
      auto& slot = rep.raw[static_cast<std::size_t>(r)];
      slot = std::max(slot, std::abs(coeffs.at(n1, n2)));
    }
  rep.weighted.resize(rep.raw.size());
  for (std::size_t r = 0; r < rep.raw.size(); ++r)
    rep.weighted[r] = rep.raw[r] * std::pow(1.0 + static_cast<double>(r), 10.0);
  finish_decay(rep);
  return rep;
}

DecayReport decay_report(const Decomposition& d, std::optional<int> r_max) {
  DecayReport rep;
  for (const auto& [k, table] : d.coeffs) {
    auto one = decay_report(table, r_max);
    if (rep.raw.empty()) {
      rep.raw = one.raw;
      rep.weighted = one.weighted;
      continue;
    }
    for (std::size_t r = 0; r < rep.raw.size(); ++r) {
      rep.raw[r] = std::max(rep.raw[r], one.raw[r]);
      rep.weighted[r] = std::max(rep.weighted[r], one.weighted[r]);
    }
  }
  finish_decay(rep);
  return rep;
}

nlohmann::json to_json(const Decomposition& d) {
  nlohmann::json coeffs = nlohmann::json::array();
  nlohmann::json resolution = nlohmann::json::object();
  for (const auto& [k, table] : d.coeffs) {
    resolution[std::to_string(k)] = table.resolution;
    for (int n1 = -d.n_max; n1 <= d.n_max; ++n1)
      for (int n2 = -d.n_max; n2 <= d.n_max; ++n2) {
        cplx v = table.at(n1, n2);
        coeffs.push_back({{"k", k}, {"n1", n1}, {"n2", n2}, {"re", v.real()}, {"im", v.imag()}});
      }
  }
  return {{"a", d.a},
          {"k_range", {d.scales.k_min, d.scales.k_max}},
          {"n_max", d.n_max},
          {"i_list", d.i_list},
          {"coeffs", coeffs},
          {"error_budget", d.error_budget},
          {"resolution", resolution}};
}

Decomposition decomposition_from_json(const nlohmann::json& j) {
  Decomposition d;
  try {
    d.a = j.at("a").get<int>();
    auto kr = j.at("k_range");
    d.scales = {kr.at(0).get<int>(), kr.at(1).get<int>()};
    d.n_max = j.at("n_max").get<int>();
    d.i_list = j.at("i_list").get<std::vector<int>>();
    d.error_budget = j.value("error_budget", 0.0);
    if (d.n_max < 0 || d.scales.k_max < d.scales.k_min || d.a < 0)
      throw InvalidConfig("decomposition has an invalid a, k_range or n_max");
    for (int i : d.i_list)
      if (i < -1 || i > 1) throw InvalidConfig("annulus index must be -1, 0 or 1");
    for (int k = d.scales.k_min; k <= d.scales.k_max; ++k) {
      FourierSeriesCoeffs t;
      t.k = k;
      t.n_max = d.n_max;
      t.table.assign(static_cast<std::size_t>((2 * d.n_max + 1) * (2 * d.n_max + 1)), cplx{});
      if (j.contains("resolution") && j["resolution"].contains(std::to_string(k)))
        t.resolution = j["resolution"][std::to_string(k)].get<std::size_t>();
      d.coeffs.emplace(k, std::move(t));
    }
    for (const auto& e : j.at("coeffs")) {
      int k = e.at("k").get<int>(), n1 = e.at("n1").get<int>(), n2 = e.at("n2").get<int>();
      auto it = d.coeffs.find(k);
      if (it == d.coeffs.end() || std::abs(n1) > d.n_max || std::abs(n2) > d.n_max)
        throw InvalidConfig("coefficient index outside the declared ranges");
      it->second.at(n1, n2) = {e.at("re").get<double>(), e.at("im").get<double>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("malformed decomposition: ") + e.what());
  }
  return d;
}

}  // namespace twp
