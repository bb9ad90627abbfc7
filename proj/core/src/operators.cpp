#include "twp/operators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fft.hpp"

namespace twp {
namespace {

double clipped_fraction(const SchwartzProfile& profile, int k, double nyquist) {
  const double r = std::ldexp(profile.support_radius(), k);
  if (r <= nyquist) return 0.0;
  const int cells = 4096;
  const double h = 2.0 * r / cells;
  double total = 0.0, clipped = 0.0;
  for (int i = 1; i < cells; ++i) {
    double xi = -r + h * i;
    double w = std::abs(profile.spectrum(std::ldexp(xi, -k)));
    total += w;
    if (std::abs(xi) > nyquist) clipped += w;
  }
  return total > 0.0 ? clipped / total : 0.0;
}

void note_nyquist(Diagnostics* diag, const SchwartzProfile& profile, Axis axis, int k,
                  const GridGeometry& geo, const char* context) {
  if (!diag) return;
  if (std::ldexp(profile.support_radius(), k + 1) <= geo.nyquist()) return;
  diag->nyquist.push_back({axis, k, clipped_fraction(profile, k, geo.nyquist()), context});
}

}  // namespace

ScaleRange default_scale_range(const GridGeometry& geo) {
  int lo = static_cast<int>(std::floor(1.0 - std::log2(geo.l())));
  int hi = static_cast<int>(std::floor(std::log2(static_cast<double>(geo.n()) / (8.0 * geo.l()))));
  if (hi < lo) hi = lo;
  return {lo, hi};
}

GridFunction2D partial_convolution(const GridFunction2D& f, Axis axis,
                                   const SchwartzProfile& profile, int k, Diagnostics* diag) {
  note_nyquist(diag, profile, axis, k, f.geometry(), "partial_convolution");
  return apply_axis_multiplier(f, axis,
                               [&](double xi) { return profile.spectrum(std::ldexp(xi, -k)); });
}

GridFunction2D littlewood_paley(const GridFunction2D& f, Axis axis, int k, Diagnostics* diag) {
  static const SchwartzProfile lp = vartheta_profile();
  return partial_convolution(f, axis, lp, k, diag);
}

double ParaproductSpec::lambda_sup() const {
  double s = 0.0;
  for (const auto& [k, v] : lambda) s = std::max(s, std::abs(v));
  return s;
}

void validate(const ParaproductSpec& spec) {
  auto inner = spec.psi.inner_radius();
  if (!inner) throw std::invalid_argument("psi must have an annular spectrum");
  if (spec.psi.support_radius() > 4.0 * *inner * (1.0 + 1e-12))
    throw std::invalid_argument("psi spectrum must lie in a dyadic annulus of ratio 4");
  if (!std::isfinite(spec.lambda_sup())) throw std::invalid_argument("lambda must be finite");
}

GridFunction2D apply_paraproduct(const ParaproductSpec& spec, const GridFunction2D& f,
                                 const GridFunction2D& g, Diagnostics* diag) {
  validate(spec);
  if (f.geometry() != g.geometry()) throw std::invalid_argument("grid geometries differ");
  GridFunction2D out(f.geometry());
  for (const auto& [k, lam] : spec.lambda) {
    if (lam == cplx{}) continue;
    auto pf = partial_convolution(f, Axis::x, spec.phi, k, diag);
    auto pg = partial_convolution(g, Axis::y, spec.psi, k, diag);
    for (std::size_t i = 0; i < out.values().size(); ++i)
      out.values()[i] += lam * pf.values()[i] * pg.values()[i];
  }
  return out;
}

TwistedSymbol induced_symbol(const ParaproductSpec& spec) {
  SymbolTraits t;
  t.name = "paraproduct";
  auto eval = [spec](double t1, double t2) {
    cplx s = 0.0;
    for (const auto& [k, lam] : spec.lambda)
      s += lam * spec.phi.spectrum(std::ldexp(t1, -k)) * spec.psi.spectrum(std::ldexp(t2, -k));
    return s;
  };
  t.origin_value = eval(0.0, 0.0);
  return TwistedSymbol(eval, t);
}

GridFunction2D apply_twisted_multiplier(const TwistedSymbol& m, const GridFunction2D& f,
                                        const GridFunction2D& g) {
  const auto& geo = f.geometry();
  if (geo != g.geometry()) throw std::invalid_argument("grid geometries differ");
  const std::size_t n = geo.n();
  const int ni = static_cast<int>(n);
  const auto table = m.grid_table(geo);
  const auto fx = forward_transform(f, Axis::x);
  const auto gy = forward_transform(g, Axis::y);
  const double inv_l = 1.0 / geo.l();

  std::vector<cplx> phase(n);
  for (std::size_t j = 0; j < n; ++j)
    phase[j] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));

  GridFunction2D out(geo);
  std::vector<cplx> buf(n * n);
  for (std::size_t p = 0; p < n; ++p) {
    const cplx* row = table->data() + p * n;
    bool any = false;
    for (std::size_t q = 0; q < n && !any; ++q) any = row[q] != cplx{};
    if (!any) continue;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t q = 0; q < n; ++q) buf[j * n + q] = row[q] * gy(j, q);
    detail::fft_many(buf.data(), ni, ni, 1, ni, detail::FftSign::backward);
    // e^{2 pi i x_j xi_p} = e^{2 pi i j m_p / N}
    const std::size_t step = geo.index_of_mode(geo.mode(p));
    for (std::size_t j = 0; j < n; ++j) {
      cplx e = phase[(j * step) % n] * (inv_l * inv_l);
      for (std::size_t l = 0; l < n; ++l) out(j, l) += e * fx(p, l) * buf[j * n + l];
    }
  }
  return out;
}

GridFunction2D apply_spatial_multiplier(const SpatialSymbol& sigma, const GridFunction2D& f,
                                        const GridFunction2D& g) {
  const auto& geo = f.geometry();
  if (geo != g.geometry()) throw std::invalid_argument("grid geometries differ");
  const std::size_t n = geo.n();
  if (sigma.separable()) {
    GridFunction2D out(geo);
    for (const auto& term : sigma.terms()) {
      auto t = apply_twisted_multiplier(term.symbol, f, g);
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l)
          out(j, l) += term.amplitude(geo.coordinate(j), geo.coordinate(l)) * t(j, l);
    }
    return out;
  }

  const auto fx = forward_transform(f, Axis::x);
  const auto gy = forward_transform(g, Axis::y);
  const double inv_l = 1.0 / geo.l();
  const double two_pi = 2.0 * std::numbers::pi;
  GridFunction2D out(geo);
  std::vector<cplx> a(n), b(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = geo.coordinate(j);
    for (std::size_t l = 0; l < n; ++l) {
      const double y = geo.coordinate(l);
      for (std::size_t p = 0; p < n; ++p) {
        a[p] = geo.is_nyquist(p) ? cplx{} : inv_l * std::polar(1.0, two_pi * x * geo.frequency(p)) * fx(p, l);
        b[p] = geo.is_nyquist(p) ? cplx{} : inv_l * std::polar(1.0, two_pi * y * geo.frequency(p)) * gy(j, p);
      }
      cplx acc = 0.0;
      for (std::size_t p = 0; p < n; ++p) {
        if (a[p] == cplx{}) continue;
        cplx inner = 0.0;
        for (std::size_t q = 0; q < n; ++q)
          if (b[q] != cplx{}) inner += sigma(x, y, geo.frequency(p), geo.frequency(q)) * b[q];
        acc += a[p] * inner;
      }
      out(j, l) = acc;
    }
  }
  return out;
}

}  // namespace twp
