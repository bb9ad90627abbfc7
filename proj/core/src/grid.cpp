#include "twp/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace twp {

using detail::FftSign;

GridGeometry::GridGeometry(std::size_t n, double l) : n_(n), l_(l) {
  if (n < 8 || (n & (n - 1)) != 0)
    throw std::invalid_argument("grid size must be a power of two >= 8, got " + std::to_string(n));
  if (!(l > 0.0) || !std::isfinite(l))
    throw std::invalid_argument("box side must be positive and finite");
}

std::size_t GridGeometry::index_of_mode(long m) const noexcept {
  long n = static_cast<long>(n_);
  long r = m % n;
  if (r < 0) r += n;
  return static_cast<std::size_t>(r);
}

GridFunction2D::GridFunction2D(GridGeometry geo) : geo_(geo), values_(geo.n() * geo.n()) {}

GridFunction2D::GridFunction2D(GridGeometry geo, std::vector<cplx> values)
    : geo_(geo), values_(std::move(values)) {
  if (values_.size() != geo_.n() * geo_.n())
    throw std::invalid_argument("value count does not match grid");
}

bool GridFunction2D::all_finite() const {
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

static void require_same(const GridGeometry& a, const GridGeometry& b) {
  if (a != b) throw std::invalid_argument("grid geometries differ");
}

GridFunction2D& GridFunction2D::operator+=(const GridFunction2D& o) {
  require_same(geo_, o.geo_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

GridFunction2D& GridFunction2D::operator-=(const GridFunction2D& o) {
  require_same(geo_, o.geo_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

GridFunction2D& GridFunction2D::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  return *this;
}

GridFunction2D operator+(GridFunction2D a, const GridFunction2D& b) { return a += b; }
GridFunction2D operator-(GridFunction2D a, const GridFunction2D& b) { return a -= b; }
GridFunction2D operator*(cplx s, GridFunction2D a) { return a *= s; }

GridFunction2D pointwise_product(const GridFunction2D& a, const GridFunction2D& b) {
  require_same(a.geometry(), b.geometry());
  GridFunction2D out(a.geometry());
  for (std::size_t i = 0; i < out.values().size(); ++i) out.values()[i] = a.values()[i] * b.values()[i];
  return out;
}

double max_abs(const GridFunction2D& f) {
  double m = 0.0;
  for (const auto& v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double l2_distance(const GridFunction2D& a, const GridFunction2D& b) {
  require_same(a.geometry(), b.geometry());
  double s = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) s += std::norm(a.values()[i] - b.values()[i]);
  return std::sqrt(s);
}

double relative_l2_error(const GridFunction2D& got, const GridFunction2D& want) {
  double ref = 0.0;
  for (const auto& v : want.values()) ref += std::norm(v);
  double d = l2_distance(got, want);
  return ref > 0.0 ? d / std::sqrt(ref) : d;
}

namespace {

void transform_axis(GridFunction2D& f, Axis axis, FftSign sign) {
  int n = static_cast<int>(f.n());
  switch (axis) {
    case Axis::x:
      detail::fft_many(f.data(), n, n, n, 1, sign);
      break;
    case Axis::y:
      detail::fft_many(f.data(), n, n, 1, n, sign);
      break;
    case Axis::both:
      detail::fft_2d(f.data(), n, n, sign);
      break;
  }
}

int axis_count(Axis a) { return a == Axis::both ? 2 : 1; }

}  // namespace

GridFunction2D forward_transform(const GridFunction2D& f, Axis axes) {
  GridFunction2D out = f;
  transform_axis(out, axes, FftSign::forward);
  out *= std::pow(f.geometry().spacing(), axis_count(axes));
  return out;
}

GridFunction2D inverse_transform(const GridFunction2D& f, Axis axes) {
  GridFunction2D out = f;
  transform_axis(out, axes, FftSign::backward);
  out *= std::pow(1.0 / f.geometry().l(), axis_count(axes));
  return out;
}

GridFunction2D apply_axis_multiplier(const GridFunction2D& f, Axis axis,
                                     const AxisMultiplier& symbol, bool zero_nyquist) {
  if (axis == Axis::both) throw std::invalid_argument("axis multiplier needs a single axis");
  const auto& geo = f.geometry();
  const std::size_t n = geo.n();
  std::vector<cplx> weight(n);
  for (std::size_t k = 0; k < n; ++k)
    weight[k] = (zero_nyquist && geo.is_nyquist(k)) ? cplx{} : symbol(geo.frequency(k));
  for (auto& w : weight) w /= static_cast<double>(n);

  GridFunction2D out = f;
  transform_axis(out, axis, FftSign::forward);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l) out(j, l) *= weight[axis == Axis::x ? j : l];
  transform_axis(out, axis, FftSign::backward);
  return out;
}

GridFunction2D apply_plane_multiplier(const GridFunction2D& f, const PlaneMultiplier& symbol,
                                      bool zero_nyquist) {
  const auto& geo = f.geometry();
  const std::size_t n = geo.n();
  const double scale = 1.0 / static_cast<double>(n * n);
  GridFunction2D out = f;
  transform_axis(out, Axis::both, FftSign::forward);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < n; ++l) {
      if (zero_nyquist && (geo.is_nyquist(j) || geo.is_nyquist(l))) {
        out(j, l) = 0.0;
        continue;
      }
      out(j, l) *= symbol(geo.frequency(j), geo.frequency(l)) * scale;
    }
  }
  transform_axis(out, Axis::both, FftSign::backward);
  return out;
}

double lp_norm(const GridFunction2D& f, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("lp_norm needs finite p >= 1");
  const double h = f.geometry().spacing();
  double sum = 0.0;
  if (p == 2.0) {
    for (const auto& v : f.values()) sum += std::norm(v);
    return std::sqrt(h * h * sum);
  }
  for (const auto& v : f.values()) sum += std::pow(std::abs(v), p);
  return std::pow(h * h * sum, 1.0 / p);
}

double sobolev_norm(const GridFunction2D& f, double s, double p) {
  if (s < 0.0) throw std::invalid_argument("sobolev_norm needs s >= 0");
  if (s == 0.0) return lp_norm(f, p);
  const double c = 4.0 * std::numbers::pi * std::numbers::pi;
  auto weighted = apply_plane_multiplier(
      f, [&](double a, double b) { return cplx(std::pow(1.0 + c * (a * a + b * b), 0.5 * s)); },
      false);
  return lp_norm(weighted, p);
}

double mixed_sobolev_norm(const GridFunction2D& f, double s, double p) {
  if (s < 0.0) throw std::invalid_argument("mixed_sobolev_norm needs s >= 0");
  if (s == 0.0) return lp_norm(f, p);
  const double c = 4.0 * std::numbers::pi * std::numbers::pi;
  auto weighted = apply_axis_multiplier(
      f, Axis::x, [&](double a) { return cplx(std::pow(1.0 + c * a * a, 0.5 * s)); }, false);
  return lp_norm(weighted, p);
}

GridFunction2D partial_derivative(const GridFunction2D& f, Axis axis, int order) {
  if (order < 0 || order > 6) throw std::invalid_argument("derivative order must be in [0, 6]");
  if (axis == Axis::both) throw std::invalid_argument("partial derivative needs a single axis");
  if (order == 0) return f;
  return apply_axis_multiplier(f, axis, [order](double xi) {
    return std::pow(cplx(0.0, 2.0 * std::numbers::pi * xi), order);
  });
}

GridFunction2D translate(const GridFunction2D& f, GridShift shift) {
  const auto& geo = f.geometry();
  const std::size_t n = geo.n();
  GridFunction2D out(geo);
  std::size_t sj = geo.index_of_mode(shift.dj);
  std::size_t sl = geo.index_of_mode(shift.dl);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t src_j = (j + sj) % n;
    for (std::size_t l = 0; l < n; ++l) out(j, l) = f(src_j, (l + sl) % n);
  }
  return out;
}

GridFunction2D translate(const GridFunction2D& f, double vx, double vy) {
  const double h = f.geometry().spacing();
  double ix = vx / h, iy = vy / h;
  if (ix == std::round(ix) && iy == std::round(iy))
    return translate(f, GridShift{std::lround(ix), std::lround(iy)});
  const double two_pi = 2.0 * std::numbers::pi;
  return apply_plane_multiplier(
      f, [&](double a, double b) { return std::polar(1.0, two_pi * (a * vx + b * vy)); }, false);
}

GridFunction2D modulate(const GridFunction2D& f, double a, double b) {
  const auto& geo = f.geometry();
  GridFunction2D out(geo);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t j = 0; j < geo.n(); ++j)
    for (std::size_t l = 0; l < geo.n(); ++l)
      out(j, l) = f(j, l) * std::polar(1.0, two_pi * (a * geo.coordinate(j) + b * geo.coordinate(l)));
  return out;
}

}  // namespace twp
