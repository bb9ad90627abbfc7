#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace twp {

using cplx = std::complex<double>;

// Periodic N x N box [0, L)^2. Frequencies m/L, m in [-N/2, N/2), stored in FFT order.
class GridGeometry {
 public:
  GridGeometry(std::size_t n, double l);

  std::size_t n() const noexcept { return n_; }
  double l() const noexcept { return l_; }
  double spacing() const noexcept { return l_ / static_cast<double>(n_); }
  double nyquist() const noexcept { return static_cast<double>(n_) / (2.0 * l_); }
  double coordinate(std::size_t j) const noexcept { return static_cast<double>(j) * spacing(); }
  long mode(std::size_t k) const noexcept {
    return k < n_ / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n_);
  }
  double frequency(std::size_t k) const noexcept { return static_cast<double>(mode(k)) / l_; }
  bool is_nyquist(std::size_t k) const noexcept { return k == n_ / 2; }
  std::size_t index_of_mode(long m) const noexcept;

  bool operator==(const GridGeometry& o) const noexcept { return n_ == o.n_ && l_ == o.l_; }
  bool operator!=(const GridGeometry& o) const noexcept { return !(*this == o); }

 private:
  std::size_t n_;
  double l_;
};

// Samples f(x_j, y_l) stored row-major at j * N + l; x runs along rows.
class GridFunction2D {
 public:
  explicit GridFunction2D(GridGeometry geo);
  GridFunction2D(GridGeometry geo, std::vector<cplx> values);

  const GridGeometry& geometry() const noexcept { return geo_; }
  std::size_t n() const noexcept { return geo_.n(); }
  cplx& operator()(std::size_t j, std::size_t l) { return values_[j * geo_.n() + l]; }
  const cplx& operator()(std::size_t j, std::size_t l) const { return values_[j * geo_.n() + l]; }
  std::vector<cplx>& values() noexcept { return values_; }
  const std::vector<cplx>& values() const noexcept { return values_; }
  cplx* data() noexcept { return values_.data(); }
  const cplx* data() const noexcept { return values_.data(); }

  bool all_finite() const;

  GridFunction2D& operator+=(const GridFunction2D& o);
  GridFunction2D& operator-=(const GridFunction2D& o);
  GridFunction2D& operator*=(cplx s);

 private:
  GridGeometry geo_;
  std::vector<cplx> values_;
};

GridFunction2D operator+(GridFunction2D a, const GridFunction2D& b);
GridFunction2D operator-(GridFunction2D a, const GridFunction2D& b);
GridFunction2D operator*(cplx s, GridFunction2D a);
GridFunction2D pointwise_product(const GridFunction2D& a, const GridFunction2D& b);

double max_abs(const GridFunction2D& f);
double l2_distance(const GridFunction2D& a, const GridFunction2D& b);
double relative_l2_error(const GridFunction2D& got, const GridFunction2D& want);

enum class Axis { x, y, both };

// Spectral data share the GridFunction2D container: along each transformed
// axis the index is a frequency slot in FFT order.
GridFunction2D forward_transform(const GridFunction2D& f, Axis axes = Axis::both);
GridFunction2D inverse_transform(const GridFunction2D& f, Axis axes = Axis::both);

using AxisMultiplier = std::function<cplx(double)>;
using PlaneMultiplier = std::function<cplx(double, double)>;

// Fourier multiplier along one axis (x or y). The unpaired -N/2 slot is zeroed
// when zero_nyquist is set.
GridFunction2D apply_axis_multiplier(const GridFunction2D& f, Axis axis,
                                     const AxisMultiplier& symbol, bool zero_nyquist = true);
GridFunction2D apply_plane_multiplier(const GridFunction2D& f, const PlaneMultiplier& symbol,
                                      bool zero_nyquist = true);

double lp_norm(const GridFunction2D& f, double p);
double sobolev_norm(const GridFunction2D& f, double s, double p);
double mixed_sobolev_norm(const GridFunction2D& f, double s, double p);

GridFunction2D partial_derivative(const GridFunction2D& f, Axis axis, int order);

struct GridShift {
  long dj = 0;
  long dl = 0;
};

// (S_v f)(x, y) = f(x + v_x, y + v_y).
GridFunction2D translate(const GridFunction2D& f, GridShift shift);
GridFunction2D translate(const GridFunction2D& f, double vx, double vy);

// Multiplies f by exp(2 pi i (a x + b y)).
GridFunction2D modulate(const GridFunction2D& f, double a, double b);

}  // namespace twp
