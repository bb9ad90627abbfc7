#include "twp/generator.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "twp/cutoffs.hpp"
#include "twp/error.hpp"

namespace twp {
namespace {

constexpr double kSeamTolerance = 1e-8;

double wrap(double d, double l) {
  double w = std::fmod(d + 0.5 * l, l);
  if (w < 0.0) w += l;
  return w - 0.5 * l;
}

// Wrapped displacement of every grid coordinate along one axis.
std::vector<double> displacements(const GridGeometry& geo, double center, double scale) {
  std::vector<double> d(geo.n());
  for (std::size_t j = 0; j < geo.n(); ++j) d[j] = scale * wrap(geo.coordinate(j) - center, geo.l());
  return d;
}

GridFunction2D sample_analytic(const Generator& gen, const GridGeometry& geo) {
  const std::size_t n = geo.n();
  const double sx = std::ldexp(1.0, -gen.dilation);
  const auto dx = displacements(geo, gen.center[0], sx);
  const auto dy = displacements(geo, gen.center[1], 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  GridFunction2D out(geo);

  auto envelope = [&](double u, double v, double eps) {
    if (gen.width <= 0.0) return 1.0;
    double w = gen.width / eps;
    return std::exp(-(u * u + v * v) / (2.0 * w * w));
  };

  switch (gen.kind) {
    case GeneratorKind::gaussian:
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) out(j, l) = gen.amplitude * envelope(dx[j], dy[l], 1.0);
      break;
    case GeneratorKind::wave_packet:
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l)
          out(j, l) = gen.amplitude * envelope(dx[j], dy[l], gen.epsilon) *
                      std::polar(1.0, two_pi * (gen.modulation[0] * dx[j] + gen.modulation[1] * dy[l]));
      break;
    case GeneratorKind::band_limited_random: {
      const double delta = gen.lattice > 0.0 ? gen.lattice : 1.0 / geo.l();
      const double r0 = gen.annulus[0], r1 = gen.annulus[1];
      if (!(r0 >= 0.0 && r1 > r0)) throw std::invalid_argument("annulus must satisfy 0 <= r0 < r1");
      const long mmax = static_cast<long>(std::ceil(r1 / delta));
      const std::size_t side = static_cast<std::size_t>(2 * mmax + 1);
      std::vector<cplx> coeff(side * side);
      std::mt19937_64 rng(gen.seed);
      std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
      for (long a = -mmax; a <= mmax; ++a) {
        for (long b = -mmax; b <= mmax; ++b) {
          double r = delta * std::hypot(static_cast<double>(a), static_cast<double>(b));
          if (r < r0 || r >= r1) continue;
          double re = normal(rng);
          double im = normal(rng);
          coeff[static_cast<std::size_t>(a + mmax) * side + static_cast<std::size_t>(b + mmax)] = {re, im};
        }
      }
      // Separable evaluation: sum_a ex[a][j] * (sum_b c[a][b] ey[b][l]).
      std::vector<cplx> ex(side * n), ey(side * n);
      for (std::size_t a = 0; a < side; ++a) {
        double k = delta * (static_cast<double>(a) - static_cast<double>(mmax));
        for (std::size_t j = 0; j < n; ++j) {
          ex[a * n + j] = std::polar(1.0, two_pi * k * dx[j]);
          ey[a * n + j] = std::polar(1.0, two_pi * k * dy[j]);
        }
      }
      std::vector<cplx> partial(side * n);
      for (std::size_t a = 0; a < side; ++a)
        for (std::size_t b = 0; b < side; ++b) {
          cplx c = coeff[a * side + b];
          if (c == cplx{}) continue;
          for (std::size_t l = 0; l < n; ++l) partial[a * n + l] += c * ey[b * n + l];
        }
      for (std::size_t a = 0; a < side; ++a)
        for (std::size_t j = 0; j < n; ++j) {
          cplx e = ex[a * n + j];
          for (std::size_t l = 0; l < n; ++l) out(j, l) += e * partial[a * n + l];
        }
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) out(j, l) *= gen.amplitude * envelope(dx[j], dy[l], 1.0);
      break;
    }
    default:
      throw std::logic_error("not an analytic generator");
  }
  return out;
}

GridFunction2D sample_spectral(const Generator& gen, const GridGeometry& geo) {
  if (!(gen.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const std::size_t n = geo.n();
  const double eps = gen.epsilon;
  const double dil = std::ldexp(1.0, gen.dilation);
  const bool is_phi = gen.kind == GeneratorKind::lemma_phi;
  const double two_pi = 2.0 * std::numbers::pi;
  CutoffProfile theta;

  auto profile = [&](double u, double v) {
    return is_phi ? theta(u) * theta(v) : theta(0.25 * u) * theta(0.25 * v);
  };
  // Spectrum of d -> e^{2 pi i xi0.d} P(eps d) after D_a, times the phase that
  // places the center.
  GridFunction2D spec(geo);
  cplx center_value = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double a = geo.frequency(j);
    for (std::size_t l = 0; l < n; ++l) {
      double b = geo.frequency(l);
      double u = (dil * a - gen.modulation[0]) / eps;
      double v = (b - gen.modulation[1]) / eps;
      double p = profile(u, v);
      if (p == 0.0) continue;
      cplx val = dil * p / (eps * eps);
      center_value += val;
      spec(j, l) = val * std::polar(1.0, -two_pi * (a * gen.center[0] + b * gen.center[1]));
    }
  }
  center_value /= geo.l() * geo.l();
  cplx scale = gen.amplitude;
  if (is_phi) {
    if (std::abs(center_value) == 0.0)
      throw std::invalid_argument("lemma_phi spectrum misses every grid frequency");
    scale /= center_value;
  }
  spec *= scale;
  return inverse_transform(spec);
}

}  // namespace

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::gaussian: return "gaussian";
    case GeneratorKind::wave_packet: return "wave_packet";
    case GeneratorKind::band_limited_random: return "band_limited_random";
    case GeneratorKind::lemma_phi: return "lemma_phi";
    case GeneratorKind::lemma_psi: return "lemma_psi";
  }
  return "unknown";
}

GeneratorKind generator_kind_from_string(const std::string& name) {
  for (auto k : {GeneratorKind::gaussian, GeneratorKind::wave_packet,
                 GeneratorKind::band_limited_random, GeneratorKind::lemma_phi,
                 GeneratorKind::lemma_psi})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown generator kind '" + name + "'");
}

Generator dilate_generator(const Generator& gen, int a) {
  Generator out = gen;
  out.dilation += a;
  return out;
}

double seam_ratio(const GridFunction2D& f, std::array<double, 2> center) {
  const auto& geo = f.geometry();
  const std::size_t n = geo.n();
  double peak = max_abs(f);
  if (peak == 0.0) return 0.0;
  auto seam_index = [&](double c) {
    long i = std::lround((c + 0.5 * geo.l()) / geo.spacing());
    return geo.index_of_mode(i);
  };
  std::size_t js = seam_index(center[0]), ls = seam_index(center[1]);
  double edge = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    edge = std::max(edge, std::abs(f(js, i)));
    edge = std::max(edge, std::abs(f(i, ls)));
  }
  return edge / peak;
}

GridFunction2D sample(const Generator& gen, const GridGeometry& geo) {
  GridFunction2D out = (gen.kind == GeneratorKind::lemma_phi || gen.kind == GeneratorKind::lemma_psi)
                           ? sample_spectral(gen, geo)
                           : sample_analytic(gen, geo);
  bool periodic = gen.kind == GeneratorKind::band_limited_random && gen.width <= 0.0;
  if (gen.check_support && !periodic) {
    double ratio = seam_ratio(out, gen.center);
    if (ratio >= kSeamTolerance)
      throw SupportViolation(to_string(gen.kind) + " sample reaches the box boundary (seam/peak = " +
                             std::to_string(ratio) + ")");
  }
  return out;
}

}  // namespace twp
