#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "twp/cutoffs.hpp"
#include "twp/operators.hpp"

using namespace twp;

namespace {

GridFunction2D random_field(const GridGeometry& geo, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  GridFunction2D f(geo);
  for (auto& v : f.values()) v = {nd(rng), nd(rng)};
  return f;
}

// Random spectrum restricted to |xi_1| < bx, |xi_2| < by.
GridFunction2D random_trig(const GridGeometry& geo, double bx, double by, std::uint64_t seed) {
  auto hat = forward_transform(random_field(geo, seed));
  for (std::size_t p = 0; p < geo.n(); ++p)
    for (std::size_t q = 0; q < geo.n(); ++q)
      if (!(std::abs(geo.frequency(p)) < bx && std::abs(geo.frequency(q)) < by)) hat(p, q) = 0.0;
  return inverse_transform(hat);
}

// sum_{xi, eta} m(xi1, eta2) f_hat(xi) g_hat(eta) e^{2 pi i (xi + eta).x} / L^4
GridFunction2D brute_twisted(const TwistedSymbol& m, const GridFunction2D& f, const GridFunction2D& g) {
  const auto& geo = f.geometry();
  const std::size_t n = geo.n();
  const double l = geo.l();
  auto fh = forward_transform(f), gh = forward_transform(g);
  GridFunction2D out(geo);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      double x = geo.coordinate(j), y = geo.coordinate(k);
      cplx s = 0;
      for (std::size_t p1 = 0; p1 < n; ++p1)
        for (std::size_t p2 = 0; p2 < n; ++p2)
          for (std::size_t q1 = 0; q1 < n; ++q1)
            for (std::size_t q2 = 0; q2 < n; ++q2) {
              if (geo.is_nyquist(p1) || geo.is_nyquist(q2)) continue;
              double a = geo.frequency(p1) + geo.frequency(q1), b = geo.frequency(p2) + geo.frequency(q2);
              s += m(geo.frequency(p1), geo.frequency(q2)) * fh(p1, p2) * gh(q1, q2) *
                   std::polar(1.0, 2 * std::numbers::pi * (a * x + b * y));
            }
      out(j, k) = s / (l * l * l * l);
    }
  return out;
}

ParaproductSpec unit_spec(const GridGeometry& geo) {
  ParaproductSpec s{theta_profile(), vartheta_profile(), {}};
  auto r = default_scale_range(geo);
  for (int k = r.k_min; k <= r.k_max; ++k) s.lambda[k] = cplx(1.0 + 0.25 * k, -0.5 * k);
  return s;
}

}  // namespace

TEST(TwistedMultiplier, MatchesQuadrupleSum) {
  GridGeometry geo(8, 2.0);
  TwistedSymbol m([](double a, double b) { return cplx(std::cos(a + 0.3 * b), a * b); });
  auto f = random_field(geo, 1), g = random_field(geo, 2);
  EXPECT_LT(relative_l2_error(apply_twisted_multiplier(m, f, g), brute_twisted(m, f, g)), 1e-12);
  auto c = cone_symbol(1.0);
  EXPECT_LT(relative_l2_error(apply_twisted_multiplier(c, f, g), brute_twisted(c, f, g)), 1e-12);
}

TEST(TwistedMultiplier, UnitSymbolIsProduct) {
  GridGeometry geo(32, 4.0);
  auto f = random_trig(geo, 3.0, 4.0, 3), g = random_trig(geo, 4.0, 3.0, 4);
  auto t = apply_twisted_multiplier(constant_symbol(1.0), f, g);
  EXPECT_LT(relative_l2_error(t, pointwise_product(f, g)), 1e-13);
}

TEST(TwistedMultiplier, SplitsForTensorSymbols) {
  GridGeometry geo(32, 4.0);
  auto f = random_trig(geo, 3.0, 4.0, 5), g = random_trig(geo, 4.0, 3.0, 6);
  auto a = [](double t) { return cplx(std::exp(-t * t)); };
  auto b = [](double t) { return cplx(1.0 + t * t, t); };
  TwistedSymbol m([&](double t1, double t2) { return a(t1) * b(t2); });
  auto want = pointwise_product(apply_axis_multiplier(f, Axis::x, a), apply_axis_multiplier(g, Axis::y, b));
  EXPECT_LT(relative_l2_error(apply_twisted_multiplier(m, f, g), want), 1e-13);
}

TEST(TwistedMultiplier, TranslationEquivariant) {
  GridGeometry geo(32, 4.0);
  auto f = random_field(geo, 7), g = random_field(geo, 8);
  auto m = cone_symbol(1.0);
  GridShift s{5, -9};
  auto lhs = apply_twisted_multiplier(m, translate(f, s), translate(g, s));
  auto rhs = translate(apply_twisted_multiplier(m, f, g), s);
  EXPECT_LT(relative_l2_error(lhs, rhs), 1e-13);
}

TEST(TwistedMultiplier, BilinearAndGeometryChecked) {
  GridGeometry geo(16, 2.0);
  auto f1 = random_field(geo, 9), f2 = random_field(geo, 10), g = random_field(geo, 11);
  auto m = cone_symbol(0.5);
  auto lhs = apply_twisted_multiplier(m, f1 + cplx(2.0, 1.0) * f2, g);
  auto rhs = apply_twisted_multiplier(m, f1, g) + cplx(2.0, 1.0) * apply_twisted_multiplier(m, f2, g);
  EXPECT_LT(relative_l2_error(lhs, rhs), 1e-13);
  EXPECT_THROW(apply_twisted_multiplier(m, f1, random_field(GridGeometry(16, 3.0), 1)), std::invalid_argument);
}

TEST(Paraproduct, EqualsInducedMultiplier) {
  GridGeometry geo(64, 8.0);
  auto spec = unit_spec(geo);
  auto f = random_field(geo, 12), g = random_field(geo, 13);
  EXPECT_LT(relative_l2_error(apply_paraproduct(spec, f, g),
                              apply_twisted_multiplier(induced_symbol(spec), f, g)),
            1e-12);
}

TEST(Paraproduct, ValidateRejectsNonAnnularPsi) {
  ParaproductSpec bad{theta_profile(), theta_profile(), {{0, 1.0}}};
  EXPECT_THROW(validate(bad), std::invalid_argument);
  ParaproductSpec wide{theta_profile(),
                       SchwartzProfile([](double) { return cplx(1.0); }, 8.0, 1.0), {{0, 1.0}}};
  EXPECT_THROW(validate(wide), std::invalid_argument);
  ParaproductSpec ok{theta_profile(), vartheta_profile(), {{0, 1.0}, {1, 2.0}}};
  EXPECT_NO_THROW(validate(ok));
  EXPECT_EQ(ok.lambda_sup(), 2.0);
}

TEST(LittlewoodPaley, PartitionRecoversBandLimited) {
  GridGeometry geo(128, 16.0);
  // x-frequencies 1/4 <= |xi_1| <= 1; Delta_k for k in [-2, 0] covers [1/8, 2].
  auto hat = forward_transform(random_field(geo, 14));
  for (std::size_t p = 0; p < 128; ++p) {
    double a = std::abs(geo.frequency(p));
    if (a < 0.25 || a > 1.0)
      for (std::size_t q = 0; q < 128; ++q) hat(p, q) = 0.0;
  }
  auto f = inverse_transform(hat);
  GridFunction2D sum(geo);
  for (int k = -3; k <= 1; ++k) sum += littlewood_paley(f, Axis::x, k);
  EXPECT_LT(relative_l2_error(sum, f), 1e-14);
  EXPECT_LT(max_abs(littlewood_paley(f, Axis::x, 3)), 1e-14);
}

TEST(PartialConvolution, MatchesAxisMultiplier) {
  GridGeometry geo(32, 4.0);
  auto f = random_field(geo, 15);
  auto vt = make_vartheta(make_theta());
  auto want = apply_axis_multiplier(f, Axis::y, [&](double xi) { return cplx(vt(xi / 2.0)); });
  EXPECT_LT(relative_l2_error(partial_convolution(f, Axis::y, vartheta_profile(), 1), want), 1e-15);
}

TEST(PartialConvolution, NyquistWarning) {
  GridGeometry geo(16, 4.0);  // Nyquist 2
  auto f = random_field(geo, 16);
  Diagnostics d;
  partial_convolution(f, Axis::x, vartheta_profile(), -1, &d);
  EXPECT_TRUE(d.nyquist.empty());
  partial_convolution(f, Axis::x, vartheta_profile(), 1, &d);
  ASSERT_EQ(d.nyquist.size(), 1u);
  EXPECT_EQ(d.nyquist[0].k, 1);
  EXPECT_GT(d.nyquist[0].clipped_mass, 0.0);
}

TEST(ScaleRange, Defaults) {
  EXPECT_EQ(default_scale_range(GridGeometry(128, 16.0)), (ScaleRange{-3, 0}));
  EXPECT_EQ(default_scale_range(GridGeometry(256, 4.0)), (ScaleRange{-1, 3}));
  EXPECT_EQ((ScaleRange{-2, 3}).size(), 6);
}

TEST(SpatialMultiplier, ReducesToTwistedForConstantAmplitude) {
  GridGeometry geo(16, 4.0);
  auto f = random_field(geo, 17), g = random_field(geo, 18);
  auto m = cone_symbol(1.0);
  EXPECT_LT(relative_l2_error(apply_spatial_multiplier(SpatialSymbol::from_symbol(m), f, g),
                              apply_twisted_multiplier(m, f, g)),
            1e-14);
}

TEST(SpatialMultiplier, GeneralPathMatchesSeparable) {
  GridGeometry geo(16, 4.0);
  auto f = random_field(geo, 19), g = random_field(geo, 20);
  auto amp = sinusoidal_amplitude(0.5, geo.l(), 1, 2);
  auto m = cone_symbol(1.0);
  SpatialSymbol sep({{amp, m}});
  SpatialSymbol gen([amp, m](double x, double y, double t1, double t2) { return amp(x, y) * m(t1, t2); }, 1.0);
  auto a = apply_spatial_multiplier(sep, f, g);
  EXPECT_LT(relative_l2_error(apply_spatial_multiplier(gen, f, g), a), 1e-13);
  // sigma(x, y, .) = amp(x, y) m: pointwise amplitude times T_m
  GridFunction2D want = apply_twisted_multiplier(m, f, g);
  for (std::size_t j = 0; j < 16; ++j)
    for (std::size_t l = 0; l < 16; ++l) want(j, l) *= amp(geo.coordinate(j), geo.coordinate(l));
  EXPECT_LT(relative_l2_error(a, want), 1e-14);
}

TEST(PartialConvolution, MatchesSpatialQuadrature) {
  // (P f)(x) = sum_j h f(x_j) sum_m phi(x - x_j - m L); exact for this band.
  GridGeometry geo(16, 4.0);
  auto f = random_field(geo, 22);
  auto phi = theta_profile();
  const double h = geo.spacing();
  std::vector<cplx> kernel(16);
  for (std::size_t d = 0; d < 16; ++d)
    for (int m = -12; m <= 12; ++m) kernel[d] += phi.space(static_cast<double>(d) * h - m * geo.l());
  GridFunction2D want(geo);
  for (std::size_t j = 0; j < 16; ++j)
    for (std::size_t l = 0; l < 16; ++l)
      for (std::size_t i = 0; i < 16; ++i) want(j, l) += h * f(i, l) * kernel[(j + 16 - i) % 16];
  EXPECT_LT(relative_l2_error(partial_convolution(f, Axis::x, phi, 0), want), 1e-8);
}

TEST(LittlewoodPaley, SingleModes) {
  GridGeometry geo(64, 8.0);
  GridFunction2D at(geo), above(geo);
  for (std::size_t j = 0; j < 64; ++j)
    for (std::size_t l = 0; l < 64; ++l) {
      at(j, l) = std::polar(1.0, 2 * std::numbers::pi * 0.5 * geo.coordinate(l));
      above(j, l) = std::polar(1.0, 2 * std::numbers::pi * 2.0 * geo.coordinate(l));
    }
  EXPECT_LT(relative_l2_error(littlewood_paley(at, Axis::y, -1), at), 1e-14);
  EXPECT_LT(max_abs(littlewood_paley(above, Axis::y, -1)), 1e-14);
}

TEST(Paraproduct, SingleModesAndZeroLambda) {
  GridGeometry geo(32, 8.0);
  const double a = 0.25, b = 0.5, c = -0.375, d = 1.0;
  GridFunction2D f(geo), g(geo), prod(geo);
  for (std::size_t j = 0; j < 32; ++j)
    for (std::size_t l = 0; l < 32; ++l) {
      double x = geo.coordinate(j), y = geo.coordinate(l);
      f(j, l) = std::polar(1.0, 2 * std::numbers::pi * (a * x + b * y));
      g(j, l) = std::polar(1.0, 2 * std::numbers::pi * (c * x + d * y));
      prod(j, l) = f(j, l) * g(j, l);
    }
  auto spec = unit_spec(geo);
  cplx mult = 0;
  for (const auto& [k, lam] : spec.lambda)
    mult += lam * spec.phi.spectrum(std::ldexp(a, -k)) * spec.psi.spectrum(std::ldexp(d, -k));
  EXPECT_LT(relative_l2_error(apply_paraproduct(spec, f, g), mult * prod), 1e-13);
  TwistedSymbol m([](double t1, double t2) { return cplx(t1 + 2.0, t2); });
  EXPECT_LT(relative_l2_error(apply_twisted_multiplier(m, f, g), m(a, d) * prod), 1e-13);
  EXPECT_EQ(max_abs(apply_twisted_multiplier(zero_symbol(), f, g)), 0.0);
  for (auto& [k, lam] : spec.lambda) lam = 0.0;
  EXPECT_EQ(max_abs(apply_paraproduct(spec, f, g)), 0.0);
  SpatialSymbol unit([](double, double, double, double) { return cplx(1.0); }, std::nullopt);
  EXPECT_LT(relative_l2_error(apply_spatial_multiplier(unit, f, g), prod), 1e-13);
}
