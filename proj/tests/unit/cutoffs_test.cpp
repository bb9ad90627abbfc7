#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "twp/cutoffs.hpp"
#include "twp/error.hpp"

using namespace twp;

namespace {

// Independent reference for theta from its defining quotient.
double theta_ref(double t) {
  auto h = [](double s) { return s > 0 ? std::exp(-1.0 / s) : 0.0; };
  double a = h(1 - std::abs(t)), b = h(std::abs(t) - 0.5);
  return a / (a + b);
}

}  // namespace

TEST(Theta, PlateauAndSupport) {
  auto th = make_theta();
  for (double t : {0.0, 0.1, -0.3, 0.5, -0.5}) EXPECT_EQ(th(t), 1.0) << t;
  for (double t : {1.0, -1.0, 1.5, 40.0}) EXPECT_EQ(th(t), 0.0) << t;
  EXPECT_NEAR(th(0.75), 0.5, 1e-15);
  EXPECT_NEAR(th(-0.75), 0.5, 1e-15);
}

TEST(Theta, MatchesQuotientAndIsMonotone) {
  auto th = make_theta();
  double prev = 1.0;
  for (int i = 0; i <= 1000; ++i) {
    double t = 0.5 + 0.5 * i / 1000.0;
    EXPECT_NEAR(th(t), theta_ref(t), 1e-15);
    EXPECT_LE(th(t), prev);
    prev = th(t);
    EXPECT_NEAR(th(t) + th(1.5 - t), 1.0, 1e-15);
  }
}

TEST(Theta, DerivativesMatchFiniteDifferences) {
  auto th = make_theta();
  const double h = 1e-5;
  for (double t : {0.55, 0.62, 0.75, 0.81, 0.93, -0.7}) {
    for (int k = 1; k <= 6; ++k) {
      double fd = (th.derivative(t + h, k - 1) - th.derivative(t - h, k - 1)) / (2 * h);
      double exact = th.derivative(t, k);
      EXPECT_NEAR(exact, fd, 1e-6 * std::max(1.0, std::abs(exact))) << "t=" << t << " k=" << k;
    }
  }
}

TEST(Theta, DerivativesVanishAtGlue) {
  auto th = make_theta();
  for (int k = 1; k <= 6; ++k) {
    EXPECT_EQ(th.derivative(0.5, k), 0.0);
    EXPECT_EQ(th.derivative(1.0, k), 0.0);
    EXPECT_LT(std::abs(th.derivative(0.5 + 1e-3, k)), 1e-100);
    EXPECT_LT(std::abs(th.derivative(1.0 - 1e-3, k)), 1e-100);
  }
  auto all = th.derivatives(0.7);
  for (int k = 0; k <= 6; ++k) EXPECT_DOUBLE_EQ(all[static_cast<std::size_t>(k)], th.derivative(0.7, k));
  EXPECT_THROW(th.derivative(0.7, 7), std::invalid_argument);
}

TEST(Vartheta, SupportAndDefinition) {
  auto th = make_theta();
  auto vt = make_vartheta(th);
  for (int i = 0; i <= 400; ++i) {
    double t = 4.0 * i / 400.0;
    double v = vt(t);
    if (t <= 0.5 || t >= 2.0) EXPECT_EQ(v, 0.0) << t;
    EXPECT_NEAR(v, th(t / 2) - th(t), 1e-16);
    EXPECT_EQ(v, vt(-t));
    EXPECT_GE(v, 0.0);
  }
  EXPECT_EQ(vt(1.0), 1.0);
}

TEST(Partition, TelescopesToOne) {
  auto vt = make_vartheta(make_theta());
  auto taus = log_spaced_taus(-6, 6, 5000);
  auto rep = partition_check(vt, -6, 6, taus);
  EXPECT_EQ(rep.valid_samples, taus.size());
  EXPECT_LT(rep.max_deviation, 1e-14);

  std::vector<double> outside{1e-4, 200.0, -1e-3};
  auto rep2 = partition_check(vt, -6, 6, outside);
  EXPECT_EQ(rep2.outside_samples, 3u);
  EXPECT_GT(rep2.max_outside_deviation, 0.5);
  EXPECT_THROW(partition_check(vt, 2, 2, taus), std::invalid_argument);
}

TEST(Partition, LogSpacedEndpoints) {
  auto t = log_spaced_taus(-3, 5, 17);
  EXPECT_EQ(t.front(), 0.125);
  EXPECT_EQ(t.back(), 32.0);
  EXPECT_DOUBLE_EQ(t[2], 0.25);
}

TEST(SchwartzProfile, SpaceIntegralOfTheta) {
  auto p = theta_profile();
  // integral of theta = 1.5 by the symmetry theta(t) + theta(1.5 - t) = 1
  EXPECT_NEAR(p.space(0.0).real(), 1.5, 1e-12);
  // Simpson reference at t = 0.8
  const int n = 20000;
  double acc = 0;
  for (int i = 0; i <= n; ++i) {
    double xi = -1.0 + 2.0 * i / n;
    double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    acc += w * theta_ref(xi) * std::cos(2 * std::numbers::pi * 0.8 * xi);
  }
  acc *= 2.0 / n / 3.0;
  EXPECT_NEAR(p.space(0.8).real(), acc, 1e-10);
  EXPECT_NEAR(p.space(0.8).imag(), 0.0, 1e-12);
}

TEST(SchwartzProfile, DilationScalesSpace) {
  auto p = vartheta_profile();
  auto q = p.dilated(2.0);
  EXPECT_EQ(q.support_radius(), 4.0);
  EXPECT_EQ(q.inner_radius().value(), 1.0);
  for (double t : {0.0, 0.3, -1.1})
    EXPECT_NEAR(std::abs(q.space(t) - 2.0 * p.space(2.0 * t)), 0.0, 1e-11);
  EXPECT_THROW(SchwartzProfile([](double) { return 1.0; }, -1.0), std::invalid_argument);
}

TEST(Seminorm, DilationIdentity) {
  // ||lambda phi(lambda .)||_{a,b} = lambda^{1 + b - a} ||phi||_{a,b}
  auto p = theta_profile();
  auto q = p.dilated(2.0);
  for (auto [a, b] : {std::pair{0, 0}, {1, 0}, {2, 1}, {3, 2}}) {
    double base = schwartz_seminorm(p, a, b).value;
    double dil = schwartz_seminorm(q, a, b).value;
    EXPECT_NEAR(dil / base, std::pow(2.0, 1 + b - a), 1e-6 * std::pow(2.0, 1 + b - a)) << a << b;
  }
}

TEST(Seminorm, SupMatchesValueAtZero) {
  auto est = schwartz_seminorm(theta_profile(), 0, 0);
  EXPECT_NEAR(est.value, 1.5, 1e-9);
  EXPECT_NEAR(est.argmax, 0.0, 1e-9);
  EXPECT_LT(est.tail_ratio, 0.01);
  EXPECT_THROW(schwartz_seminorm(theta_profile(), 4, 0), std::invalid_argument);
  EXPECT_THROW(schwartz_seminorm(theta_profile(), 0, 0, 100), std::invalid_argument);
}

TEST(Modulated, ModulationIsTranslation) {
  // spectrum e^{i w tau} shifts the space side by w / (2 pi)
  const int a = 0;
  auto base = make_modulated(0, std::nullopt, a).profile;
  for (int n : {1, 3, 8}) {
    auto mod = make_modulated(n, std::nullopt, a).profile;
    double shift = std::ldexp(std::numbers::pi, -a - 4) * n / (2 * std::numbers::pi);
    for (double t : {-0.2, 0.0, 0.15})
      EXPECT_NEAR(std::abs(mod.space(t) - base.space(t + shift)), 0.0, 1e-9);
    EXPECT_NEAR(schwartz_seminorm(mod, 0, 0).value, schwartz_seminorm(base, 0, 0).value, 1e-6);
  }
}

TEST(Modulated, WeightedSeminormGrowsPolynomially) {
  // cubic weight, so successive doublings approach a factor of 8
  std::vector<double> s;
  for (int n : {16, 32, 64, 128, 256}) s.push_back(schwartz_seminorm(make_modulated(n, 0, 0).profile, 3, 0).value);
  for (std::size_t i = 1; i < s.size(); ++i) {
    EXPECT_GT(s[i], s[i - 1]);
    EXPECT_LT(s[i] / s[i - 1], 8.5);
  }
  EXPECT_GT(s[4] / s[3], 6.5);
}

TEST(Modulated, Supports) {
  auto phi = make_modulated(2, std::nullopt, 1);
  EXPECT_EQ(phi.profile.support_radius(), 32.0);
  EXPECT_FALSE(phi.profile.inner_radius());
  auto psi = make_modulated(2, -1, 1);
  EXPECT_EQ(psi.profile.support_radius(), 1.0);
  EXPECT_EQ(psi.profile.inner_radius().value(), 0.25);
  EXPECT_THROW(make_modulated(0, 2, 0), std::invalid_argument);
  EXPECT_THROW(make_modulated(0, std::nullopt, -1), std::invalid_argument);
}
