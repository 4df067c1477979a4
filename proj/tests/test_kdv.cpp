#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "instances.hpp"
#include "refless/kdv.hpp"

using namespace refless;
using refless::testing::kS1;
using refless::testing::make_instance;
using C = std::complex<double>;

namespace {
double sech2(double x) { return 1.0 / (std::cosh(x) * std::cosh(x)); }
}  // namespace

TEST(Evolve, Rate) {
  EXPECT_EQ(evolve_spectral(kS1, 0.0), kS1);
  const auto d = evolve_spectral(kS1, 1.0);
  EXPECT_EQ(d.kappa, kS1.kappa);
  EXPECT_NEAR(d.m[0], std::sqrt(2.0) * std::exp(4.0), 1e-12 * d.m[0]);
  EXPECT_THROW(
      {
        try {
          evolve_spectral(kS1, 200.0);
        } catch (const Error& e) {
          EXPECT_EQ(e.kind(), ErrorKind::Overflow);
          throw;
        }
      },
      Error);
}

TEST(Evolve, MatchesTimeSlice) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = make_instance(rng, 1 + trial % 4);
    const double x = 5 * u(rng), t = 0.5 * u(rng);
    const double a = eval_q(evolve_spectral(d, t), x).q, b = eval_u(d, x, t);
    EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST(EvalU, TravelingWave) {
  EXPECT_NEAR(eval_u(kS1, 4.0, 1.0), -2.0, 1e-14);
  for (double t : {-0.5, 0.0, 0.3, 1.0})
    for (double x = -6; x <= 10; x += 0.7) EXPECT_NEAR(eval_u(kS1, x, t), -2.0 * sech2(x - 4 * t), 1e-12);
  EXPECT_EQ(eval_u(SpectralData{}, 1.0, 2.0), 0.0);
}

TEST(EvalU, BoundAndTimeZero) {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = make_instance(rng, 3);
    const double k1 = d.kappa.front();
    for (double x = -15; x <= 15; x += 0.5) {
      EXPECT_NEAR(eval_u(d, x, 0.0), eval_q(d, x).q, 1e-12);
      EXPECT_LE(std::abs(eval_u(d, x, 0.7)), 2 * k1 * k1 * (1 + 1e-12));
    }
  }
}

TEST(EvalPhi, ClosedFormAndRealSlice) {
  EXPECT_NEAR(eval_phi(kS1, 0.0, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(eval_phi(kS1, C(0.0), C(0.0)) - 1.0), 0.0, 1e-15);
  EXPECT_NO_THROW(eval_phi(kS1, C(0.0, std::numbers::pi / 8), C(0.0)));

  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-3;
  for (int trial = 0; trial < 15; ++trial) {
    const auto d = make_instance(rng, 1 + trial % 3);
    const double x = 4 * u(rng), t = 0.5 * u(rng);
    EXPECT_NEAR(std::real(eval_phi(d, C(x), C(t))), eval_phi(d, x, t), 1e-12);
    const auto p = [&](double s) { return eval_phi(d, 2 * s, 8 * t); };
    const double dphi = (-p(x + 2 * h) + 8 * p(x + h) - 8 * p(x - h) + p(x - 2 * h)) / (12 * h);
    EXPECT_NEAR(2 * dphi, eval_u(d, x, t), 1e-6);
  }
}

TEST(EvalPhi, HolomorphicBound) {
  std::mt19937 rng(14);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double nu = std::numbers::pi / 4;
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = make_instance(rng, 1 + trial % 3);
    const double k1 = d.kappa.front();
    const C z(3 * u(rng), nu / (2 * k1) * u(rng));
    const C zeta(0.5 * u(rng), nu / (2 * k1 * k1 * k1) * u(rng));
    const double bound = eval_phi(d, z.real(), zeta.real()) / std::cos(nu);
    EXPECT_LE(std::abs(eval_phi(d, z, zeta)), bound);
  }
}

TEST(EvalPhi, Domain) {
  try {
    eval_phi(kS1, C(0.0, 2.0), C(0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainViolation);
  }
}

TEST(Residual, KdvSmall) {
  EXPECT_EQ(kdv_residual(SpectralData{}, 1.0, 0.3, 1e-3), 0.0);
  EXPECT_EQ(phi_residual(SpectralData{}, 1.0, 0.3, 1e-3), 0.0);
  EXPECT_LE(kdv_residual(kS1, 1.0, 0.3, 1e-3), 1e-4);
  EXPECT_LE(phi_residual(kS1, 0.5, 0.1, 1e-3), 1e-4);
  std::mt19937 rng(15);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  // the 2-point t-stencil error grows like kappa_1^11 h^2; keep kappa_1 <= 1
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto d = make_instance(rng, n, 1.0, 1.25);
    for (int p = 0; p < 25; ++p) {
      const double x = 6 * u(rng), t = 0.5 * u(rng);
      EXPECT_LE(kdv_residual(d, x, t, 1e-3), 1e-4);
      EXPECT_LE(phi_residual(d, x, t, 1e-3), 1e-4);
    }
  }
  EXPECT_THROW(kdv_residual(kS1, 0.0, 0.0, 0.0), Error);
}

TEST(Residual, SecondOrder) {
  std::mt19937 rng(16);
  const auto d = make_instance(rng, 3);
  const double r1 = kdv_residual(d, 0.4, 0.1, 1e-2), r2 = kdv_residual(d, 0.4, 0.1, 5e-3);
  EXPECT_GE(r1 / r2, 3.5);
  EXPECT_LE(r1 / r2, 4.5);
  const double p1 = phi_residual(d, 0.4, 0.1, 1e-2), p2 = phi_residual(d, 0.4, 0.1, 5e-3);
  EXPECT_GE(p1 / p2, 3.5);
  EXPECT_LE(p1 / p2, 4.5);
}

TEST(Track, SolitonSpeed) {
  const auto d = refless::testing::kS2;
  const double x0 = std::log(d.m[0] * d.m[0] / 2.0) / 2.0;
  for (double t : {0.25, 0.5, 1.0}) EXPECT_NEAR(track_minimum(d, t, x0 + 4 * t - 3, x0 + 4 * t + 2.5), x0 + 4 * t, 1e-6);
}
