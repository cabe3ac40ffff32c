#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "eagm/complex_core.hpp"

using eagm::cplx;

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

cplx random_cplx(std::mt19937_64& rng, double scale = 10.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  return {d(rng), d(rng)};
}

}  // namespace

TEST(PrincipalSqrt, Examples) {
  EXPECT_EQ(eagm::principal_sqrt(4.0), cplx(2.0, 0.0));
  EXPECT_EQ(eagm::principal_sqrt(-1.0), cplx(0.0, 1.0));
  EXPECT_EQ(eagm::principal_sqrt(cplx(-1.0, -0.0)), cplx(0.0, 1.0));
  const cplx w = eagm::principal_sqrt(cplx(0.0, -2.0));
  EXPECT_NEAR(w.real(), 1.0, 1e-15);
  EXPECT_NEAR(w.imag(), -1.0, 1e-15);
  EXPECT_EQ(eagm::principal_sqrt(0.0), cplx(0.0, 0.0));
}

TEST(PrincipalSqrt, SquaresBackAndStaysInRightHalfPlane) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const cplx z = random_cplx(rng);
    const cplx w = eagm::principal_sqrt(z);
    EXPECT_LE(std::abs(w * w - z), 4 * eps * std::abs(z)) << z;
    EXPECT_GE(w.real(), 0.0);
    if (w.real() == 0.0) {
      EXPECT_GE(w.imag(), 0.0);
    }
  }
}

TEST(NearRoot, Examples) {
  EXPECT_EQ(eagm::near_root(1.0, 0.25), cplx(0.5, 0.0));
  const cplx opp = eagm::near_root(1.0, -1.0);
  EXPECT_NEAR(opp.real(), 0.0, 1e-16);
  EXPECT_DOUBLE_EQ(opp.imag(), 1.0);
  const cplx conj = eagm::near_root(cplx(1, 1), cplx(1, -1));
  EXPECT_NEAR(conj.real(), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(conj.imag(), 0.0, 1e-15);
}

TEST(NearRoot, ZeroProductCollapses) {
  EXPECT_EQ(eagm::near_root(0.0, 3.0), cplx(0.0, 0.0));
  EXPECT_EQ(eagm::near_root(cplx(2, 1), 0.0), cplx(0.0, 0.0));
}

TEST(NearRoot, OppositeTieTakesPositiveImaginary) {
  // a + g = 0 exactly
  const cplx r = eagm::near_root(cplx(2, 3), cplx(-2, -3));
  EXPECT_GE(r.imag(), 0.0);
  EXPECT_LE(std::abs(r * r - cplx(2, 3) * cplx(-2, -3)), 1e-14 * 13);
}

TEST(NearRoot, IsNearerTheArithmeticMean) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 2000; ++i) {
    const cplx a = random_cplx(rng), g = random_cplx(rng);
    const cplx r = eagm::near_root(a, g);
    const cplx mean = (a + g) / 2.0;
    EXPECT_LE(std::abs(r * r - a * g), 8 * eps * std::abs(a * g));
    EXPECT_LE(std::abs(r - mean), std::abs(-r - mean) * (1 + 1e-12));
    EXPECT_EQ((-r) * (-r), r * r);
  }
}

TEST(ForwardSRoot, Examples) {
  EXPECT_DOUBLE_EQ(eagm::forward_s_root(2, 1, 1, 1).real(), 1.5);
  const cplx s = eagm::forward_s_root(2, 1, 1, 0.25);
  EXPECT_NEAR(s.real(), 1.4523687548277813, 1e-15);
  EXPECT_EQ(s.imag(), 0.0);
  EXPECT_EQ(eagm::forward_s_root(1, -1, 0, 0), cplx(0.0, 0.0));
}

TEST(ForwardSRoot, OrientedAlongUPlusV) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 2000; ++i) {
    const cplx u = random_cplx(rng), v = random_cplx(rng), a = random_cplx(rng),
               g = random_cplx(rng);
    const cplx s = eagm::forward_s_root(u, v, a, g);
    EXPECT_GE((s / (u + v)).real(), 0.0);
    const cplx expect_sq = ((u + v) * (u + v) - (a - g) * (a - g)) / 4.0;
    EXPECT_LE(std::abs(s * s - expect_sq), 1e-13 * (std::norm(u + v) + std::norm(a - g)));
    // |u' + s| >= |u' - s| with u' = (u+v)/2
    const cplx next_u = (u + v) / 2.0;
    EXPECT_GE(std::abs(next_u + s), std::abs(next_u - s) * (1 - 1e-12));
  }
}

TEST(ZetaRoot, Examples) {
  EXPECT_EQ(eagm::zeta_root(2.0, 0.0), cplx(2.0, 0.0));
  EXPECT_DOUBLE_EQ(eagm::zeta_root(1.25, 1.0).real(), 0.75);
  const cplx w = eagm::zeta_root(cplx(0, 1), 1.0);
  EXPECT_NEAR(w.real(), 0.0, 1e-15);
  EXPECT_NEAR(w.imag(), std::sqrt(2.0), 1e-15);
}

TEST(ZetaRoot, UndefinedAtZero) {
  EXPECT_THROW(eagm::zeta_root(0.0, 1.0), std::domain_error);
}

TEST(Selectors, Deterministic) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 200; ++i) {
    const cplx a = random_cplx(rng), g = random_cplx(rng);
    const cplx r1 = eagm::near_root(a, g), r2 = eagm::near_root(a, g);
    EXPECT_EQ(std::memcmp(&r1, &r2, sizeof r1), 0);
    const cplx z1 = eagm::zeta_root(a, g), z2 = eagm::zeta_root(a, g);
    EXPECT_EQ(std::memcmp(&z1, &z2, sizeof z1), 0);
  }
}
