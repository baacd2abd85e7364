#include <doctest.h>

#include <cmath>
#include <numbers>

#include "floquet_sb/errors.hpp"
#include "floquet_sb/specfun.hpp"

using namespace floquet_sb;

namespace {

// Power series sum_k (-1)^k (x/2)^{2k+m} / (k! (k+m)!) in long double.
long double bessel_series(int m, long double x) {
  long double term = 1.0L;
  for (int j = 1; j <= m; ++j) term *= (x / 2.0L) / j;
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -(x / 2.0L) * (x / 2.0L) / (static_cast<long double>(k) * (k + m));
    sum += term;
    if (std::fabs(term) < 1e-30L) break;
  }
  return sum;
}

// Bisection on the series oracle for the first zero of J0.
long double j0_first_zero() {
  long double lo = 2.0L, hi = 3.0L;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    (bessel_series(0, mid) > 0 ? lo : hi) = mid;
  }
  return 0.5L * (lo + hi);
}

}  // namespace

TEST_CASE("bessel_j trivial values") {
  CHECK(bessel_j(0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(bessel_j(1, 0.0)) < 1e-15);
  CHECK(std::abs(bessel_j(5, 0.0)) < 1e-15);
}

TEST_CASE("bessel_j against the power-series oracle") {
  CHECK(std::abs(bessel_j(0, 1.0) - 0.7651976865579666) < 1e-12);
  CHECK(std::abs(bessel_j(0, 1.0) - static_cast<double>(bessel_series(0, 1.0L))) < 1e-12);
  const double z = static_cast<double>(j0_first_zero());
  CHECK(std::abs(z - 2.404825557695773) < 1e-12);
  CHECK(std::abs(bessel_j(0, 2.404825557695773)) < 1e-10);
  for (double x : {0.1, 0.5, 1.0, 2.4, 3.83, 5.0, 7.5, 10.0})
    for (int m = 0; m <= 20; ++m) {
      INFO("m=" << m << " x=" << x);
      CHECK(std::abs(bessel_j(m, x) - static_cast<double>(bessel_series(m, x))) < 1e-12);
    }
}

TEST_CASE("bessel_j against std::cyl_bessel_j for large arguments") {
  for (double x : {15.0, 30.0, 50.0})
    for (int m : {0, 1, 2, 7, 20, 45, 60}) {
      INFO("m=" << m << " x=" << x);
      CHECK(std::abs(bessel_j(m, x) - std::cyl_bessel_j(m, x)) < 1e-12);
    }
}

TEST_CASE("bessel_j parity for negative arguments") {
  for (int m = 0; m < 6; ++m) CHECK(bessel_j(m, -1.7) == doctest::Approx((m % 2 ? -1 : 1) * bessel_j(m, 1.7)));
}

TEST_CASE("bessel_j recurrence") {
  for (double x : {0.5, 2.4, 5.0})
    for (int m = 1; m <= 20; ++m)
      CHECK(std::abs(bessel_j(m - 1, x) + bessel_j(m + 1, x) - 2.0 * m / x * bessel_j(m, x)) < 1e-10);
}

TEST_CASE("bessel_j domain errors") {
  CHECK_THROWS_AS(bessel_j(-1, 1.0), DomainError);
  CHECK_THROWS_AS(bessel_j(0, 1e3), DomainError);
  CHECK_THROWS_AS(bessel_j(0, std::nan("")), DomainError);
}

TEST_CASE("kick series trivial values") {
  const DriveConfig d = DriveConfig::from_ratio(1.0, 2.4, 10.0);
  const double T = d.period();
  CHECK(std::abs(kick_f_series(0.0, d)) < 1e-15);
  CHECK(std::abs(kick_f_series(T, d)) < 1e-14);
  CHECK(std::abs(kick_h_series(std::numbers::pi / (2.0 * d.omegaL), d)) < 1e-14);
  for (double t : {0.0, 0.13, 0.77}) CHECK(std::abs(kick_h_series(t + T, d) - kick_h_series(t, d)) < 1e-12);
}

TEST_CASE("kick integral trivial values") {
  const DriveConfig d = DriveConfig::from_ratio(1.0, 2.4, 10.0);
  CHECK(std::abs(kick_fh_integral(0.0, d).f) < 1e-15);
  CHECK(std::abs(kick_fh_integral(std::numbers::pi / (2.0 * d.omegaL), d).h) < 1e-15);
  const DriveConfig undriven{1.0, 0.0, 10.0};
  for (double t : {0.0, 0.3, 1.7}) {
    const KickIntegral k = kick_fh_integral(t, undriven);
    CHECK(std::abs(k.f) < 1e-13);
    CHECK(std::abs(k.h) < 1e-13);
    CHECK(eta(t, undriven) == 0.0);
  }
}

TEST_CASE("series and integral routes agree") {
  for (double ratio : {0.5, 2.404826, 3.83}) {
    const DriveConfig d = DriveConfig::from_ratio(1.0, ratio, 10.0);
    const double T = d.period();
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double t = 5.0 * T * i / 199.0;
      const KickIntegral k = kick_fh_integral(t, d);
      worst = std::max({worst, std::abs(kick_f_series(t, d) - k.f), std::abs(kick_h_series(t, d) - k.h)});
    }
    INFO("ratio=" << ratio);
    CHECK(worst <= 1e-10);
  }
  const DriveConfig d = DriveConfig::from_ratio(1.0, 2.4, 10.0);
  CHECK(std::abs(kick_f_series(0.3, d) - kick_fh_integral(0.3, d).f) < 1e-10);
  CHECK(std::abs(kick_h_series(0.0, d) - kick_fh_integral(0.0, d).h) < 1e-10);
}

TEST_CASE("kick coefficients parity and periodicity") {
  const DriveConfig d = DriveConfig::from_ratio(1.0, 3.83, 12.0);
  const KickSeries s(d);
  const double T = d.period();
  for (double t : {0.01, 0.2, 0.41, 1.3}) {
    CHECK(std::abs(s.f(-t) + s.f(t)) < 1e-12);
    CHECK(std::abs(s.h(-t) - s.h(t)) < 1e-12);
    CHECK(std::abs(s.f(t + T) - s.f(t)) < 1e-12);
    CHECK(std::abs(s.h(t + T) - s.h(t)) < 1e-12);
  }
}

TEST_CASE("eta") {
  CHECK(eta(0.0, 0.0) == 0.0);
  CHECK(eta(3.0, 4.0) == doctest::Approx(5.0));
  const DriveConfig d = DriveConfig::from_ratio(1.0, 2.0, 10.0);
  const KickSeries s(d);
  for (double t : {0.0, 0.05, 0.3}) {
    CHECK(eta(t, d) >= 0.0);
    CHECK(eta(t, d) == doctest::Approx(std::hypot(s.f(t), s.h(t))));
  }
}

TEST_CASE("series truncation is insensitive below 1e-10") {
  const DriveConfig d = DriveConfig::from_ratio(1.0, 3.83, 10.0);
  for (double t : {0.0, 0.07, 0.5}) {
    CHECK(std::abs(kick_f_series(t, d, 1e-10) - kick_f_series(t, d, 1e-15)) < 1e-10);
    CHECK(std::abs(kick_h_series(t, d, 1e-10) - kick_h_series(t, d, 1e-15)) < 1e-10);
  }
  CHECK(KickSeries(d).highest_order() > static_cast<int>(std::ceil(d.ratio())));
}

TEST_CASE("drive validation") {
  CHECK_THROWS_AS((DriveConfig{0.0, 1.0, 10.0}.validate()), DomainError);
  CHECK_THROWS_AS((DriveConfig{1.0, -1.0, 10.0}.validate()), DomainError);
  CHECK_THROWS_AS((DriveConfig{1.0, 1.0, 0.0}.validate()), DomainError);
  CHECK_NOTHROW((DriveConfig{1.0, 1.0, 1.5}.validate()));
}
