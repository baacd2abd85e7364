#pragma once

#include <vector>

#include "floquet_sb/drive.hpp"

namespace floquet_sb {

inline constexpr double kMaxBesselArgument = 100.0;
inline constexpr int kMaxBesselOrder = 10000;
inline constexpr double kDefaultSeriesTol = 1e-13;

/// Bessel function of the first kind J_m(x), m >= 0, |x| <= kMaxBesselArgument.
double bessel_j(int m, double x);

/// J_0(x) ... J_{m_max}(x) from a single normalized downward recurrence (Miller).
std::vector<double> bessel_j_sequence(int m_max, double x);

struct KickCoefficients {
  double f = 0.0;
  double h = 0.0;
  double eta = 0.0;
  double t = 0.0;
};

/// Caches the Bessel factors of one drive so that f_t and h_t can be evaluated on long time grids.
///   f_t = sum_{m even >= 2} J_m(r) 2 sin(m wL t)/(m wL)
///   h_t = sum_{m odd  >= 1} J_m(r) 2 cos(m wL t)/(m wL)
class KickSeries {
 public:
  explicit KickSeries(const DriveConfig& drive, double tol = kDefaultSeriesTol);

  double f(double t) const;
  double h(double t) const;
  KickCoefficients at(double t) const;
  double j0() const { return j0_; }
  const DriveConfig& drive() const { return drive_; }
  /// Highest harmonic kept after truncation, for diagnostics.
  int highest_order() const;

 private:
  struct Term {
    int m;
    double coefficient;  // 2 J_m(r) / (m wL)
  };
  DriveConfig drive_;
  double j0_ = 1.0;
  std::vector<Term> even_;
  std::vector<Term> odd_;
};

double kick_f_series(double t, const DriveConfig& drive, double tol = kDefaultSeriesTol);
double kick_h_series(double t, const DriveConfig& drive, double tol = kDefaultSeriesTol);

struct KickIntegral {
  double f = 0.0;
  double h = 0.0;
  double error = 0.0;  // achieved absolute error estimate (max of both routes)
};

/// Integral representation, independent of the Bessel series:
///   f_t = int_0^t cos(r sin wL u) du - J0(r) t,   J0 from Bessel's integral,
///   h_t = -int_{pi/(2 wL)}^t sin(r sin wL u) du.
/// Throws NumericalError when the quadrature cannot reach 1e-11.
KickIntegral kick_fh_integral(double t, const DriveConfig& drive);

double eta(double f, double h);
double eta(double t, const DriveConfig& drive);

}  // namespace floquet_sb
