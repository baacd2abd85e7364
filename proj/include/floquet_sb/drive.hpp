#pragma once

#include <numbers>

namespace floquet_sb {

/// Monochromatic drive A cos(omegaL t) on a system with level scale omega0 (hbar = 1).
struct DriveConfig {
  double omega0 = 1.0;
  double amplitude = 0.0;
  double omegaL = 10.0;

  static DriveConfig from_ratio(double omega0, double ratio, double omegaL) {
    return {omega0, 0.5 * ratio * omegaL, omegaL};
  }

  double period() const { return 2.0 * std::numbers::pi / omegaL; }
  /// 2A/omegaL, the argument of every Bessel factor.
  double ratio() const { return 2.0 * amplitude / omegaL; }

  /// Throws DomainError for non-physical values; warns when omegaL <= 2 omega0.
  void validate() const;
};

}  // namespace floquet_sb
