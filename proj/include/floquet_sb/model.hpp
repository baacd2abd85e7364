#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "floquet_sb/drive.hpp"

namespace floquet_sb {

/// J(w) = lambda w exp(-w/omega_c).
struct OhmicSpectralDensity {
  double lambda = 0.0;
  double omega_c = 1.0;
};

double ohmic_j(double omega, const OhmicSpectralDensity& sd);

/// Continuum spectral density: Ohmic, or tabulated with linear interpolation (zero outside the table).
class SpectralDensity {
 public:
  static SpectralDensity ohmic(double lambda, double omega_c);
  static SpectralDensity tabulated(std::vector<double> omega, std::vector<double> values);

  double operator()(double omega) const;
  /// Upper integration limit used by default: 40 omega_c for Ohmic, the last table point otherwise.
  double default_cutoff() const;
  /// Bound on int_{omega_max}^inf J(w) dw.
  double tail_mass(double omega_max) const;
  const std::optional<OhmicSpectralDensity>& ohmic_params() const { return ohmic_; }

 private:
  SpectralDensity() = default;
  std::optional<OhmicSpectralDensity> ohmic_;
  std::vector<double> table_omega_;
  std::vector<double> table_j_;
};

struct BathMode {
  double omega = 1.0;
  double g = 0.0;
};

/// Explicit bosonic modes {omega_k, g_k}: H_B = sum w_k a_k^dag a_k, X = sum g_k (a_k^dag + a_k).
class DiscreteBath {
 public:
  explicit DiscreteBath(std::vector<BathMode> modes);
  const std::vector<BathMode>& modes() const { return modes_; }
  std::size_t size() const { return modes_.size(); }
  const BathMode& operator[](std::size_t k) const { return modes_[k]; }

 private:
  std::vector<BathMode> modes_;
};

/// Midpoint sampling on a uniform grid: w_k = (k - 1/2) omega_max/N, g_k = sqrt(J(w_k) omega_max/N).
DiscreteBath discretize(const SpectralDensity& sd, int n_modes, double omega_max);

class ThermalParams {
 public:
  static ThermalParams at_beta(double beta);
  static ThermalParams zero_temperature();

  bool is_zero_temperature() const { return zero_; }
  double beta() const { return beta_; }
  /// coth(beta w / 2); identically 1 at zero temperature.
  double coth_half(double omega) const;
  /// Mean Bose occupation 1/(exp(beta w) - 1).
  double occupation(double omega) const;

 private:
  ThermalParams(double beta, bool zero) : beta_(beta), zero_(zero) {}
  double beta_;
  bool zero_;
};

namespace detail {
inline constexpr double kCothSwitch = 1e-4;
/// coth(x/2) = 1 + 2/expm1(x)
double coth_half_direct(double x);
/// coth(x/2) ~ 2/x + x/6 for small x
double coth_half_small(double x);
}  // namespace detail

/// The six bath integrals entering the continuum decoherence exponent and dynamical phase at time t:
///   i1 = int J (1 - cos wt)/w^2 coth      i2 = int J coth         i3 = int J cos(wt) coth
///   i4 = int J sin(wt)/w coth             i5 = int J (1-cos wt)/w  i6 = int J sin(wt)
/// with coth = coth(beta w/2).
struct SpectralIntegrals {
  double t = 0.0;
  double i1 = 0.0, i2 = 0.0, i3 = 0.0, i4 = 0.0, i5 = 0.0, i6 = 0.0;
  double error = 0.0;       // quadrature error estimate
  double tail_bound = 0.0;  // bound on the neglected tail beyond omega_max
};

struct SpectralIntegralOptions {
  double tol = 1e-9;
  std::optional<double> omega_max;  // defaults to sd.default_cutoff()
};

SpectralIntegrals spectral_integrals(const SpectralDensity& sd, double t, const ThermalParams& th,
                                     const SpectralIntegralOptions& opts = {});

/// The same six quantities as discrete sums over bath modes (sum_k g_k^2 ...).
SpectralIntegrals spectral_integrals(const DiscreteBath& bath, double t, const ThermalParams& th);

}  // namespace floquet_sb
