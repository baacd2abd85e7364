#pragma once

#include <utility>
#include <vector>

#include "floquet_sb/floquet_core.hpp"
#include "floquet_sb/linalg.hpp"
#include "floquet_sb/model.hpp"
#include "floquet_sb/specfun.hpp"

namespace floquet_sb {

/// Qubit density matrix.
struct QubitState {
  CMat rho = CMat::Identity(2, 2) * 0.5;

  static QubitState plus_z();
  static QubitState minus_y();
  /// (I + r.sigma)/2 with |r| <= 1.
  static QubitState from_bloch(double x, double y, double z);

  /// Throws DomainError unless Hermitian (tol), unit trace (tol) and eigenvalues >= -eig_tol.
  void validate(double tol = 1e-10, double eig_tol = 1e-8) const;
  double min_eigenvalue() const;
};

struct PhasePair {
  double theta = 0.0;
  double delta = 0.0;
};

/// Scalars of the spin-boson closed forms at time t. Labels of MultiIndex are +-1 here.
struct PhaseInputs {
  double t = 0.0;
  double omega0 = 1.0;
  double j0 = 1.0;
  double eta_t = 0.0;
  double eta_0 = 0.0;
};

/// Continuum decoherence exponent and phase from the six spectral integrals.
///   delta = 2 J0^2 (1 - n2' n2) I1 + [(1 - n1' n1) eta_t^2 + (1 - n3' n3) eta_0^2] I2
///           - D1 D3 eta_t eta_0 I3 + J0 D2 (D1 eta_t - D3 eta_0) I4
///   theta = omega0 (D1 eta_t + D2 J0 t - D3 eta_0)
///           + J0 [(n3 + n3') D2 eta_0 - (n2 + n2') D1 eta_t] I5 + (n3 + n3') D1 eta_t eta_0 I6
/// with D_l = n_l' - n_l. delta below -1e-9 throws NumericalError; smaller negatives clip to 0.
PhasePair phases_continuum(const MultiIndex& n, const MultiIndex& nt, const PhaseInputs& in,
                           const SpectralIntegrals& si);

double delta_continuum(const MultiIndex& n, const MultiIndex& nt, double t, const DriveConfig& drive,
                       const SpectralDensity& sd, const ThermalParams& th);
double theta_continuum(const MultiIndex& n, const MultiIndex& nt, double t, const DriveConfig& drive,
                       const SpectralDensity& sd, const ThermalParams& th);

/// Discrete-bath definitions from displacement data:
///   delta = 1/2 sum_k |Lambda_k^n - Lambda_k^n'|^2 coth(beta w_k/2)
///   theta = Omega_n' - Omega_n + Im chi_n - Im chi_n' + Im(Lambda_n . conj(Lambda_n'))
PhasePair phases_discrete(const DisplacementData& dn, const DisplacementData& dnt, const DiscreteBath& bath,
                          const ThermalParams& th);

/// <D(mu)> in the thermal state = exp(-sum_k |mu_k|^2/2 coth(beta w_k/2)).
double displacement_expectation(const CVec& mu, const DiscreteBath& bath, const ThermalParams& th);

/// Closed-form reduced dynamics of the driven spin-boson model with a continuum bath (rotating frame).
/// Chains are labelled by eigenvalue signs: P^{n1} = (I + n1 M(t)/eta_t)/2, P^{n2} = (I + n2 sigma_z)/2,
/// P^{n3} = (I + n3 M(0)/eta_0)/2, with sigma_z projectors when eta vanishes.
class ReducedDynamics {
 public:
  struct Options {
    bool zeroth_order = false;  // drop the kick operator (infinite drive frequency)
    double series_tol = kDefaultSeriesTol;
    SpectralIntegralOptions integrals;
  };

  ReducedDynamics(const DriveConfig& drive, SpectralDensity sd, const ThermalParams& th, Options opts);
  ReducedDynamics(const DriveConfig& drive, SpectralDensity sd, const ThermalParams& th)
      : ReducedDynamics(drive, std::move(sd), th, Options{}) {}

  QubitState rho_s(double t, const QubitState& rho0) const;
  /// Same as rho_s with precomputed integrals at si.t; lets one integral grid serve many drives.
  QubitState rho_s(const SpectralIntegrals& si, const QubitState& rho0) const;

  PhaseInputs inputs(double t) const;
  const DriveConfig& drive() const { return drive_; }
  const SpectralDensity& spectral_density() const { return sd_; }
  const ThermalParams& thermal() const { return th_; }
  const Options& options() const { return opts_; }
  const FirstOrderGenerators& generators() const { return gen_; }

 private:
  DriveConfig drive_;
  SpectralDensity sd_;
  ThermalParams th_;
  Options opts_;
  KickSeries series_;
  FirstOrderGenerators gen_;
};

/// Reduced dynamics for an explicit discrete bath and any d-level generators (rotating frame).
CMat rho_s_discrete(double t, const CMat& rho0, const DriveConfig& drive, const DiscreteBath& bath,
                    const ThermalParams& th, const FirstOrderGenerators& gen);

/// rho_lab = U(t) rho_rot U(t)^dag with U(t) = exp(-i (A/wL) sin(wL t) sigma_x).
QubitState lab_frame(const QubitState& rho_rot, const DriveConfig& drive, double t);

/// Tr(rho O).
double expectation(const QubitState& rho, const CMat& op);

using Series = std::vector<std::pair<double, double>>;

/// Upper envelope: maxima over consecutive windows of length `period` (refined by a parabola through
/// the peak sample and its neighbours), linearly interpolated onto the input grid and held constant
/// before the first and after the last peak. Requires >= 20 samples per period.
Series upper_envelope(const Series& series, double period);

/// (max - min)/max of an envelope.
double envelope_variation(const Series& envelope);

}  // namespace floquet_sb
