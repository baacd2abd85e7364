#pragma once

#include <vector>

#include "floquet_sb/drive.hpp"
#include "floquet_sb/linalg.hpp"
#include "floquet_sb/model.hpp"
#include "floquet_sb/oracle.hpp"

namespace floquet_sb {

struct ShiftedKickCoefficients {
  double f_tilde = 0.0;  // f_t - f_{t0}
  double h_tilde = 0.0;  // h_t - h_{t0}
  double t0 = 0.0;
  double t = 0.0;
};

ShiftedKickCoefficients shifted_kick(double t, double t0, const DriveConfig& drive);

/// Terms of the one-period generator that can be switched off for ablation studies.
struct FloquetTerms {
  bool xdot = true;     // (f_{t0} sz - h_{t0} sy) Xdot
  bool squared = true;  // -2 h_{t0} J0 sx (omega0 + X)^2
};

/// H^F_{t0} = J0 sz (omega0 + X) + (f_{t0} sz - h_{t0} sy) Xdot - 2 h_{t0} J0 sx (omega0 + X)^2 + H_B,
/// the first-order expansion of exp(-i K(t0)) H^F exp(i K(t0)) with K(t) = (f_t sz - h_t sy)(omega0 + X).
/// (omega0 + X)^2 is the square of the truncated matrix.
FockOperator floquet_hamiltonian(double t0, const DriveConfig& drive, const DiscreteBath& bath,
                                 const FockSpace& fock, const FloquetTerms& terms = {});

/// K^F_{t0}(t) = (f~ sz - h~ sy)(omega0 + X).
FockOperator strob_kick(double t, double t0, const DriveConfig& drive, const DiscreteBath& bath,
                        const FockSpace& fock);

/// exp(i c K^F_{t0}(t)) assembled from the 2x2 factor and the eigenbasis of omega0 + X.
class KickExponential {
 public:
  KickExponential(const DriveConfig& drive, const DiscreteBath& bath, const FockSpace& fock);
  CMat operator()(double t, double t0, double c = 1.0) const;

 private:
  DriveConfig drive_;
  KickSeries series_;
  HermitianEigen y_eig_;
};

struct ObservableFamily {
  CMat base;
  double tau = 0.0;
  double t0 = 0.0;
  CMat transformed;  // exp(i K(tau)) O exp(-i K(tau))
};

ObservableFamily observable_family(const CMat& op, double tau, double t0, const DriveConfig& drive,
                                   const DiscreteBath& bath, const FockSpace& fock);
ObservableFamily observable_family(const CMat& op, double tau, double t0, const KickExponential& kick);

/// Static evolution under H^F_{t0} from a state given at t0, in the eigenbasis of H^F.
class StroboscopicEvolution {
 public:
  StroboscopicEvolution(const FockOperator& hf, const CMat& state_t0, double t0, double period);

  /// <O_tau> after evolving for tau + nT - t0 under H^F.
  double sample(const ObservableFamily& family, int n) const;
  /// Samples for n = 0 ... n_max.
  std::vector<double> samples(const ObservableFamily& family, int n_max) const;
  /// Summed top-level occupation of the evolved state at time t0 + elapsed.
  double boundary_weight(double elapsed, const FockSpace& fock) const;
  /// Warns through log::warn when the boundary weight at any of the given elapsed times exceeds limit.
  double check_truncation(const std::vector<double>& elapsed, const FockSpace& fock, double limit = 1e-6) const;

 private:
  HermitianEigen eig_;
  CMat rho_eig_;  // state in the eigenbasis
  double t0_;
  double period_;
};

double strob_sample(const ObservableFamily& family, int n, const FockOperator& hf, const CMat& state_t0,
                    const DriveConfig& drive);

/// <sigma^z_tau> in the given full-space state.
double polaron_coherence(double tau, double t0, const DriveConfig& drive, const DiscreteBath& bath,
                         const FockSpace& fock, const CMat& state);

/// Eigenvector of sigma^z_tau with eigenvalue sign: exp(i K(tau)) |sign z>|0>.
CVec polaron_state(double tau, double t0, int sign, const DriveConfig& drive, const DiscreteBath& bath,
                   const FockSpace& fock);

/// The same state for f~(tau) = 0, written with coherent states:
/// (e^{-i h~ omega0} |+y>|mu> + e^{i h~ omega0} |-y>|-mu>)/sqrt(2) for sign +1 (relative minus for -1),
/// mu_k = -i h~ g_k.
CVec polaron_state_coherent(double h_tilde, int sign, const DriveConfig& drive, const DiscreteBath& bath,
                            const FockSpace& fock);

/// Root of f~_{t0}(tau) = f_tau - f_{t0} in [lo, hi]. Throws DomainError without a sign change.
double f_tilde_root(double t0, const DriveConfig& drive, double lo, double hi);

}  // namespace floquet_sb
