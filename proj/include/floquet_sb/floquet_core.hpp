#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "floquet_sb/drive.hpp"
#include "floquet_sb/linalg.hpp"
#include "floquet_sb/model.hpp"
#include "floquet_sb/specfun.hpp"

namespace floquet_sb {

/// H(t) = omega0 S + A cos(wL t) V + H_B + S X for a d-level system.
struct SystemOperators {
  CMat S;
  CMat V;

  int dim() const { return static_cast<int>(S.rows()); }
  void validate(double tol = 1e-12) const;
  static SystemOperators spin_boson();  // S = sigma_z, V = sigma_x
};

/// U(t) = exp(-i (A/wL) sin(wL t) V).
CMat rotating_frame(const CMat& V, const DriveConfig& drive, double t);

/// Harmonics S^(l) of S(t) = U^dag(t) S U(t) = sum_l S^(l) exp(i l wL t), |l| <= l_max.
class FourierComponents {
 public:
  FourierComponents(int l_max, std::vector<CMat> components);
  int l_max() const { return l_max_; }
  int dim() const { return static_cast<int>(components_.front().rows()); }
  const CMat& operator[](int l) const { return components_.at(static_cast<std::size_t>(l + l_max_)); }

 private:
  int l_max_;
  std::vector<CMat> components_;  // index l + l_max
};

inline constexpr int kDefaultLMax = 32;
inline constexpr int kDefaultFourierGrid = 512;

/// Trapezoidal projection on a uniform periodic grid. Throws ResolutionError when ||S^(l_max)|| > alias_tol.
FourierComponents fourier_components(const SystemOperators& sys, const DriveConfig& drive,
                                     int l_max = kDefaultLMax, int grid_points = kDefaultFourierGrid,
                                     double alias_tol = 1e-10);

struct ParityCheck {
  bool holds = true;
  double max_violation = 0.0;
};

/// S^(-l) = (-1)^l S^(l) for every harmonic.
ParityCheck check_parity_condition(const FourierComponents& fc, double tol = 1e-10);

/// M(t) = sum_{l != 0} S^(l) exp(i l wL t)/(i l wL). Throws ParityError if the parity condition fails.
CMat m_operator(const FourierComponents& fc, const DriveConfig& drive, double t);

/// S^(0), the system factor of H^F = S^(0)(omega0 + X) + H_B. Throws ParityError if parity fails.
CMat effective_hamiltonian_parts(const FourierComponents& fc, const DriveConfig& drive);

struct ProjectorSpectrum {
  std::vector<double> eigenvalues;  // ascending
  std::vector<CMat> projectors;     // rank-1, one per eigenvalue

  std::size_t size() const { return eigenvalues.size(); }
};

inline constexpr double kDegeneracyTol = 1e-9;

/// Spectral decomposition into rank-1 projectors. Eigenvalue clusters closer than degeneracy_tol are
/// resolved in the eigenbasis of degeneracy_basis (sigma_z for d = 2, diag(d-1, d-3, ...) in general).
ProjectorSpectrum eigen_projectors(const CMat& h, const std::optional<CMat>& degeneracy_basis = std::nullopt,
                                   double degeneracy_tol = kDegeneracyTol);

/// Labels one projector chain G_n = P^{n1}_{M(t)} P^{n2}_{S0} P^{n3}_{M(0)}.
/// Generic code stores spectrum indices; the spin-boson closed forms store eigen-labels +-1.
struct MultiIndex {
  int n1 = 0;
  int n2 = 0;
  int n3 = 0;
  bool operator==(const MultiIndex&) const = default;
};

/// Spectra of M(t), S^(0) and M(0) at one time.
struct KickSpectra {
  ProjectorSpectrum m_t;
  ProjectorSpectrum s0;
  ProjectorSpectrum m_0;

  CMat chain(const MultiIndex& n) const;
  std::vector<MultiIndex> indices() const;
};

/// S^(0) and M(t), either from closed forms (spin-boson) or from numerical Fourier components.
class FirstOrderGenerators {
 public:
  static FirstOrderGenerators spin_boson(const DriveConfig& drive, double tol = kDefaultSeriesTol);
  static FirstOrderGenerators numerical(const FourierComponents& fc, const DriveConfig& drive);
  /// Infinite-frequency limit: the kick operator vanishes, S^(0) is kept.
  FirstOrderGenerators without_kick() const;

  const CMat& s0() const { return s0_; }
  CMat m(double t) const { return kick_ ? m_(t) : CMat::Zero(s0_.rows(), s0_.cols()); }
  bool has_kick() const { return kick_; }
  int dim() const { return static_cast<int>(s0_.rows()); }
  KickSpectra spectra(double t) const;

 private:
  CMat s0_;
  std::function<CMat(double)> m_;
  bool kick_ = true;
};

/// Per-chain bath displacement data of the rotating-frame propagator.
struct DisplacementData {
  CVec alpha;     // alpha^{n1}_k(t) = -i M_{n1}(t) g_k e^{i w_k t}
  CVec alpha0;    // alpha^{n3}_k(0)
  CVec vartheta;  // (S0_{n2} g_k / w_k)(1 - e^{i w_k t})
  CVec Lambda;    // alpha + vartheta - alpha0
  cplx chi;       // alpha . conj(vartheta) - (alpha + vartheta) . conj(alpha0)
  double Omega = 0.0;
  double eta_n2 = 0.0;
};

DisplacementData displacement_data(const MultiIndex& n, double t, const DriveConfig& drive,
                                   const DiscreteBath& bath, const KickSpectra& spectra);

/// sum_k a_k conj(b_k)
cplx dot_conj(const CVec& a, const CVec& b);

}  // namespace floquet_sb
