#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "floquet_sb/drive.hpp"
#include "floquet_sb/floquet_core.hpp"
#include "floquet_sb/kernels.hpp"
#include "floquet_sb/linalg.hpp"
#include "floquet_sb/model.hpp"
#include "floquet_sb/reduced_dynamics.hpp"

namespace floquet_sb {

/// Qubit times truncated bosonic modes. Basis order: system index slowest, then mode 1 ... mode N
/// occupations lexicographically (last mode fastest).
class FockSpace {
 public:
  explicit FockSpace(std::vector<int> cutoffs);

  int n_modes() const { return static_cast<int>(cutoffs_.size()); }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  Eigen::Index bath_dim() const { return bath_dim_; }
  Eigen::Index dim() const { return 2 * bath_dim_; }
  /// Bath basis index of an occupation vector.
  Eigen::Index bath_index(const std::vector<int>& occupation) const;
  int occupation(Eigen::Index bath_index, int mode) const;

 private:
  std::vector<int> cutoffs_;
  std::vector<Eigen::Index> strides_;
  Eigen::Index bath_dim_ = 1;
};

/// Dense operator on the full (or bath-only) truncated space.
struct FockOperator {
  CMat matrix;
  bool hermitian = false;

  FockOperator() = default;
  /// Verifies hermiticity to 1e-10 when the flag is set.
  FockOperator(CMat m, bool is_hermitian);
};

/// Ladder and collective operators. Bath-only factors and their embedding in the full space.
struct FockOperators {
  std::vector<CMat> bath_a;  // a_k on the bath factor
  CMat bath_x, bath_xdot, bath_hb, bath_number_total;
  std::vector<CMat> a, adag;
  CMat x, xdot, hb, sx, sy, sz, id;
};

/// X = sum g_k (a_k^dag + a_k), Xdot = i sum g_k w_k (a_k^dag - a_k), H_B = sum w_k a_k^dag a_k.
FockOperators build_operators(const FockSpace& fock, const DiscreteBath& bath);

/// kron(system 2x2, bath operator) in the documented basis order.
CMat embed(const CMat& system, const CMat& bath_op);

enum class Frame { lab, rotating };

/// Lab: omega0 sz + A cos(wL t) sx + H_B + sz X. Rotating: S(t)(omega0 + X) + H_B, S(t) = U^dag sz U.
FockOperator hamiltonian(double t, Frame frame, const DriveConfig& drive, const DiscreteBath& bath,
                         const FockSpace& fock);

inline constexpr double kThermalTailLimit = 1e-4;

struct ThermalState {
  FockOperator rho;          // bath factor, unit trace
  double discarded = 0.0;    // Boltzmann weight outside the truncated space
};

/// exp(-beta H_B)/Z on the bath factor. Throws TruncationError when discarded weight > kThermalTailLimit.
ThermalState thermal_state(const DiscreteBath& bath, const FockSpace& fock, const ThermalParams& th);

/// Time-dependent Hamiltonian as a list of fixed sparse terms with scalar coefficients.
class SparseHamiltonian {
 public:
  SparseHamiltonian(Frame frame, const DriveConfig& drive, const DiscreteBath& bath, const FockSpace& fock);

  CsrMatrix at(double t) const;
  /// Upper bound on the infinity norm of H(t).
  double norm_bound(double t) const;
  Frame frame() const { return frame_; }
  const DriveConfig& drive() const { return drive_; }

 private:
  std::vector<double> coefficients(double t) const;
  Frame frame_;
  DriveConfig drive_;
  std::vector<CsrMatrix> terms_;
  std::vector<double> term_norms_;
};

struct PropagationOptions {
  int steps_per_period = 200;
  bool richardson = true;   // combine h and h/2 runs: (4 W(h/2) - W(h))/3
  bool parallel = true;     // OpenMP sparse kernel
  double taylor_tol = 1e-15;
};

/// Propagates a factor W (rho = W W^dag, or U = W for W0 = I) by midpoint exponentials
/// exp(-i H(t_mid) h), each applied by a Taylor series. Calls observe(i, times[i], W) at each sample.
/// Throws DomainError when fewer than 100 steps per drive period are requested.
void propagate_factor(const CMat& w0, const std::vector<double>& times, const SparseHamiltonian& h,
                      const PropagationOptions& opts,
                      const std::function<void(std::size_t, double, const CMat&)>& observe);

/// Density matrix after `steps` uniform midpoint steps (no extrapolation).
FockOperator propagate(const FockOperator& rho0, double t_final, int steps, Frame frame, const DriveConfig& drive,
                       const DiscreteBath& bath, const FockSpace& fock);

/// Full propagator U(t_final, 0).
CMat propagator(double t_final, Frame frame, const DriveConfig& drive, const DiscreteBath& bath,
                const FockSpace& fock, const PropagationOptions& opts = {});

/// Factor of rho_S (x) rho_B: columns sqrt(p_j) psi_S (x) e_j for the thermal weights p_j (rank <= 2 B).
CMat product_factor(const CMat& rho_system, const ThermalState& bath_state);

QubitState partial_trace_bath(const FockOperator& rho, const FockSpace& fock);
QubitState partial_trace_factor(const CMat& w, const FockSpace& fock);

/// D[mu] = exp(sum mu_k a_k^dag - conj(mu_k) a_k) on the bath factor.
CMat displacement(const CVec& mu, const FockSpace& fock);

/// Assembled first-order propagator in the rotating frame:
/// U_R(t, 0) = sum_n e^{-i Omega_n} e^{i Im chi_n} e^{-i H_B t} G_n(t) D[Lambda_n(t)].
FockOperator analytic_propagator(double t, const DriveConfig& drive, const DiscreteBath& bath,
                                 const FockSpace& fock, const FirstOrderGenerators& gen);

double mode_occupation(const FockOperator& rho, int k, const FockSpace& fock);

/// Occupation probability of the top level of every mode, summed (full-space density matrix).
double boundary_weight(const CMat& rho, const FockSpace& fock);

/// Binary dump: 32-byte header ("FSBO", u32 version, u64 dim, u32 n_modes, 12 reserved bytes), then the
/// matrix row-major as little-endian complex128.
void write_binary(const std::string& path, const CMat& m, int n_modes);
struct BinaryDump {
  CMat matrix;
  int n_modes = 0;
  std::uint32_t version = 0;
};
BinaryDump read_binary(const std::string& path);

}  // namespace floquet_sb
