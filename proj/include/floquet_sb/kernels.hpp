#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

#include <Eigen/SparseCore>

#include "floquet_sb/linalg.hpp"
#include "floquet_sb/model.hpp"
#include "floquet_sb/reduced_dynamics.hpp"

namespace floquet_sb {

using CsrMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor, int>;

namespace kernels {

/// Thread cap from FLOQUET_SB_THREADS (unset or invalid: OpenMP default).
int thread_limit();

namespace serial {
/// y = A x for a block of column vectors.
void csr_apply_block(const CsrMatrix& a, const CMat& x, CMat& y);
std::vector<SpectralIntegrals> spectral_integrals_grid(const SpectralDensity& sd, const std::vector<double>& times,
                                                       const ThermalParams& th,
                                                       const SpectralIntegralOptions& opts = {});
std::vector<QubitState> rho_s_grid(const ReducedDynamics& dyn, const std::vector<SpectralIntegrals>& grid,
                                   const QubitState& rho0);
}  // namespace serial

namespace parallel {
/// body(i) for i in [0, n) across threads; the first exception is rethrown on the caller.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

void csr_apply_block(const CsrMatrix& a, const CMat& x, CMat& y);
std::vector<SpectralIntegrals> spectral_integrals_grid(const SpectralDensity& sd, const std::vector<double>& times,
                                                       const ThermalParams& th,
                                                       const SpectralIntegralOptions& opts = {});
std::vector<QubitState> rho_s_grid(const ReducedDynamics& dyn, const std::vector<SpectralIntegrals>& grid,
                                   const QubitState& rho0);
}  // namespace parallel

}  // namespace kernels
}  // namespace floquet_sb
