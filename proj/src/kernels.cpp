#include "floquet_sb/kernels.hpp"

#include <cstdlib>
#include <exception>
#include <string>

#include <omp.h>

#include "floquet_sb/errors.hpp"

namespace floquet_sb::kernels {

int thread_limit() {
  const char* env = std::getenv("FLOQUET_SB_THREADS");
  if (env != nullptr) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  return omp_get_max_threads();
}

namespace {

void check_shapes(const CsrMatrix& a, const CMat& x, CMat& y) {
  if (a.cols() != x.rows()) throw DomainError("csr_apply_block: dimension mismatch");
  y.resize(a.rows(), x.cols());
}

inline void apply_row(const CsrMatrix& a, const CMat& x, CMat& y, Eigen::Index r) {
  const int* outer = a.outerIndexPtr();
  const int* inner = a.innerIndexPtr();
  const cplx* val = a.valuePtr();
  y.row(r).setZero();
  for (int p = outer[r]; p < outer[r + 1]; ++p) y.row(r) += val[p] * x.row(inner[p]);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) num_threads(thread_limit())
  for (std::size_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(floquet_sb_kernel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

namespace serial {

void csr_apply_block(const CsrMatrix& a, const CMat& x, CMat& y) {
  if (!a.isCompressed()) throw DomainError("csr_apply_block: matrix must be compressed");
  check_shapes(a, x, y);
  for (Eigen::Index r = 0; r < a.rows(); ++r) apply_row(a, x, y, r);
}

std::vector<SpectralIntegrals> spectral_integrals_grid(const SpectralDensity& sd, const std::vector<double>& times,
                                                       const ThermalParams& th,
                                                       const SpectralIntegralOptions& opts) {
  std::vector<SpectralIntegrals> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(spectral_integrals(sd, t, th, opts));
  return out;
}

std::vector<QubitState> rho_s_grid(const ReducedDynamics& dyn, const std::vector<SpectralIntegrals>& grid,
                                   const QubitState& rho0) {
  std::vector<QubitState> out;
  out.reserve(grid.size());
  for (const auto& si : grid) out.push_back(dyn.rho_s(si, rho0));
  return out;
}

}  // namespace serial

namespace parallel {

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body) { parallel_for(n, body); }

void csr_apply_block(const CsrMatrix& a, const CMat& x, CMat& y) {
  if (!a.isCompressed()) throw DomainError("csr_apply_block: matrix must be compressed");
  check_shapes(a, x, y);
  const Eigen::Index rows = a.rows();
#pragma omp parallel for schedule(static) num_threads(thread_limit())
  for (Eigen::Index r = 0; r < rows; ++r) apply_row(a, x, y, r);
}

std::vector<SpectralIntegrals> spectral_integrals_grid(const SpectralDensity& sd, const std::vector<double>& times,
                                                       const ThermalParams& th,
                                                       const SpectralIntegralOptions& opts) {
  std::vector<SpectralIntegrals> out(times.size());
  parallel_for(times.size(), [&](std::size_t i) { out[i] = spectral_integrals(sd, times[i], th, opts); });
  return out;
}

std::vector<QubitState> rho_s_grid(const ReducedDynamics& dyn, const std::vector<SpectralIntegrals>& grid,
                                   const QubitState& rho0) {
  std::vector<QubitState> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { out[i] = dyn.rho_s(grid[i], rho0); });
  return out;
}

}  // namespace parallel

}  // namespace floquet_sb::kernels
