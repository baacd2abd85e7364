#include "floquet_sb/oracle.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "floquet_sb/errors.hpp"

namespace floquet_sb {

FockSpace::FockSpace(std::vector<int> cutoffs) : cutoffs_(std::move(cutoffs)) {
  if (cutoffs_.empty()) throw DomainError("FockSpace: at least one mode required");
  strides_.assign(cutoffs_.size(), 1);
  for (std::size_t k = cutoffs_.size(); k-- > 0;) {
    if (cutoffs_[k] < 1) throw DomainError("FockSpace: cutoffs must be >= 1");
    strides_[k] = bath_dim_;
    bath_dim_ *= cutoffs_[k] + 1;
    if (bath_dim_ > 2'000'000) throw DomainError("FockSpace: truncated space too large");
  }
}

Eigen::Index FockSpace::bath_index(const std::vector<int>& occupation) const {
  if (occupation.size() != cutoffs_.size()) throw DomainError("bath_index: one occupation per mode");
  Eigen::Index idx = 0;
  for (std::size_t k = 0; k < cutoffs_.size(); ++k) {
    if (occupation[k] < 0 || occupation[k] > cutoffs_[k]) throw DomainError("bath_index: occupation out of range");
    idx += occupation[k] * strides_[k];
  }
  return idx;
}

int FockSpace::occupation(Eigen::Index bath_index, int mode) const {
  const auto k = static_cast<std::size_t>(mode);
  return static_cast<int>((bath_index / strides_.at(k)) % (cutoffs_[k] + 1));
}

FockOperator::FockOperator(CMat m, bool is_hermitian) : matrix(std::move(m)), hermitian(is_hermitian) {
  if (matrix.rows() != matrix.cols()) throw DomainError("FockOperator: matrix must be square");
  if (hermitian && hermiticity_defect(matrix) > 1e-10) throw DomainError("FockOperator: matrix is not Hermitian");
}

CMat embed(const CMat& system, const CMat& bath_op) { return kron(system, bath_op); }

FockOperators build_operators(const FockSpace& fock, const DiscreteBath& bath) {
  if (static_cast<int>(bath.size()) != fock.n_modes()) throw DomainError("build_operators: mode count mismatch");
  const Eigen::Index nb = fock.bath_dim();
  FockOperators ops;
  ops.bath_x = CMat::Zero(nb, nb);
  ops.bath_xdot = CMat::Zero(nb, nb);
  ops.bath_hb = CMat::Zero(nb, nb);
  ops.bath_number_total = CMat::Zero(nb, nb);
  for (int k = 0; k < fock.n_modes(); ++k) {
    CMat a = CMat::Zero(nb, nb);
    for (Eigen::Index j = 0; j < nb; ++j) {
      const int n = fock.occupation(j, k);
      if (n > 0) {
        std::vector<int> occ(static_cast<std::size_t>(fock.n_modes()));
        for (int q = 0; q < fock.n_modes(); ++q) occ[static_cast<std::size_t>(q)] = fock.occupation(j, q);
        occ[static_cast<std::size_t>(k)] = n - 1;
        a(fock.bath_index(occ), j) = std::sqrt(static_cast<double>(n));
      }
      ops.bath_hb(j, j) += bath[static_cast<std::size_t>(k)].omega * n;
      ops.bath_number_total(j, j) += n;
    }
    const double g = bath[static_cast<std::size_t>(k)].g;
    const double w = bath[static_cast<std::size_t>(k)].omega;
    const CMat ad = a.adjoint();
    ops.bath_x += g * (ad + a);
    ops.bath_xdot += kI * (g * w) * (ad - a);
    ops.bath_a.push_back(a);
  }
  const CMat id2 = pauli::identity();
  const CMat idb = CMat::Identity(nb, nb);
  for (const CMat& a : ops.bath_a) {
    ops.a.push_back(embed(id2, a));
    ops.adag.push_back(embed(id2, a.adjoint()));
  }
  ops.x = embed(id2, ops.bath_x);
  ops.xdot = embed(id2, ops.bath_xdot);
  ops.hb = embed(id2, ops.bath_hb);
  ops.sx = embed(pauli::x(), idb);
  ops.sy = embed(pauli::y(), idb);
  ops.sz = embed(pauli::z(), idb);
  ops.id = CMat::Identity(fock.dim(), fock.dim());
  return ops;
}

namespace {

CMat frame_conjugated_sz(const DriveConfig& drive, double t) {
  const CMat u = rotating_frame(pauli::x(), drive, t);
  return u.adjoint() * CMat(pauli::z()) * u;
}

CMat y_operator(const FockOperators& ops, const DriveConfig& drive, Eigen::Index nb) {
  return drive.omega0 * CMat::Identity(nb, nb) + ops.bath_x;
}

}  // namespace

FockOperator hamiltonian(double t, Frame frame, const DriveConfig& drive, const DiscreteBath& bath,
                         const FockSpace& fock) {
  const FockOperators ops = build_operators(fock, bath);
  CMat h;
  if (frame == Frame::lab) {
    h = drive.omega0 * ops.sz + drive.amplitude * std::cos(drive.omegaL * t) * ops.sx + ops.hb + ops.sz * ops.x;
  } else {
    const CMat s = frame_conjugated_sz(drive, t);
    h = embed(s, y_operator(ops, drive, fock.bath_dim())) + ops.hb;
  }
  return FockOperator(0.5 * (h + h.adjoint()), true);
}

ThermalState thermal_state(const DiscreteBath& bath, const FockSpace& fock, const ThermalParams& th) {
  if (static_cast<int>(bath.size()) != fock.n_modes()) throw DomainError("thermal_state: mode count mismatch");
  const Eigen::Index nb = fock.bath_dim();
  RVec weights = RVec::Ones(nb);
  double kept = 1.0;
  for (int k = 0; k < fock.n_modes(); ++k) {
    const double w = bath[static_cast<std::size_t>(k)].omega;
    const double q = th.is_zero_temperature() ? 0.0 : std::exp(-th.beta() * w);
    const int c = fock.cutoffs()[static_cast<std::size_t>(k)];
    kept *= 1.0 - std::pow(q, c + 1);
    for (Eigen::Index j = 0; j < nb; ++j) weights(j) *= std::pow(q, fock.occupation(j, k));
  }
  const double discarded = 1.0 - kept;
  if (discarded > kThermalTailLimit) {
    std::ostringstream os;
    os << "thermal state: discarded Boltzmann weight " << discarded << " exceeds " << kThermalTailLimit
       << "; raise fock_cutoff";
    throw TruncationError(os.str(), discarded);
  }
  weights /= weights.sum();
  CMat rho = CMat::Zero(nb, nb);
  rho.diagonal() = weights.cast<cplx>();
  return {FockOperator(rho, true), discarded};
}

SparseHamiltonian::SparseHamiltonian(Frame frame, const DriveConfig& drive, const DiscreteBath& bath,
                                     const FockSpace& fock)
    : frame_(frame), drive_(drive) {
  const FockOperators ops = build_operators(fock, bath);
  std::vector<CMat> dense;
  if (frame == Frame::lab) {
    dense.push_back(drive.omega0 * ops.sz + ops.hb + ops.sz * ops.x);
    dense.push_back(ops.sx);
  } else {
    const CMat y = y_operator(ops, drive, fock.bath_dim());
    dense.push_back(ops.hb);
    dense.push_back(embed(pauli::x(), y));
    dense.push_back(embed(pauli::y(), y));
    dense.push_back(embed(pauli::z(), y));
  }
  for (const CMat& d : dense) {
    CsrMatrix s = d.sparseView(cplx(1.0), 1e-300);
    s.makeCompressed();
    terms_.push_back(s);
    term_norms_.push_back(d.cwiseAbs().rowwise().sum().maxCoeff());
  }
}

std::vector<double> SparseHamiltonian::coefficients(double t) const {
  if (frame_ == Frame::lab) return {1.0, drive_.amplitude * std::cos(drive_.omegaL * t)};
  const CMat s = frame_conjugated_sz(drive_, t);
  // Pauli decomposition c_p = Tr(S sigma_p)/2
  return {1.0, 0.5 * (s * CMat(pauli::x())).trace().real(), 0.5 * (s * CMat(pauli::y())).trace().real(),
          0.5 * (s * CMat(pauli::z())).trace().real()};
}

CsrMatrix SparseHamiltonian::at(double t) const {
  const std::vector<double> c = coefficients(t);
  CsrMatrix h = c[0] * terms_[0];
  for (std::size_t i = 1; i < terms_.size(); ++i) h += c[i] * terms_[i];
  h.makeCompressed();
  return h;
}

double SparseHamiltonian::norm_bound(double t) const {
  const std::vector<double> c = coefficients(t);
  double b = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) b += std::abs(c[i]) * term_norms_[i];
  return b;
}

namespace {

void apply(const CsrMatrix& h, const CMat& x, CMat& y, bool parallel) {
  if (parallel)
    kernels::parallel::csr_apply_block(h, x, y);
  else
    kernels::serial::csr_apply_block(h, x, y);
}

// W <- exp(-i H(t_mid) dt) W, in substeps with ||H|| dt <= 0.5.
void midpoint_step(CMat& w, double t, double dt, const SparseHamiltonian& ham, const PropagationOptions& opts) {
  const double tm = t + 0.5 * dt;
  const CsrMatrix h = ham.at(tm);
  const int sub = std::max(1, static_cast<int>(std::ceil(ham.norm_bound(tm) * dt / 0.5)));
  const double ds = dt / sub;
  CMat term, next;
  for (int s = 0; s < sub; ++s) {
    term = w;
    const double scale = w.norm();
    for (int k = 1; k <= 60; ++k) {
      apply(h, term, next, opts.parallel);
      term = (-kI * ds / static_cast<double>(k)) * next;
      w += term;
      if (term.norm() <= opts.taylor_tol * scale) break;
      if (k == 60) throw NumericalError("midpoint step: Taylor series did not converge", term.norm() / scale);
    }
  }
}

}  // namespace

void propagate_factor(const CMat& w0, const std::vector<double>& times, const SparseHamiltonian& h,
                      const PropagationOptions& opts,
                      const std::function<void(std::size_t, double, const CMat&)>& observe) {
  if (opts.steps_per_period < 100) throw DomainError("propagate: need >= 100 steps per drive period");
  const double h_target = h.drive().period() / opts.steps_per_period;
  CMat coarse = w0;
  CMat fine = w0;
  double t = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= t)) throw DomainError("propagate: sample times must be >= 0 and non-decreasing");
    const double span = times[i] - t;
    if (span > 0.0) {
      const int n = std::max(1, static_cast<int>(std::ceil(span / h_target - 1e-9)));
      const double dt = span / n;
      for (int s = 0; s < n; ++s) midpoint_step(coarse, t + s * dt, dt, h, opts);
      if (opts.richardson)
        for (int s = 0; s < 2 * n; ++s) midpoint_step(fine, t + s * 0.5 * dt, 0.5 * dt, h, opts);
    }
    t = times[i];
    if (opts.richardson)
      observe(i, t, CMat((4.0 * fine - coarse) / 3.0));
    else
      observe(i, t, coarse);
  }
}

FockOperator propagate(const FockOperator& rho0, double t_final, int steps, Frame frame, const DriveConfig& drive,
                       const DiscreteBath& bath, const FockSpace& fock) {
  if (rho0.matrix.rows() != fock.dim()) throw DomainError("propagate: state dimension mismatch");
  if (!(t_final >= 0.0)) throw DomainError("propagate: t_final must be >= 0");
  const double periods = t_final / drive.period();
  if (steps < 1 || (periods > 0.0 && steps / periods < 100.0 - 1e-9))
    throw DomainError("propagate: need >= 100 steps per drive period");
  const HermitianEigen eig = hermitian_eigen(rho0.matrix);
  std::vector<Eigen::Index> keep;
  const double floor = 1e-15 * std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) > floor) keep.push_back(i);
  if (keep.empty()) throw DomainError("propagate: state has no positive weight");
  CMat w(fock.dim(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    w.col(static_cast<Eigen::Index>(c)) = std::sqrt(eig.values(keep[c])) * eig.vectors.col(keep[c]);

  const SparseHamiltonian ham(frame, drive, bath, fock);
  PropagationOptions opts;
  opts.richardson = false;
  const double dt = t_final / steps;
  for (int s = 0; s < steps && dt > 0.0; ++s) midpoint_step(w, s * dt, dt, ham, opts);
  const CMat rho = w * w.adjoint();
  return FockOperator(0.5 * (rho + rho.adjoint()), true);
}

CMat propagator(double t_final, Frame frame, const DriveConfig& drive, const DiscreteBath& bath,
                const FockSpace& fock, const PropagationOptions& opts) {
  const SparseHamiltonian ham(frame, drive, bath, fock);
  CMat out;
  propagate_factor(CMat::Identity(fock.dim(), fock.dim()), {t_final}, ham, opts,
                   [&](std::size_t, double, const CMat& w) { out = w; });
  return out;
}

CMat product_factor(const CMat& rho_system, const ThermalState& bath_state) {
  if (rho_system.rows() != 2 || rho_system.cols() != 2) throw DomainError("product_factor: qubit state required");
  const HermitianEigen es = hermitian_eigen(rho_system);
  const RVec pb = bath_state.rho.matrix.diagonal().real();
  const Eigen::Index nb = pb.size();
  std::vector<CVec> cols;
  for (Eigen::Index i = 0; i < 2; ++i) {
    if (es.values(i) <= 1e-15) continue;
    for (Eigen::Index j = 0; j < nb; ++j) {
      if (pb(j) <= 0.0) continue;
      CVec e = CVec::Zero(nb);
      e(j) = 1.0;
      cols.push_back(std::sqrt(es.values(i) * pb(j)) * kron(es.vectors.col(i), e));
    }
  }
  CMat w(2 * nb, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) w.col(static_cast<Eigen::Index>(c)) = cols[c];
  return w;
}

QubitState partial_trace_bath(const FockOperator& rho, const FockSpace& fock) {
  if (rho.matrix.rows() != fock.dim()) throw DomainError("partial_trace_bath: dimension mismatch");
  const Eigen::Index nb = fock.bath_dim();
  QubitState out;
  for (int s = 0; s < 2; ++s)
    for (int r = 0; r < 2; ++r) out.rho(s, r) = rho.matrix.block(s * nb, r * nb, nb, nb).trace();
  return out;
}

QubitState partial_trace_factor(const CMat& w, const FockSpace& fock) {
  if (w.rows() != fock.dim()) throw DomainError("partial_trace_factor: dimension mismatch");
  const Eigen::Index nb = fock.bath_dim();
  QubitState out;
  for (int s = 0; s < 2; ++s)
    for (int r = 0; r < 2; ++r)
      out.rho(s, r) = (w.middleRows(s * nb, nb).array() * w.middleRows(r * nb, nb).conjugate().array()).sum();
  return out;
}

CMat displacement(const CVec& mu, const FockSpace& fock) {
  if (mu.size() != fock.n_modes()) throw DomainError("displacement: one amplitude per mode required");
  CMat out = CMat::Identity(1, 1);
  for (int k = 0; k < fock.n_modes(); ++k) {
    const int c = fock.cutoffs()[static_cast<std::size_t>(k)];
    CMat a = CMat::Zero(c + 1, c + 1);
    for (int n = 1; n <= c; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    // D = exp(G) with G anti-Hermitian; iG is Hermitian.
    const CMat g = mu(k) * a.adjoint() - std::conj(mu(k)) * a;
    out = kron(out, expm_hermitian(CMat(kI * g), -kI));
  }
  return out;
}

FockOperator analytic_propagator(double t, const DriveConfig& drive, const DiscreteBath& bath,
                                 const FockSpace& fock, const FirstOrderGenerators& gen) {
  if (gen.dim() != 2) throw DomainError("analytic_propagator: qubit generators required");
  const KickSpectra spectra = gen.spectra(t);
  const Eigen::Index nb = fock.bath_dim();
  CMat free_bath = CMat::Zero(nb, nb);
  for (Eigen::Index j = 0; j < nb; ++j) {
    double e = 0.0;
    for (int k = 0; k < fock.n_modes(); ++k) e += bath[static_cast<std::size_t>(k)].omega * fock.occupation(j, k);
    free_bath(j, j) = std::polar(1.0, -e * t);
  }
  CMat u = CMat::Zero(fock.dim(), fock.dim());
  for (const MultiIndex& n : spectra.indices()) {
    const DisplacementData d = displacement_data(n, t, drive, bath, spectra);
    const cplx phase = std::polar(1.0, -d.Omega + d.chi.imag());
    u += phase * embed(spectra.chain(n), free_bath * displacement(d.Lambda, fock));
  }
  return FockOperator(u, false);
}

double mode_occupation(const FockOperator& rho, int k, const FockSpace& fock) {
  if (k < 0 || k >= fock.n_modes()) throw DomainError("mode_occupation: invalid mode index");
  if (rho.matrix.rows() != fock.dim()) throw DomainError("mode_occupation: dimension mismatch");
  const Eigen::Index nb = fock.bath_dim();
  double s = 0.0;
  for (Eigen::Index i = 0; i < fock.dim(); ++i) s += rho.matrix(i, i).real() * fock.occupation(i % nb, k);
  return s;
}

double boundary_weight(const CMat& rho, const FockSpace& fock) {
  const Eigen::Index nb = fock.bath_dim();
  double s = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    for (int k = 0; k < fock.n_modes(); ++k)
      if (fock.occupation(i % nb, k) == fock.cutoffs()[static_cast<std::size_t>(k)]) s += rho(i, i).real();
  return s;
}

namespace {
constexpr char kMagic[4] = {'F', 'S', 'B', 'O'};
constexpr std::uint32_t kDumpVersion = 1;

void require_little_endian() {
  if constexpr (std::endian::native != std::endian::little)
    throw DomainError("binary dump: only little-endian hosts are supported");
}
}  // namespace

void write_binary(const std::string& path, const CMat& m, int n_modes) {
  require_little_endian();
  if (m.rows() != m.cols()) throw DomainError("write_binary: square matrix required");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_binary: cannot open " + path);
  unsigned char header[32] = {};
  const std::uint64_t dim = static_cast<std::uint64_t>(m.rows());
  const std::uint32_t modes = static_cast<std::uint32_t>(n_modes);
  std::memcpy(header, kMagic, 4);
  std::memcpy(header + 4, &kDumpVersion, 4);
  std::memcpy(header + 8, &dim, 8);
  std::memcpy(header + 16, &modes, 4);
  out.write(reinterpret_cast<const char*>(header), 32);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double v[2] = {m(r, c).real(), m(r, c).imag()};
      out.write(reinterpret_cast<const char*>(v), sizeof v);
    }
  if (!out) throw std::runtime_error("write_binary: write failed for " + path);
}

BinaryDump read_binary(const std::string& path) {
  require_little_endian();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_binary: cannot open " + path);
  unsigned char header[32];
  in.read(reinterpret_cast<char*>(header), 32);
  if (!in || std::memcmp(header, kMagic, 4) != 0) throw DomainError("read_binary: bad magic in " + path);
  BinaryDump d;
  std::uint64_t dim = 0;
  std::uint32_t modes = 0;
  std::memcpy(&d.version, header + 4, 4);
  std::memcpy(&dim, header + 8, 8);
  std::memcpy(&modes, header + 16, 4);
  if (d.version != kDumpVersion) throw DomainError("read_binary: unsupported version");
  d.n_modes = static_cast<int>(modes);
  const auto n = static_cast<Eigen::Index>(dim);
  d.matrix.resize(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      double v[2];
      in.read(reinterpret_cast<char*>(v), sizeof v);
      d.matrix(r, c) = cplx(v[0], v[1]);
    }
  if (!in) throw DomainError("read_binary: truncated file " + path);
  return d;
}

}  // namespace floquet_sb
