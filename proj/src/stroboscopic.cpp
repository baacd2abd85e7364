#include "floquet_sb/stroboscopic.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "floquet_sb/errors.hpp"
#include "floquet_sb/log.hpp"
#include "floquet_sb/specfun.hpp"

namespace floquet_sb {

ShiftedKickCoefficients shifted_kick(double t, double t0, const DriveConfig& drive) {
  const KickSeries series(drive);
  return {series.f(t) - series.f(t0), series.h(t) - series.h(t0), t0, t};
}

namespace {
CMat y_full(const FockOperators& ops, const DriveConfig& drive) { return drive.omega0 * ops.id + ops.x; }
}  // namespace

FockOperator floquet_hamiltonian(double t0, const DriveConfig& drive, const DiscreteBath& bath,
                                 const FockSpace& fock, const FloquetTerms& terms) {
  drive.validate();
  const KickSeries series(drive);
  const double f0 = series.f(t0);
  const double h0 = series.h(t0);
  const double j0 = series.j0();
  const FockOperators ops = build_operators(fock, bath);
  const CMat y = y_full(ops, drive);
  CMat h = j0 * ops.sz * y + ops.hb;
  if (terms.xdot) h += (f0 * ops.sz - h0 * ops.sy) * ops.xdot;
  if (terms.squared) h += (-2.0 * h0 * j0) * ops.sx * y * y;
  return FockOperator(0.5 * (h + h.adjoint()), true);
}

FockOperator strob_kick(double t, double t0, const DriveConfig& drive, const DiscreteBath& bath,
                        const FockSpace& fock) {
  const ShiftedKickCoefficients s = shifted_kick(t, t0, drive);
  const FockOperators ops = build_operators(fock, bath);
  const CMat k = (s.f_tilde * ops.sz - s.h_tilde * ops.sy) * y_full(ops, drive);
  return FockOperator(0.5 * (k + k.adjoint()), true);
}

KickExponential::KickExponential(const DriveConfig& drive, const DiscreteBath& bath, const FockSpace& fock)
    : drive_(drive), series_(drive) {
  const FockOperators ops = build_operators(fock, bath);
  y_eig_ = hermitian_eigen(drive.omega0 * CMat::Identity(fock.bath_dim(), fock.bath_dim()) + ops.bath_x);
}

CMat KickExponential::operator()(double t, double t0, double c) const {
  const double ft = series_.f(t) - series_.f(t0);
  const double ht = series_.h(t) - series_.h(t0);
  const HermitianEigen m = hermitian_eigen(CMat(ft * pauli::z() - ht * pauli::y()));
  const Eigen::Index nb = y_eig_.values.size();
  CMat out = CMat::Zero(2 * nb, 2 * nb);
  for (Eigen::Index j = 0; j < 2; ++j) {
    const CVec u = m.vectors.col(j);
    CVec phases(nb);
    for (Eigen::Index i = 0; i < nb; ++i) phases(i) = std::polar(1.0, c * m.values(j) * y_eig_.values(i));
    const CMat bath_part = y_eig_.vectors * phases.asDiagonal() * y_eig_.vectors.adjoint();
    out += kron(u * u.adjoint(), bath_part);
  }
  return out;
}

ObservableFamily observable_family(const CMat& op, double tau, double t0, const KickExponential& kick) {
  if (hermiticity_defect(op) > 1e-10) throw DomainError("observable_family: observable must be Hermitian");
  const CMat u = kick(tau, t0, 1.0);
  if (u.rows() != op.rows()) throw DomainError("observable_family: dimension mismatch");
  CMat o = u * op * u.adjoint();
  return {op, tau, t0, 0.5 * (o + o.adjoint())};
}

ObservableFamily observable_family(const CMat& op, double tau, double t0, const DriveConfig& drive,
                                   const DiscreteBath& bath, const FockSpace& fock) {
  return observable_family(op, tau, t0, KickExponential(drive, bath, fock));
}

StroboscopicEvolution::StroboscopicEvolution(const FockOperator& hf, const CMat& state_t0, double t0,
                                             double period)
    : eig_(hermitian_eigen(hf.matrix)), t0_(t0), period_(period) {
  if (state_t0.rows() != hf.matrix.rows() || state_t0.cols() != hf.matrix.cols())
    throw DomainError("StroboscopicEvolution: state dimension mismatch");
  if (!(period > 0.0)) throw DomainError("StroboscopicEvolution: period must be > 0");
  rho_eig_ = eig_.vectors.adjoint() * state_t0 * eig_.vectors;
}

std::vector<double> StroboscopicEvolution::samples(const ObservableFamily& family, int n_max) const {
  if (n_max < 0) throw DomainError("strob_sample: n must be >= 0");
  if (family.tau < family.t0 - 1e-12 || family.tau > family.t0 + period_ + 1e-12)
    throw DomainError("strob_sample: tau must lie in [t0, t0 + T]");
  const CMat o = eig_.vectors.adjoint() * family.transformed * eig_.vectors;
  const CMat c = o.cwiseProduct(rho_eig_.transpose());
  const Eigen::Index d = c.rows();
  std::vector<double> out;
  for (int n = 0; n <= n_max; ++n) {
    const double elapsed = family.tau + n * period_ - t0_;
    CVec p(d);
    for (Eigen::Index i = 0; i < d; ++i) p(i) = std::polar(1.0, eig_.values(i) * elapsed);
    out.push_back((p.transpose() * c * p.conjugate()).value().real());
  }
  return out;
}

double StroboscopicEvolution::sample(const ObservableFamily& family, int n) const {
  return samples(family, n).back();
}

double StroboscopicEvolution::boundary_weight(double elapsed, const FockSpace& fock) const {
  const Eigen::Index d = rho_eig_.rows();
  const Eigen::Index nb = fock.bath_dim();
  CVec p(d);
  for (Eigen::Index i = 0; i < d; ++i) p(i) = std::polar(1.0, -eig_.values(i) * elapsed);
  const CMat r = p.asDiagonal() * rho_eig_ * p.conjugate().asDiagonal();
  double total = 0.0;
  for (Eigen::Index a = 0; a < d; ++a) {
    int hits = 0;
    for (int k = 0; k < fock.n_modes(); ++k)
      if (fock.occupation(a % nb, k) == fock.cutoffs()[static_cast<std::size_t>(k)]) ++hits;
    if (hits == 0) continue;
    const CVec v = eig_.vectors.row(a).transpose();
    total += hits * (v.transpose() * r * v.conjugate()).value().real();
  }
  return total;
}

double StroboscopicEvolution::check_truncation(const std::vector<double>& elapsed, const FockSpace& fock,
                                               double limit) const {
  double worst = 0.0;
  for (double e : elapsed) worst = std::max(worst, boundary_weight(e, fock));
  if (worst > limit) {
    std::ostringstream os;
    os << "Fock truncation: top-level occupation " << worst << " exceeds " << limit << "; raise fock_cutoff";
    log::warn(os.str());
  }
  return worst;
}

double strob_sample(const ObservableFamily& family, int n, const FockOperator& hf, const CMat& state_t0,
                    const DriveConfig& drive) {
  return StroboscopicEvolution(hf, state_t0, family.t0, drive.period()).sample(family, n);
}

double polaron_coherence(double tau, double t0, const DriveConfig& drive, const DiscreteBath& bath,
                         const FockSpace& fock, const CMat& state) {
  const FockOperators ops = build_operators(fock, bath);
  const ObservableFamily fam = observable_family(ops.sz, tau, t0, drive, bath, fock);
  return (state * fam.transformed).trace().real();
}

CVec polaron_state(double tau, double t0, int sign, const DriveConfig& drive, const DiscreteBath& bath,
                   const FockSpace& fock) {
  if (sign != 1 && sign != -1) throw DomainError("polaron_state: sign must be +1 or -1");
  CVec psi = CVec::Zero(fock.dim());
  psi(sign == 1 ? 0 : fock.bath_dim()) = 1.0;
  return KickExponential(drive, bath, fock)(tau, t0, 1.0) * psi;
}

CVec polaron_state_coherent(double h_tilde, int sign, const DriveConfig& drive, const DiscreteBath& bath,
                            const FockSpace& fock) {
  if (sign != 1 && sign != -1) throw DomainError("polaron_state_coherent: sign must be +1 or -1");
  const double s = 1.0 / std::sqrt(2.0);
  CVec plus_y(2), minus_y(2);
  plus_y << s, kI * s;
  minus_y << s, -kI * s;
  CVec mu(fock.n_modes());
  for (int k = 0; k < fock.n_modes(); ++k) mu(k) = -kI * h_tilde * bath[static_cast<std::size_t>(k)].g;
  CVec vac = CVec::Zero(fock.bath_dim());
  vac(0) = 1.0;
  const CVec up = displacement(mu, fock) * vac;
  const CVec down = displacement(CVec(-mu), fock) * vac;
  const cplx ph = std::polar(1.0, h_tilde * drive.omega0);
  CVec psi = s * (std::conj(ph) * kron(plus_y, up) + static_cast<double>(sign) * ph * kron(minus_y, down));
  return psi;
}

double f_tilde_root(double t0, const DriveConfig& drive, double lo, double hi) {
  const KickSeries series(drive);
  const double f0 = series.f(t0);
  auto fn = [&](double t) { return series.f(t) - f0; };
  const double flo = fn(lo), fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw DomainError("f_tilde_root: no sign change in the bracket");
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(fn, lo, hi, flo, fhi,
                                                   boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace floquet_sb
