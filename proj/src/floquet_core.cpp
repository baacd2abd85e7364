#include "floquet_sb/floquet_core.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "floquet_sb/errors.hpp"

namespace floquet_sb {

void SystemOperators::validate(double tol) const {
  if (S.rows() != S.cols() || V.rows() != V.cols() || S.rows() != V.rows())
    throw DomainError("system operators must be square and of equal dimension");
  if (S.rows() < 2) throw DomainError("system dimension must be >= 2");
  if (hermiticity_defect(S) > tol) throw DomainError("S is not Hermitian");
  if (hermiticity_defect(V) > tol) throw DomainError("V is not Hermitian");
}

SystemOperators SystemOperators::spin_boson() { return {pauli::z(), pauli::x()}; }

CMat rotating_frame(const CMat& V, const DriveConfig& drive, double t) {
  const double phase = drive.amplitude / drive.omegaL * std::sin(drive.omegaL * t);
  return expm_hermitian(V, -kI * phase);
}

FourierComponents::FourierComponents(int l_max, std::vector<CMat> components)
    : l_max_(l_max), components_(std::move(components)) {
  if (l_max_ < 0 || components_.size() != static_cast<std::size_t>(2 * l_max_ + 1))
    throw DomainError("FourierComponents: need 2 l_max + 1 components");
}

FourierComponents fourier_components(const SystemOperators& sys, const DriveConfig& drive, int l_max,
                                     int grid_points, double alias_tol) {
  sys.validate();
  if (l_max < 1) throw DomainError("fourier_components: l_max must be >= 1");
  if (grid_points < 8 * l_max) throw DomainError("fourier_components: need grid_points >= 8 l_max");

  const int d = sys.dim();
  const HermitianEigen v_eig = hermitian_eigen(sys.V);
  std::vector<CMat> comps(static_cast<std::size_t>(2 * l_max + 1), CMat::Zero(d, d));
  const double period = drive.period();
  for (int j = 0; j < grid_points; ++j) {
    const double t = period * j / grid_points;
    const double phase = drive.amplitude / drive.omegaL * std::sin(drive.omegaL * t);
    const CMat u = expm_hermitian(v_eig, -kI * phase);
    const CMat st = u.adjoint() * sys.S * u;
    for (int l = -l_max; l <= l_max; ++l) {
      const double arg = -2.0 * std::numbers::pi * l * j / grid_points;
      comps[static_cast<std::size_t>(l + l_max)] += std::polar(1.0 / grid_points, arg) * st;
    }
  }
  const double edge = std::max(comps.front().norm(), comps.back().norm());
  if (edge > alias_tol) {
    std::ostringstream os;
    os << "fourier_components: ||S^(l_max)|| = " << edge << " > " << alias_tol << "; increase l_max";
    throw ResolutionError(os.str(), edge);
  }
  return FourierComponents(l_max, std::move(comps));
}

ParityCheck check_parity_condition(const FourierComponents& fc, double tol) {
  ParityCheck out;
  for (int l = 1; l <= fc.l_max(); ++l) {
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    const double v = (fc[-l] - sign * fc[l]).norm();
    out.max_violation = std::max(out.max_violation, v);
  }
  out.holds = out.max_violation <= tol;
  return out;
}

namespace {
void require_parity(const FourierComponents& fc) {
  const ParityCheck pc = check_parity_condition(fc);
  if (!pc.holds) {
    std::ostringstream os;
    os << "parity condition S^(-l) = (-1)^l S^(l) violated by " << pc.max_violation
       << "; the first-order effective Hamiltonian and kick operator do not apply";
    throw ParityError(os.str());
  }
}
}  // namespace

CMat m_operator(const FourierComponents& fc, const DriveConfig& drive, double t) {
  require_parity(fc);
  CMat m = CMat::Zero(fc.dim(), fc.dim());
  for (int l = -fc.l_max(); l <= fc.l_max(); ++l) {
    if (l == 0) continue;
    const cplx factor = std::polar(1.0, l * drive.omegaL * t) / (kI * (l * drive.omegaL));
    m += factor * fc[l];
  }
  return m;
}

CMat effective_hamiltonian_parts(const FourierComponents& fc, const DriveConfig& /*drive*/) {
  require_parity(fc);
  return fc[0];
}

ProjectorSpectrum eigen_projectors(const CMat& h, const std::optional<CMat>& degeneracy_basis,
                                   double degeneracy_tol) {
  if (h.rows() != h.cols()) throw DomainError("eigen_projectors: matrix must be square");
  const int d = static_cast<int>(h.rows());
  CMat basis;
  if (degeneracy_basis) {
    basis = *degeneracy_basis;
  } else {
    basis = CMat::Zero(d, d);
    for (int i = 0; i < d; ++i) basis(i, i) = static_cast<double>(d - 1 - 2 * i);
  }
  if (basis.rows() != d || basis.cols() != d) throw DomainError("eigen_projectors: basis dimension mismatch");

  HermitianEigen eig = hermitian_eigen(h);
  // Resolve each degenerate cluster in the eigenbasis of the tie-break operator.
  int start = 0;
  while (start < d) {
    int end = start + 1;
    while (end < d && eig.values(end) - eig.values(end - 1) <= degeneracy_tol) ++end;
    if (end - start > 1) {
      const CMat q = eig.vectors.middleCols(start, end - start);
      const HermitianEigen sub = hermitian_eigen(q.adjoint() * basis * q);
      eig.vectors.middleCols(start, end - start) = q * sub.vectors;
      const double mean = eig.values.segment(start, end - start).mean();
      eig.values.segment(start, end - start).setConstant(mean);
    }
    start = end;
  }

  ProjectorSpectrum out;
  for (int i = 0; i < d; ++i) {
    out.eigenvalues.push_back(eig.values(i));
    const CVec v = eig.vectors.col(i);
    out.projectors.push_back(v * v.adjoint());
  }
  return out;
}

CMat KickSpectra::chain(const MultiIndex& n) const {
  return m_t.projectors.at(static_cast<std::size_t>(n.n1)) * s0.projectors.at(static_cast<std::size_t>(n.n2)) *
         m_0.projectors.at(static_cast<std::size_t>(n.n3));
}

std::vector<MultiIndex> KickSpectra::indices() const {
  std::vector<MultiIndex> out;
  for (int a = 0; a < static_cast<int>(m_t.size()); ++a)
    for (int b = 0; b < static_cast<int>(s0.size()); ++b)
      for (int c = 0; c < static_cast<int>(m_0.size()); ++c) out.push_back({a, b, c});
  return out;
}

FirstOrderGenerators FirstOrderGenerators::spin_boson(const DriveConfig& drive, double tol) {
  const KickSeries series(drive, tol);
  FirstOrderGenerators g;
  g.s0_ = series.j0() * pauli::z();
  g.m_ = [series](double t) -> CMat {
    return CMat(series.f(t) * pauli::z() - series.h(t) * pauli::y());
  };
  return g;
}

FirstOrderGenerators FirstOrderGenerators::numerical(const FourierComponents& fc, const DriveConfig& drive) {
  FirstOrderGenerators g;
  g.s0_ = effective_hamiltonian_parts(fc, drive);
  g.m_ = [fc, drive](double t) { return m_operator(fc, drive, t); };
  return g;
}

FirstOrderGenerators FirstOrderGenerators::without_kick() const {
  FirstOrderGenerators g = *this;
  g.kick_ = false;
  return g;
}

KickSpectra FirstOrderGenerators::spectra(double t) const {
  std::optional<CMat> basis;
  if (dim() == 2) basis = CMat(pauli::z());
  return {eigen_projectors(m(t), basis), eigen_projectors(s0_, basis), eigen_projectors(m(0.0), basis)};
}

cplx dot_conj(const CVec& a, const CVec& b) { return (a.array() * b.array().conjugate()).sum(); }

DisplacementData displacement_data(const MultiIndex& n, double t, const DriveConfig& drive,
                                   const DiscreteBath& bath, const KickSpectra& spectra) {
  if (!(t >= 0.0)) throw DomainError("displacement_data: t must be >= 0");
  const double m1 = spectra.m_t.eigenvalues.at(static_cast<std::size_t>(n.n1));
  const double s2 = spectra.s0.eigenvalues.at(static_cast<std::size_t>(n.n2));
  const double m3 = spectra.m_0.eigenvalues.at(static_cast<std::size_t>(n.n3));

  const Eigen::Index nk = static_cast<Eigen::Index>(bath.size());
  DisplacementData d;
  d.alpha.resize(nk);
  d.alpha0.resize(nk);
  d.vartheta.resize(nk);
  double eta_sum = 0.0;
  for (Eigen::Index k = 0; k < nk; ++k) {
    const double w = bath[static_cast<std::size_t>(k)].omega;
    const double g = bath[static_cast<std::size_t>(k)].g;
    const cplx e = std::polar(1.0, w * t);
    d.alpha(k) = -kI * m1 * g * e;
    d.alpha0(k) = -kI * m3 * g;
    d.vartheta(k) = (s2 * g / w) * (1.0 - e);
    const double x = w * t;
    eta_sum += (g / w) * (g / w) * (x - std::sin(x));
  }
  d.Lambda = d.alpha + d.vartheta - d.alpha0;
  d.chi = dot_conj(d.alpha, d.vartheta) - dot_conj(d.alpha + d.vartheta, d.alpha0);
  d.eta_n2 = s2 * s2 * eta_sum;
  d.Omega = drive.omega0 * (m1 + s2 * t - m3) - d.eta_n2;
  return d;
}

}  // namespace floquet_sb
