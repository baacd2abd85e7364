#include "floquet_sb/reduced_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "floquet_sb/errors.hpp"
#include "floquet_sb/log.hpp"

namespace floquet_sb {

QubitState QubitState::plus_z() { return from_bloch(0.0, 0.0, 1.0); }

QubitState QubitState::minus_y() { return from_bloch(0.0, -1.0, 0.0); }

QubitState QubitState::from_bloch(double x, double y, double z) {
  const double norm = std::sqrt(x * x + y * y + z * z);
  if (!std::isfinite(norm) || norm > 1.0 + 1e-12) throw DomainError("Bloch vector norm must be <= 1");
  QubitState s;
  s.rho = 0.5 * (CMat(pauli::identity()) + x * pauli::x() + y * pauli::y() + z * pauli::z());
  return s;
}

double QubitState::min_eigenvalue() const {
  const CMat h = 0.5 * (rho + rho.adjoint());
  return Eigen::SelfAdjointEigenSolver<CMat>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

void QubitState::validate(double tol, double eig_tol) const {
  if (rho.rows() != 2 || rho.cols() != 2) throw DomainError("qubit state must be 2x2");
  if (!rho.allFinite()) throw DomainError("qubit state has non-finite entries");
  if (hermiticity_defect(rho) > tol) throw DomainError("qubit state is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > tol) throw DomainError("qubit state trace differs from 1");
  if (min_eigenvalue() < -eig_tol) throw DomainError("qubit state has a negative eigenvalue");
}

namespace {

double clip_delta(double delta) {
  if (delta >= 0.0) return delta;
  if (delta >= -1e-9) {
    log::warn("decoherence exponent slightly negative from round-off; clipped to 0");
    return 0.0;
  }
  std::ostringstream os;
  os << "decoherence exponent is negative (" << delta << ")";
  throw NumericalError(os.str(), delta);
}

void require_labels(const MultiIndex& n) {
  for (int v : {n.n1, n.n2, n.n3})
    if (v != 1 && v != -1) throw DomainError("closed-form phases need labels in {+1, -1}");
}

}  // namespace

PhasePair phases_continuum(const MultiIndex& n, const MultiIndex& nt, const PhaseInputs& in,
                           const SpectralIntegrals& si) {
  require_labels(n);
  require_labels(nt);
  const double d1 = nt.n1 - n.n1;
  const double d2 = nt.n2 - n.n2;
  const double d3 = nt.n3 - n.n3;
  const double et = in.eta_t;
  const double e0 = in.eta_0;
  const double j0 = in.j0;

  double delta = 2.0 * j0 * j0 * (1.0 - nt.n2 * n.n2) * si.i1 +
                 ((1.0 - nt.n1 * n.n1) * et * et + (1.0 - nt.n3 * n.n3) * e0 * e0) * si.i2 -
                 d1 * d3 * et * e0 * si.i3 + j0 * d2 * (d1 * et - d3 * e0) * si.i4;
  const double s3 = n.n3 + nt.n3;
  const double s2 = n.n2 + nt.n2;
  const double theta = in.omega0 * (d1 * et + d2 * j0 * in.t - d3 * e0) +
                       j0 * (s3 * d2 * e0 - s2 * d1 * et) * si.i5 + s3 * d1 * et * e0 * si.i6;
  return {theta, clip_delta(delta)};
}

namespace {
PhaseInputs inputs_for(double t, const DriveConfig& drive) {
  const KickSeries series(drive);
  const KickCoefficients kt = series.at(t);
  const KickCoefficients k0 = series.at(0.0);
  return {t, drive.omega0, series.j0(), kt.eta, k0.eta};
}
}  // namespace

double delta_continuum(const MultiIndex& n, const MultiIndex& nt, double t, const DriveConfig& drive,
                       const SpectralDensity& sd, const ThermalParams& th) {
  return phases_continuum(n, nt, inputs_for(t, drive), spectral_integrals(sd, t, th)).delta;
}

double theta_continuum(const MultiIndex& n, const MultiIndex& nt, double t, const DriveConfig& drive,
                       const SpectralDensity& sd, const ThermalParams& th) {
  return phases_continuum(n, nt, inputs_for(t, drive), spectral_integrals(sd, t, th)).theta;
}

PhasePair phases_discrete(const DisplacementData& dn, const DisplacementData& dnt, const DiscreteBath& bath,
                          const ThermalParams& th) {
  double delta = 0.0;
  for (std::size_t k = 0; k < bath.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    delta += 0.5 * std::norm(dn.Lambda(i) - dnt.Lambda(i)) * th.coth_half(bath[k].omega);
  }
  const double theta =
      dnt.Omega - dn.Omega + dn.chi.imag() - dnt.chi.imag() + dot_conj(dn.Lambda, dnt.Lambda).imag();
  return {theta, clip_delta(delta)};
}

double displacement_expectation(const CVec& mu, const DiscreteBath& bath, const ThermalParams& th) {
  if (static_cast<std::size_t>(mu.size()) != bath.size())
    throw DomainError("displacement_expectation: one amplitude per mode required");
  double s = 0.0;
  for (std::size_t k = 0; k < bath.size(); ++k)
    s += 0.5 * std::norm(mu(static_cast<Eigen::Index>(k))) * th.coth_half(bath[k].omega);
  return std::exp(-s);
}

ReducedDynamics::ReducedDynamics(const DriveConfig& drive, SpectralDensity sd, const ThermalParams& th,
                                 Options opts)
    : drive_(drive),
      sd_(std::move(sd)),
      th_(th),
      opts_(opts),
      series_((drive.validate(), drive), opts.series_tol),
      gen_(FirstOrderGenerators::spin_boson(drive, opts.series_tol)) {
  if (opts_.zeroth_order) gen_ = gen_.without_kick();
}

PhaseInputs ReducedDynamics::inputs(double t) const {
  if (opts_.zeroth_order) return {t, drive_.omega0, series_.j0(), 0.0, 0.0};
  return {t, drive_.omega0, series_.j0(), series_.at(t).eta, series_.at(0.0).eta};
}

QubitState ReducedDynamics::rho_s(double t, const QubitState& rho0) const {
  return rho_s(spectral_integrals(sd_, t, th_, opts_.integrals), rho0);
}

namespace {
/// (I + n A/a)/2 for A = f sigma_z - h sigma_y with a = |(f, h)|; sigma_z projectors when a vanishes.
CMat label_projector(int n, double f, double h) {
  const double a = std::hypot(f, h);
  const CMat id = pauli::identity();
  if (a <= kDegeneracyTol) return 0.5 * (id + n * CMat(pauli::z()));
  return 0.5 * (id + (n / a) * CMat(f * pauli::z() - h * pauli::y()));
}
}  // namespace

QubitState ReducedDynamics::rho_s(const SpectralIntegrals& si, const QubitState& rho0) const {
  rho0.validate();
  if (!(si.t >= 0.0)) throw DomainError("rho_s: t must be >= 0");
  const PhaseInputs in = inputs(si.t);
  KickCoefficients kt{}, k0{};
  if (!opts_.zeroth_order) {
    kt = series_.at(si.t);
    k0 = series_.at(0.0);
  }

  std::vector<CMat> chains;
  std::vector<MultiIndex> labels;
  for (int n1 : {-1, 1})
    for (int n2 : {-1, 1})
      for (int n3 : {-1, 1}) {
        chains.push_back(label_projector(n1, kt.f, kt.h) * label_projector(n2, 1.0, 0.0) *
                         label_projector(n3, k0.f, k0.h));
        labels.push_back({n1, n2, n3});
      }
  CMat out = CMat::Zero(2, 2);
  for (std::size_t a = 0; a < chains.size(); ++a) {
    const CMat left = chains[a] * rho0.rho;
    for (std::size_t b = 0; b < chains.size(); ++b) {
      const PhasePair p = phases_continuum(labels[a], labels[b], in, si);
      out += std::polar(std::exp(-p.delta), p.theta) * left * chains[b].adjoint();
    }
  }
  return {out};
}

CMat rho_s_discrete(double t, const CMat& rho0, const DriveConfig& drive, const DiscreteBath& bath,
                    const ThermalParams& th, const FirstOrderGenerators& gen) {
  if (rho0.rows() != gen.dim() || rho0.cols() != gen.dim())
    throw DomainError("rho_s_discrete: state dimension does not match the generators");
  const KickSpectra spectra = gen.spectra(t);
  const std::vector<MultiIndex> idx = spectra.indices();
  std::vector<CMat> chains;
  std::vector<DisplacementData> data;
  for (const MultiIndex& n : idx) {
    chains.push_back(spectra.chain(n));
    data.push_back(displacement_data(n, t, drive, bath, spectra));
  }
  CMat out = CMat::Zero(rho0.rows(), rho0.cols());
  for (std::size_t a = 0; a < idx.size(); ++a) {
    const CMat left = chains[a] * rho0;
    for (std::size_t b = 0; b < idx.size(); ++b) {
      const PhasePair p = phases_discrete(data[a], data[b], bath, th);
      out += std::polar(std::exp(-p.delta), p.theta) * left * chains[b].adjoint();
    }
  }
  return out;
}

QubitState lab_frame(const QubitState& rho_rot, const DriveConfig& drive, double t) {
  const CMat u = rotating_frame(pauli::x(), drive, t);
  return {u * rho_rot.rho * u.adjoint()};
}

double expectation(const QubitState& rho, const CMat& op) { return (rho.rho * op).trace().real(); }

Series upper_envelope(const Series& series, double period) {
  if (!(period > 0.0)) throw DomainError("upper_envelope: period must be > 0");
  if (series.size() < 3) throw ResolutionError("upper_envelope: need at least 3 samples");
  for (std::size_t i = 1; i < series.size(); ++i)
    if (!(series[i].first > series[i - 1].first)) throw DomainError("upper_envelope: times must increase");

  const double t0 = series.front().first;
  const double span = series.back().first - t0;
  const double density = (static_cast<double>(series.size()) - 1.0) * period / span;
  if (density < 20.0) {
    std::ostringstream os;
    os << "upper_envelope: " << density << " samples per period, need >= 20";
    throw ResolutionError(os.str(), density);
  }

  const auto n_windows = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(span / period + 1e-9)));
  Series peaks;
  std::size_t i = 0;
  for (std::size_t w = 0; w < n_windows; ++w) {
    const double end = (w + 1 == n_windows) ? series.back().first : t0 + (w + 1) * period;
    std::size_t best = i;
    for (; i < series.size() && series[i].first <= end; ++i)
      if (series[i].second > series[best].second) best = i;
    double tp = series[best].first;
    double vp = series[best].second;
    if (best > 0 && best + 1 < series.size()) {
      // Parabola through the peak sample and its neighbours.
      const double xa = series[best - 1].first - tp, ya = series[best - 1].second;
      const double xb = series[best + 1].first - tp, yb = series[best + 1].second;
      const double sa = (ya - vp) / xa, sb = (yb - vp) / xb;
      const double c2 = (sb - sa) / (xb - xa);
      if (c2 < 0.0) {
        const double c1 = sa - c2 * xa;
        const double x = -c1 / (2.0 * c2);
        if (x > xa && x < xb) {
          tp += x;
          vp += c1 * x + c2 * x * x;
        }
      }
    }
    peaks.emplace_back(tp, vp);
  }

  Series out;
  out.reserve(series.size());
  std::size_t p = 0;
  for (const auto& [t, v] : series) {
    (void)v;
    double value;
    if (t <= peaks.front().first) {
      value = peaks.front().second;
    } else if (t >= peaks.back().first) {
      value = peaks.back().second;
    } else {
      while (peaks[p + 1].first < t) ++p;
      const double s = (t - peaks[p].first) / (peaks[p + 1].first - peaks[p].first);
      value = (1.0 - s) * peaks[p].second + s * peaks[p + 1].second;
    }
    out.emplace_back(t, value);
  }
  return out;
}

double envelope_variation(const Series& envelope) {
  if (envelope.empty()) throw DomainError("envelope_variation: empty envelope");
  double lo = envelope.front().second, hi = lo;
  for (const auto& [t, v] : envelope) {
    (void)t;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > 0.0)) throw DomainError("envelope_variation: envelope maximum must be positive");
  return (hi - lo) / hi;
}

}  // namespace floquet_sb
