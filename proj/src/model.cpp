#include "floquet_sb/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "floquet_sb/errors.hpp"
#include "floquet_sb/quadrature.hpp"

namespace floquet_sb {

double ohmic_j(double omega, const OhmicSpectralDensity& sd) {
  if (!(omega >= 0.0)) throw DomainError("spectral density evaluated at negative frequency");
  return sd.lambda * omega * std::exp(-omega / sd.omega_c);
}

SpectralDensity SpectralDensity::ohmic(double lambda, double omega_c) {
  if (!(lambda >= 0.0)) throw DomainError("Ohmic coupling lambda must be >= 0");
  if (!(omega_c > 0.0)) throw DomainError("Ohmic cutoff omega_c must be > 0");
  SpectralDensity sd;
  sd.ohmic_ = OhmicSpectralDensity{lambda, omega_c};
  return sd;
}

SpectralDensity SpectralDensity::tabulated(std::vector<double> omega, std::vector<double> values) {
  if (omega.size() < 2 || omega.size() != values.size())
    throw DomainError("tabulated spectral density needs >= 2 matching points");
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!(omega[i] >= 0.0) || (i > 0 && !(omega[i] > omega[i - 1])))
      throw DomainError("tabulated spectral density frequencies must be increasing and >= 0");
    if (!(values[i] >= 0.0)) throw DomainError("tabulated spectral density must be >= 0");
  }
  SpectralDensity sd;
  sd.table_omega_ = std::move(omega);
  sd.table_j_ = std::move(values);
  return sd;
}

double SpectralDensity::operator()(double omega) const {
  if (ohmic_) return ohmic_j(omega, *ohmic_);
  if (!(omega >= 0.0)) throw DomainError("spectral density evaluated at negative frequency");
  if (omega < table_omega_.front() || omega > table_omega_.back()) return 0.0;
  auto it = std::upper_bound(table_omega_.begin(), table_omega_.end(), omega);
  if (it == table_omega_.end()) return table_j_.back();
  const std::size_t i = static_cast<std::size_t>(it - table_omega_.begin());
  const double w = (omega - table_omega_[i - 1]) / (table_omega_[i] - table_omega_[i - 1]);
  return (1.0 - w) * table_j_[i - 1] + w * table_j_[i];
}

double SpectralDensity::default_cutoff() const {
  if (ohmic_) return 40.0 * ohmic_->omega_c;
  return table_omega_.back();
}

double SpectralDensity::tail_mass(double omega_max) const {
  if (ohmic_) {
    const double wc = ohmic_->omega_c;
    return ohmic_->lambda * wc * (omega_max + wc) * std::exp(-omega_max / wc);
  }
  if (omega_max >= table_omega_.back()) return 0.0;
  // Trapezoid over the remaining table (exact for the piecewise-linear interpolant).
  double mass = 0.0;
  double prev_w = omega_max;
  double prev_j = (*this)(omega_max);
  for (std::size_t i = 0; i < table_omega_.size(); ++i) {
    if (table_omega_[i] <= omega_max) continue;
    mass += 0.5 * (prev_j + table_j_[i]) * (table_omega_[i] - prev_w);
    prev_w = table_omega_[i];
    prev_j = table_j_[i];
  }
  return mass;
}

DiscreteBath::DiscreteBath(std::vector<BathMode> modes) : modes_(std::move(modes)) {
  if (modes_.empty()) throw DomainError("a discrete bath needs at least one mode");
  std::set<double> seen;
  for (const BathMode& m : modes_) {
    if (!(m.omega > 0.0) || !std::isfinite(m.omega)) throw DomainError("bath mode frequencies must be > 0");
    if (!std::isfinite(m.g)) throw DomainError("bath couplings must be finite");
    if (!seen.insert(m.omega).second) throw DomainError("bath mode frequencies must be distinct");
  }
}

DiscreteBath discretize(const SpectralDensity& sd, int n_modes, double omega_max) {
  if (n_modes < 1) throw DomainError("discretize: need at least one mode");
  if (!(omega_max > 0.0)) throw DomainError("discretize: omega_max must be > 0");
  const double dw = omega_max / n_modes;
  std::vector<BathMode> modes;
  modes.reserve(static_cast<std::size_t>(n_modes));
  for (int k = 1; k <= n_modes; ++k) {
    const double w = (k - 0.5) * dw;
    modes.push_back({w, std::sqrt(sd(w) * dw)});
  }
  return DiscreteBath(std::move(modes));
}

ThermalParams ThermalParams::at_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive and finite");
  return ThermalParams(beta, false);
}

ThermalParams ThermalParams::zero_temperature() { return ThermalParams(INFINITY, true); }

namespace detail {
double coth_half_direct(double x) { return 1.0 + 2.0 / std::expm1(x); }
double coth_half_small(double x) { return 2.0 / x + x / 6.0; }
}  // namespace detail

double ThermalParams::coth_half(double omega) const {
  if (zero_) return 1.0;
  const double x = beta_ * omega;
  if (x < detail::kCothSwitch) return detail::coth_half_small(x);
  return detail::coth_half_direct(x);
}

double ThermalParams::occupation(double omega) const {
  if (zero_) return 0.0;
  return 1.0 / std::expm1(beta_ * omega);
}

namespace {

// 2 sin^2(x/2) = 1 - cos x without cancellation.
inline double one_minus_cos(double x) {
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s;
}

// Integrands divided by J(w): returns the six kernels at frequency w.
inline quad::Values<6> kernels(double w, double t, double coth) {
  const double omc = one_minus_cos(w * t);
  const double c = std::cos(w * t);
  const double s = std::sin(w * t);
  return {omc / (w * w) * coth, coth, c * coth, s / w * coth, omc / w, s};
}

}  // namespace

SpectralIntegrals spectral_integrals(const SpectralDensity& sd, double t, const ThermalParams& th,
                                     const SpectralIntegralOptions& opts) {
  if (!(t >= 0.0)) throw DomainError("spectral_integrals: t must be >= 0");
  if (!(opts.tol > 0.0)) throw DomainError("spectral_integrals: tol must be > 0");
  const double wmax = opts.omega_max.value_or(sd.default_cutoff());
  if (!(wmax > 0.0)) throw DomainError("spectral_integrals: omega_max must be > 0");

  // One panel per oscillation of cos(wt), plus a finer split near w = 0 where J coth varies fastest.
  std::vector<double> pts{0.0};
  const int n_osc = t > 0.0 ? static_cast<int>(std::ceil(wmax * t / (2.0 * std::numbers::pi))) : 1;
  const int n_panels = std::clamp(n_osc, 4, 20000);
  for (int i = 1; i <= n_panels; ++i) pts.push_back(wmax * i / n_panels);

  auto integrand = [&](double w) {
    const double j = sd(w);
    quad::Values<6> k = kernels(w, t, th.coth_half(w));
    for (double& v : k) v *= j;
    return k;
  };
  const quad::Result<6> r = quad::integrate_pieces<6>(integrand, pts, opts.tol);
  if (!r.converged) throw NumericalError("spectral_integrals: quadrature did not converge", r.error);

  SpectralIntegrals out;
  out.t = t;
  out.i1 = r.value[0];
  out.i2 = r.value[1];
  out.i3 = r.value[2];
  out.i4 = r.value[3];
  out.i5 = r.value[4];
  out.i6 = r.value[5];
  out.error = r.error;
  const double tail = sd.tail_mass(wmax);
  const double coth = th.coth_half(wmax);
  out.tail_bound = tail * std::max({coth, 2.0 * coth / (wmax * wmax), coth / wmax, 2.0 / wmax, 1.0});
  return out;
}

SpectralIntegrals spectral_integrals(const DiscreteBath& bath, double t, const ThermalParams& th) {
  SpectralIntegrals out;
  out.t = t;
  for (const BathMode& m : bath.modes()) {
    const double g2 = m.g * m.g;
    const quad::Values<6> k = kernels(m.omega, t, th.coth_half(m.omega));
    out.i1 += g2 * k[0];
    out.i2 += g2 * k[1];
    out.i3 += g2 * k[2];
    out.i4 += g2 * k[3];
    out.i5 += g2 * k[4];
    out.i6 += g2 * k[5];
  }
  return out;
}

}  // namespace floquet_sb
