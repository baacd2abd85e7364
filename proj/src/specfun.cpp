#include "floquet_sb/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "floquet_sb/errors.hpp"
#include "floquet_sb/log.hpp"
#include "floquet_sb/quadrature.hpp"

namespace floquet_sb {

void DriveConfig::validate() const {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw DomainError("omega0 must be positive and finite");
  if (!(omegaL > 0.0) || !std::isfinite(omegaL)) throw DomainError("omegaL must be positive and finite");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw DomainError("drive amplitude must be >= 0");
  if (omegaL <= 2.0 * omega0) {
    std::ostringstream os;
    os << "omegaL = " << omegaL << " <= 2 omega0: the first-order high-frequency expansion is unreliable";
    log::warn(os.str());
  }
}

std::vector<double> bessel_j_sequence(int m_max, double x) {
  if (m_max < 0 || m_max > kMaxBesselOrder) throw DomainError("bessel_j: order out of range");
  if (!std::isfinite(x) || std::abs(x) > kMaxBesselArgument)
    throw DomainError("bessel_j: argument out of supported range");

  std::vector<double> out(static_cast<std::size_t>(m_max) + 1, 0.0);
  const double ax = std::abs(x);
  if (ax == 0.0) {
    out[0] = 1.0;
    return out;
  }

  const int scale = std::max(m_max, static_cast<int>(ax));
  int start = scale + 20 + static_cast<int>(std::sqrt(40.0 * scale));
  start += start % 2;  // even, so the normalization sum picks up every even order

  constexpr double kBig = 1e250;
  double j_next = 0.0;
  double j_cur = 1e-300;
  double norm = 0.0;
  for (int k = start; k > 0; --k) {
    // j_cur = J_k (unnormalized); produce J_{k-1}.
    if (k <= m_max) out[static_cast<std::size_t>(k)] = j_cur;
    if (k % 2 == 0) norm += 2.0 * j_cur;
    const double j_prev = (2.0 * k / ax) * j_cur - j_next;
    j_next = j_cur;
    j_cur = j_prev;
    if (std::abs(j_cur) > kBig) {
      j_cur /= kBig;
      j_next /= kBig;
      norm /= kBig;
      for (int i = k - 1; i <= m_max; ++i)
        if (i >= 0) out[static_cast<std::size_t>(i)] /= kBig;
    }
  }
  out[0] = j_cur;
  norm += j_cur;

  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] /= norm;
    if (x < 0.0 && i % 2 == 1) out[i] = -out[i];
  }
  return out;
}

double bessel_j(int m, double x) { return bessel_j_sequence(m, x).back(); }

KickSeries::KickSeries(const DriveConfig& drive, double tol) : drive_(drive) {
  if (!(tol > 0.0)) throw DomainError("kick series tolerance must be positive");
  const double r = drive.ratio();
  const int turning = static_cast<int>(std::ceil(r));
  // Bessel factors beyond the turning point fall off faster than (r/2)^m/m!; this is generous.
  int m_max = turning + 40 + static_cast<int>(3.0 * std::sqrt(r + 1.0));
  std::vector<double> j = bessel_j_sequence(m_max, r);
  j0_ = j[0];

  bool even_done = false;
  bool odd_done = false;
  for (int m = 1; m <= m_max && !(even_done && odd_done); ++m) {
    const double coefficient = 2.0 * j[static_cast<std::size_t>(m)] / (m * drive.omegaL);
    const bool negligible = std::abs(coefficient) < tol && m > turning;
    if (m % 2 == 0) {
      if (even_done) continue;
      if (negligible) {
        even_done = true;
        continue;
      }
      even_.push_back({m, coefficient});
    } else {
      if (odd_done) continue;
      if (negligible) {
        odd_done = true;
        continue;
      }
      odd_.push_back({m, coefficient});
    }
  }
  if (!(even_done && odd_done))
    throw NumericalError("kick series did not reach its truncation tolerance", tol);
}

double KickSeries::f(double t) const {
  double s = 0.0;
  for (const Term& term : even_) s += term.coefficient * std::sin(term.m * drive_.omegaL * t);
  return s;
}

double KickSeries::h(double t) const {
  double s = 0.0;
  for (const Term& term : odd_) s += term.coefficient * std::cos(term.m * drive_.omegaL * t);
  return s;
}

KickCoefficients KickSeries::at(double t) const {
  const double fv = f(t);
  const double hv = h(t);
  return {fv, hv, eta(fv, hv), t};
}

int KickSeries::highest_order() const {
  int m = 0;
  if (!even_.empty()) m = std::max(m, even_.back().m);
  if (!odd_.empty()) m = std::max(m, odd_.back().m);
  return m;
}

double kick_f_series(double t, const DriveConfig& drive, double tol) { return KickSeries(drive, tol).f(t); }

double kick_h_series(double t, const DriveConfig& drive, double tol) { return KickSeries(drive, tol).h(t); }

namespace {

constexpr double kPieceTol = 1e-14;
constexpr double kIntegralTol = 1e-11;

// Breakpoints from a to b (either order) at every multiple of step in between.
std::vector<double> quarter_grid(double a, double b, double step) {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  std::vector<double> pts{lo};
  const double first = std::floor(lo / step) + 1.0;
  for (double k = first; k * step < hi; k += 1.0) {
    const double p = k * step;
    if (p - pts.back() > 1e-15 * step) pts.push_back(p);
  }
  pts.push_back(hi);
  return pts;
}

// Oriented integral of a scalar integrand from a to b, split at quarter periods.
quad::Result<1> oriented(auto&& integrand, double a, double b, double quarter) {
  auto pts = quarter_grid(a, b, quarter);
  auto g = [&](double u) { return quad::Values<1>{integrand(u)}; };
  quad::Result<1> r = quad::integrate_pieces<1>(g, pts, kPieceTol * static_cast<double>(pts.size()));
  if (b < a) r.value[0] = -r.value[0];
  return r;
}

}  // namespace

KickIntegral kick_fh_integral(double t, const DriveConfig& drive) {
  const double r = drive.ratio();
  const double wl = drive.omegaL;
  const double quarter = 0.25 * drive.period();

  // Bessel's integral J0(r) = (1/pi) int_0^pi cos(r sin theta) d theta.
  auto bessel_integrand = [r](double th) { return quad::Values<1>{std::cos(r * std::sin(th))}; };
  const double pi = std::numbers::pi;
  const double edges[] = {0.0, 0.25 * pi, 0.5 * pi, 0.75 * pi, pi};
  const quad::Result<1> j0r = quad::integrate_pieces<1>(bessel_integrand, edges, 1e-15);
  const double j0 = j0r.value[0] / pi;

  const quad::Result<1> fr =
      oriented([&](double u) { return std::cos(r * std::sin(wl * u)); }, 0.0, t, quarter);
  const quad::Result<1> hr =
      oriented([&](double u) { return std::sin(r * std::sin(wl * u)); }, quarter, t, quarter);

  KickIntegral out;
  out.f = fr.value[0] - j0 * t;
  out.h = -hr.value[0];
  out.error = std::max(fr.error + std::abs(t) * j0r.error / pi, hr.error);
  if (!(out.error <= kIntegralTol) || !fr.converged || !hr.converged || !j0r.converged)
    throw NumericalError("kick_fh_integral: quadrature did not converge", out.error);
  return out;
}

double eta(double f, double h) { return std::hypot(f, h); }

double eta(double t, const DriveConfig& drive) {
  const KickSeries series(drive);
  return eta(series.f(t), series.h(t));
}

}  // namespace floquet_sb
