#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "floquet_sb/errors.hpp"
#include "floquet_sb/reduced_dynamics.hpp"

using namespace floquet_sb;

namespace {

CMat mat(const Mat2& m) { return CMat(m); }

// Uncoupled qubit: exp(-i w0 M(t)) exp(-i w0 J0 sigma_z t) exp(i w0 M(0)).
CMat free_first_order(const DriveConfig& d, double t) {
  const KickSeries ks(d);
  auto m = [&](double s) { return CMat(ks.f(s) * mat(pauli::z()) - ks.h(s) * mat(pauli::y())); };
  return expm_hermitian(m(t), cplx(0.0, -d.omega0)) *
         expm_hermitian(CMat(ks.j0() * mat(pauli::z())), cplx(0.0, -d.omega0 * t)) *
         expm_hermitian(m(0.0), cplx(0.0, d.omega0));
}

// Time-ordered product of midpoint exponentials of w0 U^dag sigma_z U.
CMat free_exact(const DriveConfig& d, double t, int steps) {
  CMat u = CMat::Identity(2, 2);
  const double h = t / steps;
  for (int i = 0; i < steps; ++i) {
    const double s = (i + 0.5) * h;
    const CMat r = expm_hermitian(mat(pauli::x()), cplx(0.0, -d.amplitude / d.omegaL * std::sin(d.omegaL * s)));
    u = expm_hermitian(CMat(d.omega0 * r.adjoint() * mat(pauli::z()) * r), cplx(0.0, -h)) * u;
  }
  return u;
}

int sign_of(double x) { return x > 0.0 ? 1 : -1; }

MultiIndex labels_of(const KickSpectra& sp, const MultiIndex& n) {
  return {sign_of(sp.m_t.eigenvalues[n.n1]),
          sign_of((sp.s0.projectors[n.n2] * mat(pauli::z())).trace().real()),
          sign_of(sp.m_0.eigenvalues[n.n3])};
}

}  // namespace

TEST_CASE("qubit state construction and validation") {
  CHECK(expectation(QubitState::plus_z(), mat(pauli::z())) == doctest::Approx(1.0));
  CHECK(expectation(QubitState::minus_y(), mat(pauli::y())) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(QubitState::from_bloch(1.0, 1.0, 0.0), DomainError);
  QubitState bad;
  bad.rho << 1.2, 0.0, 0.0, -0.2;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  QubitState nonunit;
  nonunit.rho = CMat::Identity(2, 2);
  CHECK_THROWS_AS(nonunit.validate(), DomainError);
}

TEST_CASE("phases reject labels other than +-1") {
  const SpectralIntegrals si{};
  const PhaseInputs in{};
  CHECK_THROWS_AS(phases_continuum({0, 1, 1}, {1, 1, 1}, in, si), DomainError);
}

TEST_CASE("uncoupled limit equals the first-order kick propagator") {
  const auto d = DriveConfig::from_ratio(1.0, 1.7, 10.0);
  const ReducedDynamics dyn(d, SpectralDensity::ohmic(0.0, 0.9), ThermalParams::at_beta(1.0));
  const QubitState rho0 = QubitState::from_bloch(0.3, -0.4, 0.5);
  for (double t : {0.0, 0.31, 1.7, 6.0}) {
    const CMat u = free_first_order(d, t);
    const CMat expected = u * rho0.rho * u.adjoint();
    CHECK((dyn.rho_s(t, rho0).rho - expected).norm() < 1e-12);
  }
}

TEST_CASE("uncoupled first-order error shrinks with drive frequency") {
  const QubitState rho0 = QubitState::plus_z();
  auto err = [&](double wl) {
    const auto d = DriveConfig::from_ratio(1.0, 1.7, wl);
    const double t = 4.0;
    const CMat ue = free_exact(d, t, 40000);
    const ReducedDynamics dyn(d, SpectralDensity::ohmic(0.0, 0.9), ThermalParams::at_beta(1.0));
    return (dyn.rho_s(t, rho0).rho - ue * rho0.rho * ue.adjoint()).norm();
  };
  const double e20 = err(20.0), e40 = err(40.0);
  CHECK(e20 < 1e-2);
  CHECK(e20 / e40 > 3.0);
}

TEST_CASE("zeroth order keeps sigma_z for an initial +z state") {
  const auto d = DriveConfig::from_ratio(1.0, 2.404826, 10.0);
  ReducedDynamics::Options o;
  o.zeroth_order = true;
  const ReducedDynamics dyn(d, SpectralDensity::ohmic(0.5, 0.9), ThermalParams::at_beta(7.0), o);
  for (double t : {0.0, 1.0, 10.0, 30.0})
    CHECK(std::abs(expectation(dyn.rho_s(t, QubitState::plus_z()), mat(pauli::z())) - 1.0) < 1e-12);
}

TEST_CASE("phase pair symmetries") {
  const auto d = DriveConfig::from_ratio(1.0, 1.2, 10.0);
  const auto sd = SpectralDensity::ohmic(0.15, 0.9);
  const auto th = ThermalParams::at_beta(1.0);
  const ReducedDynamics dyn(d, sd, th);
  for (double t : {0.5, 3.0}) {
    const auto si = spectral_integrals(sd, t, th);
    const auto in = dyn.inputs(t);
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) {
        const MultiIndex n{a & 1 ? 1 : -1, a & 2 ? 1 : -1, a & 4 ? 1 : -1};
        const MultiIndex m{b & 1 ? 1 : -1, b & 2 ? 1 : -1, b & 4 ? 1 : -1};
        const auto p = phases_continuum(n, m, in, si);
        const auto q = phases_continuum(m, n, in, si);
        if (a == b) {
          CHECK(p.delta == 0.0);
          CHECK(p.theta == 0.0);
        }
        CHECK(std::abs(p.theta + q.theta) < 1e-12);
        CHECK(std::abs(p.delta - q.delta) < 1e-12);
        CHECK(p.delta >= 0.0);
      }
  }
}

TEST_CASE("continuum phases agree with discrete-bath definitions") {
  const auto d = DriveConfig::from_ratio(1.0, 3.83, 10.0);
  const auto sd = SpectralDensity::ohmic(0.15, 0.9);
  const auto th = ThermalParams::at_beta(1.0);
  const DiscreteBath bath = discretize(sd, 4000, 18.0);
  const auto gen = FirstOrderGenerators::spin_boson(d);
  const ReducedDynamics dyn(d, sd, th);
  const double t = 5.0;
  const auto si = spectral_integrals(sd, t, th);
  const auto sp = gen.spectra(t);
  const auto idx = sp.indices();
  double worst = 0.0;
  for (const auto& a : idx)
    for (const auto& b : idx) {
      const auto c = phases_continuum(labels_of(sp, a), labels_of(sp, b), dyn.inputs(t), si);
      const auto q = phases_discrete(displacement_data(a, t, d, bath, sp), displacement_data(b, t, d, bath, sp),
                                     bath, th);
      worst = std::max({worst, std::abs(c.delta - q.delta),
                        std::abs(std::remainder(c.theta - q.theta, 2.0 * std::numbers::pi))});
    }
  CHECK(worst < 1e-4);
}

TEST_CASE("continuum and dense discrete reduced dynamics agree") {
  const auto d = DriveConfig::from_ratio(1.0, 2.0, 10.0);
  const auto sd = SpectralDensity::ohmic(0.15, 0.9);
  const auto th = ThermalParams::at_beta(2.0);
  const DiscreteBath bath = discretize(sd, 4000, 18.0);
  const ReducedDynamics dyn(d, sd, th);
  const auto gen = FirstOrderGenerators::spin_boson(d);
  const QubitState rho0 = QubitState::from_bloch(0.6, 0.0, 0.8);
  for (double t : {0.7, 4.0}) {
    const CMat q = rho_s_discrete(t, rho0.rho, d, bath, th, gen);
    CHECK((dyn.rho_s(t, rho0).rho - q).norm() < 1e-4);
  }
}

TEST_CASE("numerical and closed-form generators give the same discrete dynamics") {
  const auto d = DriveConfig::from_ratio(1.0, 2.6, 12.0);
  const DiscreteBath bath({{0.6, 0.15}, {1.1, 0.2}});
  const auto th = ThermalParams::at_beta(2.0);
  const auto closed = FirstOrderGenerators::spin_boson(d);
  const auto num = FirstOrderGenerators::numerical(fourier_components(SystemOperators::spin_boson(), d), d);
  const CMat rho0 = QubitState::from_bloch(0.0, 0.6, 0.8).rho;
  for (double t : {0.4, 2.5}) {
    CHECK((rho_s_discrete(t, rho0, d, bath, th, closed) - rho_s_discrete(t, rho0, d, bath, th, num)).norm() <
          1e-11);
  }
  CHECK_THROWS_AS(rho_s_discrete(0.1, CMat::Identity(3, 3) / 3.0, d, bath, th, closed), DomainError);
}

TEST_CASE("density matrix invariants over random parameters") {
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int run = 0; run < 25; ++run) {
    const double wl = 8.0 + 12.0 * u(rng);
    const auto d = DriveConfig::from_ratio(1.0, 4.0 * u(rng), wl);
    const auto sd = SpectralDensity::ohmic(0.5 * u(rng), 0.5 + u(rng));
    const auto th = ThermalParams::at_beta(0.2 + 5.0 * u(rng));
    const double z = 2.0 * u(rng) - 1.0;
    const double phi = 2.0 * std::numbers::pi * u(rng);
    const double rr = std::sqrt(1.0 - z * z) * u(rng);
    const QubitState rho0 = QubitState::from_bloch(rr * std::cos(phi), rr * std::sin(phi), z);
    const ReducedDynamics dyn(d, sd, th);
    const QubitState r = dyn.rho_s(20.0 * u(rng), rho0);
    CHECK(hermiticity_defect(r.rho) < 1e-10);
    CHECK(std::abs(r.rho.trace() - 1.0) < 1e-10);
    CHECK(r.min_eigenvalue() >= -1e-8);
  }
}

TEST_CASE("thermal average of a displacement") {
  const DiscreteBath bath({{0.8, 0.1}});
  const auto th = ThermalParams::at_beta(1.5);
  CVec mu(1);
  mu << cplx(0.3, -0.4);
  CHECK(displacement_expectation(mu, bath, th) == doctest::Approx(std::exp(-0.125 / std::tanh(0.6))));
}

TEST_CASE("lab frame coincides with the rotating frame at full periods") {
  const auto d = DriveConfig::from_ratio(1.0, 2.0, 10.0);
  const QubitState s = QubitState::from_bloch(0.1, 0.5, -0.3);
  CHECK((lab_frame(s, d, 3.0 * d.period()).rho - s.rho).norm() < 1e-12);
  const QubitState moved = lab_frame(s, d, 0.25 * d.period());
  CHECK(std::abs(expectation(moved, mat(pauli::x())) - 0.1) < 1e-12);
}

TEST_CASE("upper envelope of a damped oscillation") {
  const double period = 0.5;
  Series s;
  for (int i = 0; i <= 4000; ++i) {
    const double t = 20.0 * i / 4000.0;
    s.push_back({t, std::exp(-t / 10.0) * std::cos(2.0 * std::numbers::pi * t / period)});
  }
  const Series env = upper_envelope(s, period);
  REQUIRE(env.size() == s.size());
  for (std::size_t i = 400; i < env.size() - 400; i += 50) CHECK(std::abs(env[i].second - std::exp(-env[i].first / 10.0)) < 2e-3);
  CHECK(envelope_variation(env) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(0.02));

  Series flat;
  for (int i = 0; i <= 2000; ++i) flat.push_back({0.01 * i, std::cos(2.0 * std::numbers::pi * 0.01 * i / period)});
  CHECK(envelope_variation(upper_envelope(flat, period)) < 1e-3);

  Series coarse;
  for (int i = 0; i <= 100; ++i) coarse.push_back({0.1 * i, 0.0});
  CHECK_THROWS_AS(upper_envelope(coarse, period), ResolutionError);
}
