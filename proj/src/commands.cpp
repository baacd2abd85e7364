#include "floquet_sb/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "floquet_sb/errors.hpp"
#include "floquet_sb/kernels.hpp"
#include "floquet_sb/reduced_dynamics.hpp"
#include "floquet_sb/stroboscopic.hpp"

namespace floquet_sb {

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw DomainError("CSV column '" + name + "' not found");
  return static_cast<std::size_t>(it - header.begin());
}

std::string format_csv(const CsvTable& table, const RunConfig& config) {
  std::ostringstream os;
  os << "# floquet-sb " << FLOQUET_SB_VERSION << ' ' << config.command() << ' ' << config.hash_hex() << '\n';
  for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
  os << '\n';
  char buf[64];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (row[i]) {
        std::snprintf(buf, sizeof buf, "%.15g", *row[i]);
        os << buf;
      }
    }
    os << '\n';
  }
  return os.str();
}

void write_csv(const std::string& path, const CsvTable& table, const RunConfig& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file '" + path + "'");
  out << format_csv(table, config);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

namespace {

DriveConfig drive_from(const RunConfig& c, double ratio, double omegaL) {
  const double omega0 = c.get_double("omega0");
  if (!(omega0 > 0.0)) throw ConfigError("config key 'omega0' must be > 0");
  if (!(omegaL > 0.0)) throw ConfigError("config key 'omegaL' must be > 0");
  if (!(ratio >= 0.0)) throw ConfigError("config key 'amplitude_ratio' must be >= 0");
  const DriveConfig d = DriveConfig::from_ratio(omega0, ratio, omegaL);
  d.validate();
  return d;
}

DriveConfig drive_from(const RunConfig& c) {
  return drive_from(c, c.get_double("amplitude_ratio"), c.get_double("omegaL"));
}

SpectralDensity density_from(const RunConfig& c) {
  const double lambda = c.get_double("lambda");
  const double wc = c.get_double("omega_c");
  if (!(lambda >= 0.0)) throw ConfigError("config key 'lambda' must be >= 0");
  if (!(wc > 0.0)) throw ConfigError("config key 'omega_c' must be > 0");
  return SpectralDensity::ohmic(lambda, wc);
}

ThermalParams thermal_from(const RunConfig& c) {
  if (c.get_bool("zero_temperature")) return ThermalParams::zero_temperature();
  const double beta = c.get_double("beta");
  if (!(beta > 0.0)) throw ConfigError("config key 'beta' must be > 0");
  return ThermalParams::at_beta(beta);
}

SpectralIntegralOptions integral_options(const RunConfig& c) {
  SpectralIntegralOptions o;
  o.tol = c.get_double("integral_tol");
  if (!(o.tol > 0.0)) throw ConfigError("config key 'integral_tol' must be > 0");
  const double wmax = c.get_double("omega_max");
  if (wmax > 0.0) o.omega_max = wmax;
  return o;
}

ReducedDynamics::Options dynamics_options(const RunConfig& c) {
  ReducedDynamics::Options o;
  o.series_tol = c.get_double("series_tol");
  if (!(o.series_tol > 0.0)) throw ConfigError("config key 'series_tol' must be > 0");
  o.zeroth_order = c.get_bool("zeroth_order");
  o.integrals = integral_options(c);
  return o;
}

QubitState initial_state(const RunConfig& c) {
  const std::string tag = c.get_string("initial_state");
  if (tag == "plus_z") return QubitState::plus_z();
  if (tag == "minus_y") return QubitState::minus_y();
  if (tag == "custom") {
    try {
      return QubitState::from_bloch(c.get_double("bloch_x"), c.get_double("bloch_y"), c.get_double("bloch_z"));
    } catch (const DomainError& e) {
      throw ConfigError(std::string("config keys 'bloch_x', 'bloch_y', 'bloch_z': ") + e.what());
    }
  }
  throw ConfigError("config key 'initial_state' must be plus_z, minus_y or custom");
}

std::vector<double> time_grid(const RunConfig& c) {
  const double t_min = c.get_double("t_min");
  const double t_max = c.get_double("t_max");
  const int n = c.get_int("n_points");
  if (!(t_min >= 0.0)) throw ConfigError("config key 't_min' must be >= 0");
  if (!(t_max > t_min)) throw ConfigError("config key 't_max' must exceed t_min");
  if (n < 2) throw ConfigError("config key 'n_points' must be >= 2");
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = t_min + (t_max - t_min) * i / (n - 1);
  return t;
}

Frame frame_from(const RunConfig& c) {
  const std::string f = c.get_string("frame");
  if (f == "lab") return Frame::lab;
  if (f == "rotating") return Frame::rotating;
  throw ConfigError("config key 'frame' must be lab or rotating");
}

DiscreteBath discrete_bath_from(const RunConfig& c, const SpectralDensity& sd) {
  const int n = c.get_int("n_modes");
  if (n < 1) throw ConfigError("config key 'n_modes' must be >= 1");
  double wmax = c.get_double("omega_max");
  if (wmax < 0.0) throw ConfigError("config key 'omega_max' must be >= 0");
  if (wmax == 0.0) wmax = 4.0 * c.get_double("omega_c");
  return discretize(sd, n, wmax);
}

FockSpace fock_from(const RunConfig& c, const DiscreteBath& bath, const ThermalParams& th) {
  const int fixed = c.get_int("fock_cutoff");
  if (fixed < 0) throw ConfigError("config key 'fock_cutoff' must be >= 0 (0 selects automatically)");
  FockSpace fock(choose_cutoffs(bath, th, fixed));
  if (fock.dim() > c.get_int("max_dim")) {
    std::ostringstream os;
    os << "truncated space dimension " << fock.dim() << " exceeds config key 'max_dim' (" << c.get_int("max_dim")
       << ")";
    throw ConfigError(os.str());
  }
  return fock;
}

std::vector<double> sz_series(const std::vector<QubitState>& states, const std::vector<double>& times,
                              const DriveConfig& drive, bool lab) {
  std::vector<double> out(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const QubitState s = lab ? lab_frame(states[i], drive, times[i]) : states[i];
    out[i] = expectation(s, pauli::z());
  }
  return out;
}

std::string number_label(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::vector<int> choose_cutoffs(const DiscreteBath& bath, const ThermalParams& th, int fixed_cutoff) {
  std::vector<int> out;
  for (std::size_t k = 0; k < bath.size(); ++k) {
    if (fixed_cutoff > 0) {
      out.push_back(fixed_cutoff);
      continue;
    }
    int c = 6;
    if (!th.is_zero_temperature()) {
      const double q = std::exp(-th.beta() * bath[k].omega);
      while ((1.0 - q) * std::pow(q, c) >= 1e-6 && c < 400) ++c;
    }
    out.push_back(c);
  }
  return out;
}

CsvTable cmd_fig1b(const RunConfig& c) {
  const std::vector<double> ratios = c.get_list("ratios");
  const std::vector<double> times = time_grid(c);
  const SpectralDensity sd = density_from(c);
  const ThermalParams th = thermal_from(c);
  const QubitState rho0 = initial_state(c);
  const ReducedDynamics::Options opts = dynamics_options(c);
  const bool lab = frame_from(c) == Frame::lab;
  const auto grid = kernels::parallel::spectral_integrals_grid(sd, times, th, opts.integrals);

  CsvTable t;
  t.header = {"time"};
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < ratios.size(); ++j) {
    t.header.push_back((lab ? "sz_lab_ratio" : "sz_rot_ratio") + std::to_string(j + 1));
    const DriveConfig drive = drive_from(c, ratios[j], c.get_double("omegaL"));
    const ReducedDynamics dyn(drive, sd, th, opts);
    cols.push_back(sz_series(kernels::parallel::rho_s_grid(dyn, grid, rho0), times, drive, lab));
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<std::optional<double>> row{times[i]};
    for (const auto& col : cols) row.push_back(col[i]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable cmd_fig1c(const RunConfig& c) {
  const double rmin = c.get_double("ratio_min");
  const double rmax = c.get_double("ratio_max");
  const int nr = c.get_int("n_ratios");
  if (nr < 1) throw ConfigError("config key 'n_ratios' must be >= 1");
  if (rmin < 0.0 || rmax < rmin) throw ConfigError("config keys 'ratio_min', 'ratio_max' must satisfy 0 <= min <= max");
  const std::vector<double> times = time_grid(c);
  const SpectralDensity sd = density_from(c);
  const ThermalParams th = thermal_from(c);
  const QubitState rho0 = initial_state(c);
  const ReducedDynamics::Options opts = dynamics_options(c);
  const bool lab = frame_from(c) == Frame::lab;
  const double omegaL = c.get_double("omegaL");
  const auto grid = kernels::parallel::spectral_integrals_grid(sd, times, th, opts.integrals);

  std::vector<double> ratios(static_cast<std::size_t>(nr));
  for (int j = 0; j < nr; ++j) ratios[static_cast<std::size_t>(j)] = nr == 1 ? rmin : rmin + (rmax - rmin) * j / (nr - 1);
  std::vector<Series> envelopes(ratios.size());
  kernels::parallel::for_each_index(ratios.size(), [&](std::size_t j) {
    const DriveConfig drive = drive_from(c, ratios[j], omegaL);
    const ReducedDynamics dyn(drive, sd, th, opts);
    const std::vector<double> sz = sz_series(kernels::serial::rho_s_grid(dyn, grid, rho0), times, drive, lab);
    Series s;
    for (std::size_t i = 0; i < times.size(); ++i) s.emplace_back(times[i], sz[i]);
    envelopes[j] = upper_envelope(s, drive.period());
  });
  CsvTable t;
  t.header = {"ratio", "time", "envelope"};
  for (std::size_t j = 0; j < ratios.size(); ++j)
    for (const auto& [time, v] : envelopes[j]) t.rows.push_back({ratios[j], time, v});
  return t;
}

CsvTable cmd_fig1d(const RunConfig& c) {
  const std::vector<double> omegaLs = c.get_list("omegaLs");
  const std::vector<double> times = time_grid(c);
  const SpectralDensity sd = density_from(c);
  const ThermalParams th = thermal_from(c);
  const QubitState rho0 = initial_state(c);
  const bool lab = frame_from(c) == Frame::lab;
  const auto base = dynamics_options(c);
  const auto grid = kernels::parallel::spectral_integrals_grid(sd, times, th, base.integrals);

  CsvTable t;
  t.header = {"time"};
  std::vector<std::vector<double>> cols;
  for (double wl : omegaLs) {
    t.header.push_back(std::string(lab ? "sz_lab_" : "sz_rot_") + number_label(wl));
    ReducedDynamics::Options opts = base;
    double omegaL = wl;
    if (std::isinf(wl)) {
      opts.zeroth_order = true;
      omegaL = c.get_double("omegaL");
    }
    const DriveConfig drive = drive_from(c, c.get_double("amplitude_ratio"), omegaL);
    const ReducedDynamics dyn(drive, sd, th, opts);
    cols.push_back(sz_series(kernels::parallel::rho_s_grid(dyn, grid, rho0), times, drive, lab && !std::isinf(wl)));
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<std::optional<double>> row{times[i]};
    for (const auto& col : cols) row.push_back(col[i]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Fig2Output cmd_fig2(const RunConfig& c) {
  const DriveConfig drive = drive_from(c);
  const SpectralDensity sd = density_from(c);
  const ThermalParams th = thermal_from(c);
  const QubitState rho0 = initial_state(c);
  const ReducedDynamics::Options opts = dynamics_options(c);
  const double t0 = c.get_double("t0");
  if (t0 < 0.0) throw ConfigError("config key 't0' must be >= 0");
  const double period = drive.period();
  const double t_max = c.get_double("t_max");
  const std::vector<double> fractions = c.get_list("tau_fractions");
  for (double f : fractions)
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("config key 'tau_fractions' entries must lie in [0, 1]");
  const int n_tau = c.get_int("n_tau");
  if (n_tau < 2) throw ConfigError("config key 'n_tau' must be >= 2");

  const DiscreteBath bath = discrete_bath_from(c, sd);
  const FockSpace fock = fock_from(c, bath, th);

  // Curve grid plus every dot abscissa tau + nT.
  std::vector<double> times = time_grid(c);
  std::vector<std::vector<std::pair<double, int>>> dots(fractions.size());
  for (std::size_t j = 0; j < fractions.size(); ++j) {
    const double tau = t0 + fractions[j] * period;
    for (int n = 0; tau + n * period <= t_max + 1e-12; ++n) {
      dots[j].emplace_back(tau + n * period, n);
      times.push_back(tau + n * period);
    }
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              times.end());

  // Driven curves: discrete-bath closed form and continuum closed form.
  const FirstOrderGenerators gen = FirstOrderGenerators::spin_boson(drive, opts.series_tol);
  std::vector<QubitState> discrete(times.size());
  kernels::parallel::for_each_index(times.size(), [&](std::size_t i) {
    discrete[i] = {rho_s_discrete(times[i], rho0.rho, drive, bath, th, gen)};
  });
  const ReducedDynamics dyn(drive, sd, th, opts);
  const auto grid = kernels::parallel::spectral_integrals_grid(sd, times, th, opts.integrals);
  const std::vector<QubitState> continuum = kernels::parallel::rho_s_grid(dyn, grid, rho0);

  // Stroboscopic samples under H^F_{t0}, starting from rho0 (x) rho_B at t0.
  const ThermalState bath_state = thermal_state(bath, fock, th);
  const CMat state0 = kron(rho0.rho, bath_state.rho.matrix);
  const StroboscopicEvolution evo(floquet_hamiltonian(t0, drive, bath, fock), state0, t0, period);
  evo.check_truncation({0.0, 0.5 * (t_max - t0), t_max - t0}, fock);
  const FockOperators ops = build_operators(fock, bath);
  const KickExponential kick(drive, bath, fock);
  auto series_for = [&](double tau) {
    const int n_max = static_cast<int>(std::floor((t_max - tau) / period + 1e-12));
    if (n_max < 0) return std::vector<double>{};
    return evo.samples(observable_family(ops.sz, tau, t0, kick), n_max);
  };

  Fig2Output out;
  out.curves.header = {"time", "sz_driven", "sz_driven_lab", "sz_driven_continuum"};
  std::vector<std::vector<double>> strob(fractions.size());
  for (std::size_t j = 0; j < fractions.size(); ++j) {
    out.curves.header.push_back("strob_tau_" + std::to_string(j));
    strob[j] = series_for(t0 + fractions[j] * period);
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    std::vector<std::optional<double>> row{t, expectation(discrete[i], pauli::z()),
                                           expectation(lab_frame(discrete[i], drive, t), pauli::z()),
                                           expectation(continuum[i], pauli::z())};
    for (std::size_t j = 0; j < fractions.size(); ++j) {
      std::optional<double> cell;
      for (const auto& [td, n] : dots[j])
        if (std::abs(td - t) < 1e-12) cell = strob[j][static_cast<std::size_t>(n)];
      row.push_back(cell);
    }
    out.curves.rows.push_back(std::move(row));
  }

  out.grid.header = {"tau", "time", "value"};
  for (int k = 0; k < n_tau; ++k) {
    const double tau = t0 + period * k / (n_tau - 1);
    const std::vector<double> s = series_for(tau);
    for (std::size_t n = 0; n < s.size(); ++n) out.grid.rows.push_back({tau, tau + n * period, s[n]});
  }
  return out;
}

CsvTable cmd_simulate(const RunConfig& c) {
  const DriveConfig drive = drive_from(c);
  const SpectralDensity sd = density_from(c);
  const ThermalParams th = thermal_from(c);
  const QubitState rho0 = initial_state(c);
  const ReducedDynamics::Options opts = dynamics_options(c);
  const bool lab = frame_from(c) == Frame::lab;
  const std::vector<double> times = time_grid(c);
  const std::string bath_kind = c.get_string("bath");
  if (bath_kind != "continuum" && bath_kind != "discrete")
    throw ConfigError("config key 'bath' must be continuum or discrete");
  const bool oracle = c.get_bool("oracle");
  if (oracle && bath_kind != "discrete") throw ConfigError("config key 'oracle' requires bath = discrete");

  std::vector<std::string> columns = c.get_string_list("columns");
  std::vector<CMat> paulis;
  for (const std::string& col : columns) {
    if (col == "sx") paulis.push_back(pauli::x());
    else if (col == "sy") paulis.push_back(pauli::y());
    else if (col == "sz") paulis.push_back(pauli::z());
    else throw ConfigError("config key 'columns': unknown column '" + col + "' (use sx, sy, sz)");
  }

  std::vector<QubitState> states(times.size());
  if (bath_kind == "continuum") {
    const ReducedDynamics dyn(drive, sd, th, opts);
    states = kernels::parallel::rho_s_grid(dyn, kernels::parallel::spectral_integrals_grid(sd, times, th, opts.integrals),
                                           rho0);
  } else {
    const DiscreteBath bath = discrete_bath_from(c, sd);
    FirstOrderGenerators gen = FirstOrderGenerators::spin_boson(drive, opts.series_tol);
    if (opts.zeroth_order) gen = gen.without_kick();
    kernels::parallel::for_each_index(times.size(), [&](std::size_t i) {
      states[i] = {rho_s_discrete(times[i], rho0.rho, drive, bath, th, gen)};
    });
  }

  CsvTable t;
  t.header = {"time"};
  for (const std::string& col : columns) t.header.push_back(col);
  std::vector<std::vector<std::optional<double>>> rows;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const QubitState s = lab ? lab_frame(states[i], drive, times[i]) : states[i];
    std::vector<std::optional<double>> row{times[i]};
    for (const CMat& p : paulis) row.push_back(expectation(s, p));
    rows.push_back(std::move(row));
  }

  if (oracle) {
    const DiscreteBath bath = discrete_bath_from(c, sd);
    const FockSpace fock = fock_from(c, bath, th);
    const ThermalState bath_state = thermal_state(bath, fock, th);
    const FockOperators ops = build_operators(fock, bath);
    const SparseHamiltonian ham(Frame::rotating, drive, bath, fock);
    PropagationOptions popts;
    popts.steps_per_period = c.get_int("steps_per_period");
    const KickExponential kick(drive, bath, fock);
    const double t0 = c.get_double("t0");
    const double period = drive.period();
    for (const std::string& col : columns) t.header.push_back(col + "_oracle");
    for (int k = 0; k < fock.n_modes(); ++k) t.header.push_back("n" + std::to_string(k + 1) + "_oracle");
    t.header.push_back("polaron_oracle");
    t.header.push_back("boundary_weight");
    propagate_factor(product_factor(rho0.rho, bath_state), times, ham, popts,
                     [&](std::size_t i, double time, const CMat& w) {
                       QubitState s = partial_trace_factor(w, fock);
                       if (lab) s = lab_frame(s, drive, time);
                       for (const CMat& p : paulis) rows[i].push_back(expectation(s, p));
                       const RVec weight = w.rowwise().squaredNorm();
                       for (int k = 0; k < fock.n_modes(); ++k) {
                         double occ = 0.0;
                         for (Eigen::Index r = 0; r < weight.size(); ++r)
                           occ += weight(r) * fock.occupation(r % fock.bath_dim(), k);
                         rows[i].push_back(occ);
                       }
                       if (time >= t0) {
                         const double tau = t0 + std::fmod(time - t0, period);
                         const CMat o = observable_family(ops.sz, tau, t0, kick).transformed;
                         rows[i].push_back((w.adjoint() * o * w).trace().real());
                       } else {
                         rows[i].push_back(std::nullopt);
                       }
                       rows[i].push_back(boundary_weight(CMat(weight.cast<cplx>().asDiagonal()), fock));
                     });
  }
  t.rows = std::move(rows);
  return t;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Driven spin-boson dynamics: first-order Floquet closed forms and a truncated-Fock oracle"};
  std::string command, config_path, out_path;
  app.add_option("command", command, "fig1b | fig1c | fig1d | fig2 | simulate")->required();
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--out", out_path, "output CSV path")->required();
  app.allow_extras();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    RunConfig config = RunConfig::defaults_for(command);
    if (!config_path.empty()) config.load_file(config_path);
    const std::vector<std::string> extras = app.remaining();
    for (std::size_t i = 0; i < extras.size(); ++i) {
      std::string key = extras[i];
      if (key.rfind("--", 0) != 0) throw ConfigError("unexpected argument '" + key + "'");
      key.erase(0, 2);
      std::string value;
      const auto eq = key.find('=');
      if (eq != std::string::npos) {
        value = key.substr(eq + 1);
        key.erase(eq);
      } else {
        if (i + 1 >= extras.size()) throw ConfigError("override --" + key + " needs a value");
        value = extras[++i];
      }
      config.set(key, value);
    }
    omp_set_num_threads(kernels::thread_limit());

    if (command == "fig1b") {
      write_csv(out_path, cmd_fig1b(config), config);
    } else if (command == "fig1c") {
      write_csv(out_path, cmd_fig1c(config), config);
    } else if (command == "fig1d") {
      write_csv(out_path, cmd_fig1d(config), config);
    } else if (command == "fig2") {
      const Fig2Output out = cmd_fig2(config);
      write_csv(out_path, out.curves, config);
      const std::filesystem::path p(out_path);
      const std::filesystem::path tau_path = p.parent_path() / (p.stem().string() + "_tau.csv");
      write_csv(tau_path.string(), out.grid, config);
    } else {
      write_csv(out_path, cmd_simulate(config), config);
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const TruncationError& e) {
    std::cerr << "truncation error: " << e.what() << '\n';
    return 4;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace floquet_sb
