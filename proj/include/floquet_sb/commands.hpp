#pragma once

#include <optional>
#include <string>
#include <vector>

#include "floquet_sb/config.hpp"
#include "floquet_sb/oracle.hpp"

namespace floquet_sb {

/// Rows of optional cells; empty cells are written blank.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;

  std::size_t column(const std::string& name) const;
};

/// First line "# floquet-sb <version> <command> <config-hash>", then the header, then %.15g cells.
std::string format_csv(const CsvTable& table, const RunConfig& config);
void write_csv(const std::string& path, const CsvTable& table, const RunConfig& config);

CsvTable cmd_fig1b(const RunConfig& config);
CsvTable cmd_fig1c(const RunConfig& config);
CsvTable cmd_fig1d(const RunConfig& config);

struct Fig2Output {
  CsvTable curves;  // time, sz_driven, sz_driven_lab, sz_driven_continuum, strob_tau_<j>
  CsvTable grid;    // tau, time, value
};
Fig2Output cmd_fig2(const RunConfig& config);

CsvTable cmd_simulate(const RunConfig& config);

/// Per-mode cutoffs whose thermal top-level occupation stays below 1e-6 (at least 6), or fock_cutoff if set.
std::vector<int> choose_cutoffs(const DiscreteBath& bath, const ThermalParams& th, int fixed_cutoff);

/// Entry point of the floquet-sb executable. Returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace floquet_sb
