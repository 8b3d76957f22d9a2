#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qsegf/ansatz.hpp"
#include "qsegf/greens.hpp"
#include "qsegf/integrals.hpp"
#include "qsegf/oracle.hpp"
#include "qsegf/qse.hpp"
#include "qsegf/vqe.hpp"

namespace qsegf {

enum class RunMode { Statevector, Shots };

RunMode parse_run_mode(const std::string& text);
std::string to_string(RunMode mode);

struct RunConfig {
  std::string fcidump_path;
  std::optional<std::string> rotation_path;
  double beta = 100.0;
  std::size_t n_max = 1000;
  AnsatzMode ansatz = AnsatzMode::Auto;
  VqeOptions vqe;
  RunMode mode = RunMode::Statevector;
  std::size_t shots = 8190;  // per measured Pauli string; a multiple of bins
  std::size_t bins = 10;
  std::uint64_t seed = 0;
  /// Overlap threshold; unset means 1e-8 (statevector) or 1e-2 (shots).
  std::optional<double> threshold;
  /// Compare against exact diagonalization (up to 12 qubits).
  bool oracle = true;
  std::string output_dir;

  double resolved_threshold() const;
  /// Throws InputError on inconsistent settings.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& c);

struct GfResult {
  MolecularIntegrals integrals;  // in the measurement basis
  PauliSum hamiltonian;
  QccCircuit circuit;
  VqeResult vqe;
  QseSolution qse;  // from the noiseless matrices, or the bin average in shot mode
  GreensFunction g;
  GreensFunction g0;
  GreensFunction sigma;
  double n_electrons = 0.0;
  std::optional<double> n_electrons_err;
  double sum_rule_residual = 0.0;
  std::size_t measured_strings = 0;
  std::optional<double> e_fci;
  std::optional<double> max_dev_vs_fci;
  std::optional<GreensFunction> g_fci;
};

/// Loads the integrals (rotated when a rotation file is given), optimizes the
/// ansatz, runs QSE and assembles G, G0 and Sigma. Writes nothing.
GfResult compute_gf(const RunConfig& config);

/// Writes vqe.json, g.csv, g0.csv, sigma.csv, summary.json and manifest.json
/// into config.output_dir (created if needed).
void write_gf_outputs(const RunConfig& config, const GfResult& result);

GfResult run_gf(const RunConfig& config);

nlohmann::json summary_json(const GfResult& result);

/// Exact Green's function and sector spectra: writes g_fci.csv and
/// spectra.json into config.output_dir.
FciResult run_fci(const RunConfig& config);

struct CompareReport {
  double max_abs = 0.0;
  double mean_abs = 0.0;
};

/// Element-wise differences a - b as CSV (n,omega,i,j,re_diff,im_diff,abs_diff)
/// when `diff_path` is non-empty. Throws InputError on a grid mismatch.
CompareReport run_compare(const std::string& path_a, const std::string& path_b, const std::string& diff_path);

/// Exact energies and G samples at fixed Matsubara indices, for regression
/// fixtures.
nlohmann::json oracle_snapshot(const std::string& fcidump_path, const MatsubaraGrid& grid,
                               const std::vector<std::size_t>& indices = {0, 10, 100});

/// Largest deviation between two snapshots (energies and G samples).
double compare_snapshots(const nlohmann::json& a, const nlohmann::json& b);

}  // namespace qsegf
