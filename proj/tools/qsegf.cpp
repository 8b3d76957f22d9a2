// Command-line driver: gf, fci, compare and freeze-oracle subcommands.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "qsegf/app.hpp"
#include "qsegf/error.hpp"

namespace {

struct Raw {
  std::string ansatz = "auto";
  std::string mode = "statevector";
  double threshold = 0.0;
  bool no_oracle = false;
};

void add_run_options(CLI::App* cmd, qsegf::RunConfig& c) {
  cmd->add_option("--fcidump", c.fcidump_path, "FCIDUMP integral file")->required();
  cmd->add_option("--rotation", c.rotation_path, "orthogonal orbital rotation (rows: target orbitals)");
  cmd->add_option("--beta", c.beta, "inverse temperature")->capture_default_str();
  cmd->add_option("--n-max", c.n_max, "number of Matsubara frequencies")->capture_default_str();
  cmd->add_option("--out", c.output_dir, "output directory")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matsubara Green's functions from VQE + quantum subspace expansion"};
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error, off")->capture_default_str();

  qsegf::RunConfig gf_cfg;
  Raw raw;
  auto* gf = app.add_subcommand("gf", "VQE + QSE Green's function, G0 and self-energy");
  add_run_options(gf, gf_cfg);
  gf->add_option("--ansatz", raw.ansatz, "full, single-xxxy or auto")->capture_default_str();
  gf->add_option("--gtol", gf_cfg.vqe.gtol, "gradient-norm tolerance")->capture_default_str();
  gf->add_option("--max-iter", gf_cfg.vqe.max_iter, "optimizer iteration cap")->capture_default_str();
  gf->add_option("--mode", raw.mode, "statevector or shots")->capture_default_str();
  gf->add_option("--shots", gf_cfg.shots, "shots per measured Pauli string")->capture_default_str();
  gf->add_option("--bins", gf_cfg.bins, "jackknife bins")->capture_default_str();
  gf->add_option("--seed", gf_cfg.seed, "random seed")->capture_default_str();
  gf->add_option("--threshold", raw.threshold, "overlap threshold (default 1e-8, or 1e-2 with shots)");
  gf->add_flag("--no-oracle", raw.no_oracle, "skip the exact-diagonalization comparison");

  qsegf::RunConfig fci_cfg;
  auto* fci = app.add_subcommand("fci", "exact Green's function and sector spectra");
  add_run_options(fci, fci_cfg);

  std::string cmp_a, cmp_b, cmp_out;
  auto* compare = app.add_subcommand("compare", "element-wise difference of two Green's-function CSVs");
  compare->add_option("a", cmp_a, "first CSV")->required();
  compare->add_option("b", cmp_b, "second CSV")->required();
  compare->add_option("--out", cmp_out, "difference CSV");

  std::string frz_fcidump, frz_out;
  double frz_beta = 100.0;
  std::size_t frz_n_max = 1000;
  auto* freeze = app.add_subcommand("freeze-oracle", "write exact energies and G samples as a JSON fixture");
  freeze->add_option("--fcidump", frz_fcidump, "FCIDUMP integral file")->required();
  freeze->add_option("--out", frz_out, "output JSON")->required();
  freeze->add_option("--beta", frz_beta, "inverse temperature")->capture_default_str();
  freeze->add_option("--n-max", frz_n_max, "number of Matsubara frequencies")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    spdlog::set_default_logger(spdlog::stderr_logger_mt("qsegf"));
    spdlog::set_level(spdlog::level::from_str(log_level));

    if (*gf) {
      gf_cfg.ansatz = qsegf::parse_ansatz_mode(raw.ansatz);
      gf_cfg.mode = qsegf::parse_run_mode(raw.mode);
      if (gf->count("--threshold")) gf_cfg.threshold = raw.threshold;
      gf_cfg.oracle = !raw.no_oracle;
      const auto r = qsegf::run_gf(gf_cfg);
      std::cout << qsegf::summary_json(r).dump(2) << '\n';
    } else if (*fci) {
      const auto r = qsegf::run_fci(fci_cfg);
      std::cout << fmt::format("E0 = {:.12f}\n", r.e0);
    } else if (*compare) {
      const auto rep = qsegf::run_compare(cmp_a, cmp_b, cmp_out);
      std::cout << fmt::format("max |dG| = {:.6e}\nmean |dG| = {:.6e}\n", rep.max_abs, rep.mean_abs);
    } else if (*freeze) {
      const auto snap = qsegf::oracle_snapshot(frz_fcidump, qsegf::matsubara_grid(frz_beta, frz_n_max));
      std::ofstream out(frz_out);
      if (!out) throw qsegf::InputError(fmt::format("cli: cannot write '{}'", frz_out));
      out << snap.dump(2) << '\n';
    }
  } catch (const qsegf::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
