#include "qsegf/app.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "qsegf/error.hpp"
#include "qsegf/stats.hpp"

namespace qsegf {
namespace {

using nlohmann::json;

struct Problem {
  MolecularIntegrals mo;
  MolecularIntegrals measured;  // mo, or rotated into the rotation file's basis
  std::optional<Eigen::MatrixXd> rotation;
  PauliSum hamiltonian;
};

Problem load_problem(const RunConfig& c) {
  Problem p;
  p.mo = read_fcidump(c.fcidump_path);
  p.measured = p.mo;
  if (c.rotation_path) {
    p.rotation = read_orbital_rotation(*c.rotation_path, p.mo.n_spatial);
    p.measured = rotate_orbitals(p.mo, *p.rotation);
  }
  p.hamiltonian = map_hamiltonian(to_spin_orbitals(p.measured));
  return p;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("cli: cannot write '{}'", path.string()));
  out << j.dump(2) << '\n';
}

std::filesystem::path prepare_output_dir(const std::string& dir) {
  if (dir.empty()) throw InputError("cli: no output directory given");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError(fmt::format("cli: cannot create output directory '{}': {}", dir, ec.message()));
  return dir;
}

double sum_rule_residual(const PoleExpansion& poles) {
  const auto n = static_cast<Eigen::Index>(poles.n_so);
  return (poles.residue_sum() - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

json matrix_json(const CMatrix& m, bool imag) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(imag ? m(i, j).imag() : m(i, j).real());
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

RunMode parse_run_mode(const std::string& text) {
  if (text == "statevector") return RunMode::Statevector;
  if (text == "shots") return RunMode::Shots;
  throw InputError(fmt::format("cli: unknown mode '{}' (expected statevector or shots)", text));
}

std::string to_string(RunMode mode) { return mode == RunMode::Shots ? "shots" : "statevector"; }

double RunConfig::resolved_threshold() const {
  if (threshold) return *threshold;
  return mode == RunMode::Shots ? 1e-2 : 1e-8;
}

void RunConfig::validate() const {
  if (fcidump_path.empty()) throw InputError("cli: an FCIDUMP path is required");
  matsubara_grid(beta, n_max);
  if (!(resolved_threshold() > 0.0)) throw InputError("cli: the overlap threshold must be positive");
  if (mode == RunMode::Shots) {
    if (bins < 2) throw InputError("cli: shots mode needs at least 2 bins");
    if (shots == 0 || shots % bins != 0) {
      throw InputError(fmt::format("cli: shots ({}) must be a positive multiple of bins ({})", shots, bins));
    }
  }
}

json to_json(const RunConfig& c) {
  return json{{"fcidump", c.fcidump_path},
              {"rotation", c.rotation_path ? json(*c.rotation_path) : json(nullptr)},
              {"beta", c.beta},
              {"n_max", c.n_max},
              {"ansatz", to_string(c.ansatz)},
              {"gtol", c.vqe.gtol},
              {"max_iter", c.vqe.max_iter},
              {"mode", to_string(c.mode)},
              {"shots", c.shots},
              {"bins", c.bins},
              {"seed", c.seed},
              {"threshold", c.resolved_threshold()},
              {"oracle", c.oracle},
              {"output_dir", c.output_dir}};
}

GfResult compute_gf(const RunConfig& config) {
  config.validate();
  const MatsubaraGrid grid = matsubara_grid(config.beta, config.n_max);
  const double eps = config.resolved_threshold();
  Problem p = load_problem(config);

  GfResult r;
  r.integrals = p.measured;
  r.hamiltonian = p.hamiltonian;
  r.circuit = make_qcc_circuit(p.mo, config.ansatz, p.rotation);
  spdlog::info("vqe: {} generators on {} qubits", r.circuit.generators.size(), r.circuit.n_so);
  r.vqe = minimize(r.hamiltonian, r.circuit, config.vqe);
  spdlog::info("vqe: E = {:.12f} after {} iterations", r.vqe.energy, r.vqe.iterations);

  const Statevector psi = prepare_state(r.circuit, r.vqe.theta);
  const double e0 = r.vqe.energy;
  // G0: the same pipeline at theta = 0, i.e. on the (possibly rotated) HF determinant.
  const std::vector<double> zeros(r.circuit.generators.size(), 0.0);
  r.g0 = evaluate_on_grid(qse_from_state(prepare_state(r.circuit, zeros), r.hamiltonian, 1e-8).poles, grid);

  if (config.mode == RunMode::Statevector) {
    r.qse = solve_qse(e0, build_subspace_matrices(psi, r.hamiltonian, Sector::EA),
                      build_subspace_matrices(psi, r.hamiltonian, Sector::IP), eps);
    r.g = evaluate_on_grid(r.qse.poles, grid);
    r.sigma = self_energy(r.g0, r.g);
    r.n_electrons = electron_count(r.qse.ip.s_sub);
  } else {
    const SampledSubspace sampled =
        sample_subspace_matrices(psi, r.hamiltonian, {config.shots, config.bins, config.seed});
    r.measured_strings = sampled.measured_strings.size();
    spdlog::info("qse: sampled {} Pauli strings x {} shots", r.measured_strings, config.shots);
    std::size_t negative = 0;
    auto pipeline = [&](const SubspaceSample& s) {
      QseSolution q = solve_qse(e0, s.ea, s.ip, eps);
      negative += q.ea.negative_overlaps + q.ip.negative_overlaps;
      return evaluate_on_grid(q.poles, grid);
    };
    r.qse = solve_qse(e0, average(sampled.bins).ea, average(sampled.bins).ip, eps);
    r.g = propagate(sampled.bins, pipeline);
    r.sigma = propagate(sampled.bins, [&](const SubspaceSample& s) { return self_energy(r.g0, pipeline(s)); });
    if (negative) spdlog::warn("qse: discarded {} negative sampled overlap eigenvalues", negative);

    std::vector<double> traces;
    for (const auto& b : sampled.bins) traces.push_back(electron_count(b.ip.s));
    const auto jk = jackknife(traces);
    r.n_electrons = jk.mean;
    r.n_electrons_err = jk.std;
  }
  r.sum_rule_residual = sum_rule_residual(r.qse.poles);

  if (config.oracle && r.circuit.n_so <= 12) {
    const FciResult fci = fci_solve(r.hamiltonian, p.mo.n_electrons);
    r.e_fci = fci.e0;
    r.g_fci = evaluate_on_grid(fci.poles, grid);
    r.max_dev_vs_fci = max_abs_difference(r.g, *r.g_fci);
  }
  return r;
}

json summary_json(const GfResult& r) {
  json j{{"e_vqe", r.vqe.energy},
         {"e_fci", r.e_fci ? json(*r.e_fci) : json(nullptr)},
         {"n_electrons", r.n_electrons},
         {"n_electrons_err", r.n_electrons_err ? json(*r.n_electrons_err) : json(nullptr)},
         {"sum_rule_residual", r.sum_rule_residual},
         {"max_dev_vs_fci", r.max_dev_vs_fci ? json(*r.max_dev_vs_fci) : json(nullptr)},
         {"vqe_converged", r.vqe.converged},
         {"qse_ea_retained", r.qse.ea.energies.size()},
         {"qse_ip_retained", r.qse.ip.energies.size()}};
  if (r.measured_strings) j["measured_strings"] = r.measured_strings;
  return j;
}

void write_gf_outputs(const RunConfig& config, const GfResult& r) {
  const auto dir = prepare_output_dir(config.output_dir);
  std::vector<std::string> generators;
  for (const auto& g : r.circuit.generators) generators.push_back(g.to_string());
  write_json(dir / "vqe.json", json{{"theta", r.vqe.theta},
                                    {"energy", r.vqe.energy},
                                    {"iterations", r.vqe.iterations},
                                    {"converged", r.vqe.converged},
                                    {"gradient_norm", r.vqe.gradient_norm},
                                    {"generators", generators},
                                    {"energy_trace", r.vqe.energy_trace}});
  write_csv((dir / "g.csv").string(), r.g);
  write_csv((dir / "g0.csv").string(), r.g0);
  write_csv((dir / "sigma.csv").string(), r.sigma);
  write_json(dir / "summary.json", summary_json(r));
  write_json(dir / "manifest.json", json{{"command", "gf"}, {"config", to_json(config)}});
}

GfResult run_gf(const RunConfig& config) {
  GfResult r = compute_gf(config);
  write_gf_outputs(config, r);
  return r;
}

FciResult run_fci(const RunConfig& config) {
  config.validate();
  const MatsubaraGrid grid = matsubara_grid(config.beta, config.n_max);
  const Problem p = load_problem(config);
  FciResult fci = fci_solve(p.hamiltonian, p.mo.n_electrons);
  const auto dir = prepare_output_dir(config.output_dir);
  write_csv((dir / "g_fci.csv").string(), evaluate_on_grid(fci.poles, grid));
  write_json(dir / "spectra.json", json{{"e0", fci.e0},
                                        {"n_electrons", p.mo.n_electrons},
                                        {"minus", to_vector(fci.minus.energies)},
                                        {"ground", to_vector(fci.ground.energies)},
                                        {"plus", to_vector(fci.plus.energies)}});
  write_json(dir / "manifest.json", json{{"command", "fci"}, {"config", to_json(config)}});
  return fci;
}

CompareReport run_compare(const std::string& path_a, const std::string& path_b, const std::string& diff_path) {
  const GreensFunction a = read_csv(path_a);
  const GreensFunction b = read_csv(path_b);
  max_abs_difference(a, b);  // grid check

  CompareReport report;
  std::ofstream out;
  if (!diff_path.empty()) {
    out.open(diff_path);
    if (!out) throw InputError(fmt::format("cli: cannot write '{}'", diff_path));
    out << "n,omega,i,j,re_diff,im_diff,abs_diff\n";
  }
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t n = 0; n < a.values.size(); ++n) {
    for (Eigen::Index i = 0; i < a.values[n].rows(); ++i) {
      for (Eigen::Index j = 0; j < a.values[n].cols(); ++j) {
        const complex d = a.values[n](i, j) - b.values[n](i, j);
        report.max_abs = std::max(report.max_abs, std::abs(d));
        total += std::abs(d);
        ++count;
        if (out.is_open()) {
          out << fmt::format("{},{},{},{},{},{},{}\n", n, a.grid.omega(n), i, j, d.real(), d.imag(), std::abs(d));
        }
      }
    }
  }
  report.mean_abs = count ? total / static_cast<double>(count) : 0.0;
  return report;
}

json oracle_snapshot(const std::string& fcidump_path, const MatsubaraGrid& grid, const std::vector<std::size_t>& indices) {
  const MolecularIntegrals mi = read_fcidump(fcidump_path);
  const PauliSum h = map_hamiltonian(to_spin_orbitals(mi));
  const FciResult fci = fci_solve(h, mi.n_electrons);
  json samples = json::array();
  for (std::size_t n : indices) {
    if (n >= grid.n_max) throw InputError(fmt::format("cli: snapshot index {} lies outside the grid", n));
    const CMatrix g = fci.poles.evaluate({0.0, grid.omega(n)});
    samples.push_back(json{{"n", n}, {"omega", grid.omega(n)}, {"re", matrix_json(g, false)}, {"im", matrix_json(g, true)}});
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> full(dense_matrix(h), Eigen::EigenvaluesOnly);
  return json{{"fcidump", std::filesystem::path(fcidump_path).filename().string()},
              {"beta", grid.beta},
              {"n_max", grid.n_max},
              {"n_electrons", mi.n_electrons},
              {"e0", fci.e0},
              {"spectrum", to_vector(full.eigenvalues())},
              {"minus", to_vector(fci.minus.energies)},
              {"ground", to_vector(fci.ground.energies)},
              {"plus", to_vector(fci.plus.energies)},
              {"samples", samples}};
}

double compare_snapshots(const json& a, const json& b) {
  try {
    double worst = std::abs(a.at("e0").get<double>() - b.at("e0").get<double>());
    for (const char* key : {"spectrum", "minus", "ground", "plus"}) {
      const auto ea = a.at(key).get<std::vector<double>>();
      const auto eb = b.at(key).get<std::vector<double>>();
      if (ea.size() != eb.size()) throw InputError(fmt::format("cli: snapshot sector '{}' sizes differ", key));
      for (std::size_t k = 0; k < ea.size(); ++k) worst = std::max(worst, std::abs(ea[k] - eb[k]));
    }
    const auto& sa = a.at("samples");
    const auto& sb = b.at("samples");
    if (sa.size() != sb.size()) throw InputError("cli: snapshots hold different sample counts");
    for (std::size_t k = 0; k < sa.size(); ++k) {
      if (sa[k].at("n") != sb[k].at("n")) throw InputError("cli: snapshot sample indices differ");
      for (const char* part : {"re", "im"}) {
        const auto ma = sa[k].at(part).get<std::vector<std::vector<double>>>();
        const auto mb = sb[k].at(part).get<std::vector<std::vector<double>>>();
        if (ma.size() != mb.size()) throw InputError("cli: snapshot matrix shapes differ");
        for (std::size_t i = 0; i < ma.size(); ++i) {
          if (ma[i].size() != mb[i].size()) throw InputError("cli: snapshot matrix shapes differ");
          for (std::size_t j = 0; j < ma[i].size(); ++j) worst = std::max(worst, std::abs(ma[i][j] - mb[i][j]));
        }
      }
    }
    return worst;
  } catch (const json::exception& e) {
    throw InputError(fmt::format("cli: malformed oracle snapshot: {}", e.what()));
  }
}

}  // namespace qsegf
