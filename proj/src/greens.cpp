#include "qsegf/greens.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <boost/math/special_functions/trigamma.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "qsegf/error.hpp"

namespace qsegf {

double MatsubaraGrid::omega(std::size_t n) const {
  return (2.0 * static_cast<double>(n) + 1.0) * std::numbers::pi / beta;
}

std::vector<double> MatsubaraGrid::frequencies() const {
  std::vector<double> w(n_max);
  for (std::size_t n = 0; n < n_max; ++n) w[n] = omega(n);
  return w;
}

MatsubaraGrid matsubara_grid(double beta, std::size_t n_max) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InputError(fmt::format("greens: beta must be positive, got {}", beta));
  if (n_max < 1) throw InputError("greens: the grid needs at least one frequency (n_max >= 1)");
  return {beta, n_max};
}

CMatrix PoleExpansion::evaluate(complex z) const {
  const auto n = static_cast<Eigen::Index>(n_so);
  CMatrix g = CMatrix::Zero(n, n);
  for (const auto& p : poles) {
    const complex d = z - p.position;
    if (d == complex{}) throw NumericalError(fmt::format("greens: evaluation point coincides with a pole at {}", p.position));
    g += p.residue / d;
  }
  return g;
}

CMatrix PoleExpansion::residue_sum() const {
  const auto n = static_cast<Eigen::Index>(n_so);
  CMatrix s = CMatrix::Zero(n, n);
  for (const auto& p : poles) s += p.residue;
  return s;
}

PoleExpansion lehmann_poles(double e0, const Eigen::VectorXd& e_plus, const CMatrix& x_plus,
                            const Eigen::VectorXd& e_minus, const CMatrix& x_minus) {
  if (x_plus.rows() != e_plus.size() || x_minus.rows() != e_minus.size() || x_plus.cols() != x_minus.cols()) {
    throw InputError("greens: energies and transition amplitudes have inconsistent shapes");
  }
  PoleExpansion out;
  out.n_so = static_cast<std::size_t>(x_plus.cols());
  out.poles.reserve(static_cast<std::size_t>(e_plus.size() + e_minus.size()));
  for (Eigen::Index mu = 0; mu < e_plus.size(); ++mu) {
    const Eigen::RowVectorXcd x = x_plus.row(mu);
    out.poles.push_back({e_plus(mu) - e0, x.adjoint() * x});
  }
  for (Eigen::Index mu = 0; mu < e_minus.size(); ++mu) {
    const Eigen::RowVectorXcd x = x_minus.row(mu);
    out.poles.push_back({e0 - e_minus(mu), x.transpose() * x.conjugate()});
  }
  return out;
}

PoleExpansion lehmann_poles(double e0, const SubspaceResult& ea, const SubspaceResult& ip) {
  if (ea.sector != Sector::EA || ip.sector != Sector::IP) {
    throw InputError("greens: expected one EA and one IP subspace result");
  }
  return lehmann_poles(e0, ea.energies, ea.amplitudes, ip.energies, ip.amplitudes);
}

GreensFunction evaluate_on_grid(const PoleExpansion& poles, const MatsubaraGrid& grid, bool negative) {
  GreensFunction g;
  g.grid = grid;
  g.values.resize(grid.n_max);
  const double sign = negative ? -1.0 : 1.0;
  for (std::size_t n = 0; n < grid.n_max; ++n) g.values[n] = poles.evaluate({0.0, sign * grid.omega(n)});
  return g;
}

GreensFunction lehmann_greens(double e0, const SubspaceResult& ea, const SubspaceResult& ip,
                              const MatsubaraGrid& grid) {
  return evaluate_on_grid(lehmann_poles(e0, ea, ip), grid);
}

QseSolution solve_qse(double e0, const SubspaceMatrices& ea, const SubspaceMatrices& ip, double threshold) {
  QseSolution out;
  out.ea = solve_subspace(Sector::EA, ea, threshold);
  out.ip = solve_subspace(Sector::IP, ip, threshold);
  out.poles = lehmann_poles(e0, out.ea, out.ip);
  return out;
}

QseSolution qse_from_state(const Statevector& psi, const PauliSum& h, double threshold) {
  const double e0 = expectation(psi, h).real();
  return solve_qse(e0, build_subspace_matrices(psi, h, Sector::EA), build_subspace_matrices(psi, h, Sector::IP),
                   threshold);
}

GreensFunction hf_reference_greens(const PauliSum& h, std::uint64_t hf_occupation, const MatsubaraGrid& grid,
                                   double threshold) {
  const Statevector hf = prepare_basis_state(hf_occupation, h.n_qubits());
  return evaluate_on_grid(qse_from_state(hf, h, threshold).poles, grid);
}

GreensFunction self_energy(const GreensFunction& g0, const GreensFunction& g) {
  if (!(g0.grid == g.grid) || g0.values.size() != g.values.size() || g0.n_so() != g.n_so()) {
    throw InputError("greens: self-energy needs G and G0 on the same grid and basis");
  }
  constexpr double kSingular = 1e-14;
  GreensFunction sigma;
  sigma.grid = g.grid;
  sigma.values.resize(g.values.size());
  std::size_t ill_conditioned = 0;
  double worst = 0.0;
  for (std::size_t n = 0; n < g.values.size(); ++n) {
    CMatrix inv[2];
    for (int k = 0; k < 2; ++k) {
      const CMatrix& m = k == 0 ? g0.values[n] : g.values[n];
      Eigen::PartialPivLU<CMatrix> lu(m);
      const double rcond = lu.rcond();
      if (!(rcond > kSingular)) {
        throw NumericalError(fmt::format("greens: {} is singular at frequency index {} (rcond {:g})",
                                         k == 0 ? "G0" : "G", n, rcond));
      }
      if (1.0 / rcond > 1e10) {
        ++ill_conditioned;
        worst = std::max(worst, 1.0 / rcond);
      }
      inv[k] = lu.inverse();
    }
    sigma.values[n] = inv[0] - inv[1];
  }
  if (ill_conditioned) {
    spdlog::warn("greens: {} Dyson inversions with condition number above 1e10 (worst {:.3g})", ill_conditioned,
                 worst);
  }
  return sigma;
}

double electron_count(const CMatrix& ip_overlap) { return ip_overlap.trace().real(); }

double frequency_sum_electron_count(const GreensFunction& g) {
  if (g.values.empty()) throw InputError("greens: empty Green's function");
  const double beta = g.grid.beta;
  const std::size_t n_max = g.values.size();
  const double w_last = g.grid.omega(n_max - 1);
  // sum_{n >= n_max} 1/omega_n^2 = (beta / 2 pi)^2 psi'(n_max + 1/2)
  const double tail_sum = std::pow(beta / (2.0 * std::numbers::pi), 2) *
                          boost::math::trigamma(static_cast<double>(n_max) + 0.5);
  double total = 0.0;
  for (std::size_t i = 0; i < g.n_so(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    double sum = 0.0;
    for (const auto& m : g.values) sum += m(ii, ii).real();
    const double moment = -g.values.back()(ii, ii).real() * w_last * w_last;
    total += 0.5 + 2.0 / beta * (sum - moment * tail_sum);
  }
  return total;
}

double max_abs_difference(const GreensFunction& a, const GreensFunction& b) {
  if (a.values.size() != b.values.size() || a.n_so() != b.n_so() ||
      std::abs(a.grid.beta - b.grid.beta) > 1e-9 * std::abs(a.grid.beta)) {
    throw InputError(fmt::format("greens: grid mismatch (beta {} vs {}, {} vs {} frequencies, {} vs {} orbitals)",
                                 a.grid.beta, b.grid.beta, a.values.size(), b.values.size(), a.n_so(), b.n_so()));
  }
  double worst = 0.0;
  for (std::size_t n = 0; n < a.values.size(); ++n) worst = std::max(worst, (a.values[n] - b.values[n]).cwiseAbs().maxCoeff());
  return worst;
}

void write_csv(std::ostream& out, const GreensFunction& g) {
  out << "n,omega,i,j,re_g,im_g,re_err,im_err\n";
  const auto n_so = static_cast<Eigen::Index>(g.n_so());
  for (std::size_t n = 0; n < g.values.size(); ++n) {
    const double w = g.grid.omega(n);
    for (Eigen::Index i = 0; i < n_so; ++i) {
      for (Eigen::Index j = 0; j < n_so; ++j) {
        const complex v = g.values[n](i, j);
        if (g.has_errors()) {
          out << fmt::format("{},{},{},{},{},{},{},{}\n", n, w, i, j, v.real(), v.imag(), g.re_err[n](i, j),
                             g.im_err[n](i, j));
        } else {
          out << fmt::format("{},{},{},{},{},{},,\n", n, w, i, j, v.real(), v.imag());
        }
      }
    }
  }
}

void write_csv(const std::string& path, const GreensFunction& g) {
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("greens: cannot write '{}'", path));
  write_csv(out, g);
}

GreensFunction read_csv(std::istream& in) {
  struct Row {
    std::size_t n, i, j;
    double omega, re, im, re_err, im_err;
    bool has_err;
  };
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || line.rfind("n,omega,i,j,re_g,im_g", 0) != 0) {
    throw InputError("greens: CSV lacks the header 'n,omega,i,j,re_g,im_g,re_err,im_err'");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 8) throw InputError(fmt::format("greens: CSV row {} has {} columns, expected 8", line_no, cells.size()));
    try {
      Row r{};
      r.n = std::stoul(cells[0]);
      r.omega = std::stod(cells[1]);
      r.i = std::stoul(cells[2]);
      r.j = std::stoul(cells[3]);
      r.re = std::stod(cells[4]);
      r.im = std::stod(cells[5]);
      r.has_err = !cells[6].empty();
      if (r.has_err) {
        r.re_err = std::stod(cells[6]);
        r.im_err = std::stod(cells[7]);
      }
      rows.push_back(r);
    } catch (const std::exception&) {
      throw InputError(fmt::format("greens: unparsable CSV row {}", line_no));
    }
  }
  if (rows.empty()) throw InputError("greens: CSV has no data rows");

  std::size_t n_max = 0, n_so = 0;
  double omega0 = 0.0;
  for (const auto& r : rows) {
    n_max = std::max(n_max, r.n + 1);
    n_so = std::max({n_so, r.i + 1, r.j + 1});
    if (r.n == 0) omega0 = r.omega;
  }
  if (rows.size() != n_max * n_so * n_so || !(omega0 > 0.0)) {
    throw InputError("greens: CSV does not cover a complete grid");
  }
  GreensFunction g;
  g.grid = matsubara_grid(std::numbers::pi / omega0, n_max);
  const auto dim = static_cast<Eigen::Index>(n_so);
  g.values.assign(n_max, CMatrix::Zero(dim, dim));
  const bool errors = rows.front().has_err;
  if (errors) {
    g.re_err.assign(n_max, Eigen::MatrixXd::Zero(dim, dim));
    g.im_err.assign(n_max, Eigen::MatrixXd::Zero(dim, dim));
  }
  for (const auto& r : rows) {
    const auto i = static_cast<Eigen::Index>(r.i), j = static_cast<Eigen::Index>(r.j);
    g.values[r.n](i, j) = {r.re, r.im};
    if (errors) {
      g.re_err[r.n](i, j) = r.re_err;
      g.im_err[r.n](i, j) = r.im_err;
    }
  }
  return g;
}

GreensFunction read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("greens: cannot open CSV '{}'", path));
  return read_csv(in);
}

}  // namespace qsegf
