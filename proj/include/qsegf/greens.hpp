#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsegf/pauli.hpp"
#include "qsegf/qse.hpp"

namespace qsegf {

/// Fermionic Matsubara grid omega_n = (2n + 1) pi / beta, n = 0 .. n_max - 1.
struct MatsubaraGrid {
  double beta = 100.0;
  std::size_t n_max = 1000;

  double omega(std::size_t n) const;
  std::vector<double> frequencies() const;
  friend bool operator==(const MatsubaraGrid&, const MatsubaraGrid&) = default;
};

/// Throws InputError for beta <= 0 or n_max < 1.
MatsubaraGrid matsubara_grid(double beta, std::size_t n_max);

struct Pole {
  double position;  // real-axis location
  CMatrix residue;  // n_so x n_so, Hermitian PSD
};

/// G(z) = sum_k residue_k / (z - position_k).
struct PoleExpansion {
  std::size_t n_so = 0;
  std::vector<Pole> poles;

  CMatrix evaluate(complex z) const;
  /// Sum of all residues; the identity when the expansion is complete.
  CMatrix residue_sum() const;
};

/// Lehmann poles from sector energies and transition amplitudes:
///   EA pole at E+_mu - e0 with residue conj(X+_mu,i) X+_mu,j,
///   IP pole at e0 - E-_mu with residue X-_mu,i conj(X-_mu,j).
PoleExpansion lehmann_poles(double e0, const Eigen::VectorXd& e_plus, const CMatrix& x_plus,
                            const Eigen::VectorXd& e_minus, const CMatrix& x_minus);
PoleExpansion lehmann_poles(double e0, const SubspaceResult& ea, const SubspaceResult& ip);

/// G(i omega_n) on a grid. `re_err` / `im_err` are element-wise standard
/// deviations and stay empty in noiseless runs.
struct GreensFunction {
  MatsubaraGrid grid;
  std::vector<CMatrix> values;
  std::vector<Eigen::MatrixXd> re_err;
  std::vector<Eigen::MatrixXd> im_err;

  std::size_t n_so() const { return values.empty() ? 0 : static_cast<std::size_t>(values.front().rows()); }
  bool has_errors() const { return !re_err.empty(); }
};

/// Evaluates at z = +i omega_n, or at -i omega_n when `negative` is set.
GreensFunction evaluate_on_grid(const PoleExpansion& poles, const MatsubaraGrid& grid, bool negative = false);

GreensFunction lehmann_greens(double e0, const SubspaceResult& ea, const SubspaceResult& ip,
                              const MatsubaraGrid& grid);

/// QSE on both sectors followed by the Lehmann sum.
struct QseSolution {
  SubspaceResult ea;
  SubspaceResult ip;
  PoleExpansion poles;
};
QseSolution solve_qse(double e0, const SubspaceMatrices& ea, const SubspaceMatrices& ip, double threshold);

/// Noiseless QSE Green's function of a given state.
QseSolution qse_from_state(const Statevector& psi, const PauliSum& h, double threshold);

/// The same pipeline run on the Hartree-Fock determinant `hf_occupation`.
GreensFunction hf_reference_greens(const PauliSum& h, std::uint64_t hf_occupation, const MatsubaraGrid& grid,
                                   double threshold = 1e-8);

/// Sigma(i omega_n) = G0^-1 - G^-1 per frequency, by partial-pivot LU. Throws
/// NumericalError naming the frequency index if either matrix is singular.
GreensFunction self_energy(const GreensFunction& g0, const GreensFunction& g);

/// N = Tr S- (the IP overlap holds <c+_i c_i> on its diagonal).
double electron_count(const CMatrix& ip_overlap);

/// Cross-check of the electron count from the Matsubara sum
///   n_i = 1/2 + (2/beta) sum_n Re G_ii(i omega_n) + tail,
/// with the tail -m_i/omega^2 summed analytically and m_i fitted at the last
/// grid point. Accurate when the grid extends far beyond the pole energies.
double frequency_sum_electron_count(const GreensFunction& g);

/// Largest element-wise |a - b| over the grid. Throws InputError when the
/// grids or shapes differ.
double max_abs_difference(const GreensFunction& a, const GreensFunction& b);

/// CSV rows "n,omega,i,j,re_g,im_g,re_err,im_err" with a header line; error
/// columns are blank when the function carries no errors.
void write_csv(std::ostream& out, const GreensFunction& g);
void write_csv(const std::string& path, const GreensFunction& g);
GreensFunction read_csv(std::istream& in);
GreensFunction read_csv(const std::string& path);

}  // namespace qsegf
