#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qsegf {

/// Dense rank-4 tensor of doubles with equal extents, row-major.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(std::size_t n) : n_(n), data_(n * n * n * n, 0.0) {}

  std::size_t extent() const { return n_; }

  double& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return data_[((i * n_ + j) * n_ + k) * n_ + l];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return data_[((i * n_ + j) * n_ + k) * n_ + l];
  }

  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const Tensor4&, const Tensor4&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Spatial-orbital integrals as stored in an FCIDUMP. `v` is in chemist
/// notation, v(i,j,k,l) = (ij|kl). Energies in Hartree.
struct MolecularIntegrals {
  std::size_t n_spatial = 0;
  std::size_t n_electrons = 0;
  int ms2 = 0;
  double e_core = 0.0;
  Eigen::MatrixXd h;
  Tensor4 v;
};

/// Spin-orbital form of the second-quantized Hamiltonian
///   H = sum_pq h_pq c+_p c_q + 1/2 sum_pqrs v_pqrs c+_p c+_q c_s c_r + e_core.
///
/// Spin-blocked ordering: p = i is orbital i with spin alpha, p = n_spatial + i
/// is orbital i with spin beta. `v` is in physicist notation.
struct SpinOrbitalHamiltonian {
  std::size_t n_so = 0;
  Eigen::MatrixXd h;
  Tensor4 v;
  double e_core = 0.0;
};

/// Parses FCIDUMP text. Throws InputError on a malformed header, an index
/// outside [1, NORB] or duplicate entries that disagree by more than 1e-12.
MolecularIntegrals parse_fcidump(std::istream& in);
MolecularIntegrals read_fcidump(const std::string& path);

/// Writes every symmetry-unique nonzero integral with round-trip precision.
void write_fcidump(std::ostream& out, const MolecularIntegrals& mi);

/// Checks the symmetry and electron-count invariants; throws InputError.
void validate(const MolecularIntegrals& mi);

SpinOrbitalHamiltonian to_spin_orbitals(const MolecularIntegrals& mi);

/// Re-expresses the integrals in a rotated orbital basis. `u(r, p)` is the
/// overlap <new_r|old_p>, so h' = u h u^T and (ij|kl)' transforms on every
/// index the same way. `u` must be orthogonal.
MolecularIntegrals rotate_orbitals(const MolecularIntegrals& mi, const Eigen::MatrixXd& u);

}  // namespace qsegf
