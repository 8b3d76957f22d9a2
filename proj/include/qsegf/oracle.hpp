#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qsegf/greens.hpp"
#include "qsegf/pauli.hpp"

namespace qsegf {

/// Dense 2^n x 2^n matrix of a Pauli sum, qubit 0 least significant.
/// Limited to n <= 12.
CMatrix dense_matrix(const PauliSum& o);

/// Eigenpairs of a Hamiltonian restricted to one particle-number sector.
struct SectorSpectrum {
  std::size_t particle_number = 0;
  std::vector<std::uint64_t> basis;  // occupation bitstrings, ascending
  Eigen::VectorXd energies;          // ascending
  CMatrix states;                    // column k: eigenvector over `basis`

  /// Column k embedded in the full 2^n space.
  Eigen::VectorXcd full_state(Eigen::Index k, std::size_t n_qubits) const;
};

/// Throws InputError if `h` couples different particle numbers by more than
/// 1e-10, or if the sector is empty.
SectorSpectrum sector_spectrum(const CMatrix& h, std::size_t particle_number);

/// c+_p |v> and c_p |v> on a dense vector, with the Jordan-Wigner sign
/// (-1)^(occupied qubits below p).
Eigen::VectorXcd apply_creation(const Eigen::VectorXcd& v, std::size_t p);
Eigen::VectorXcd apply_annihilation(const Eigen::VectorXcd& v, std::size_t p);

/// Exact ground state and N +- 1 spectra with their Lehmann poles.
struct FciResult {
  SectorSpectrum minus;   // N - 1
  SectorSpectrum ground;  // N
  SectorSpectrum plus;    // N + 1
  double e0 = 0.0;
  Eigen::VectorXcd psi0;  // full 2^n vector
  CMatrix x_plus;         // (mu, j) = <Phi+_mu| c+_j |Psi0>
  CMatrix x_minus;        // (mu, j) = <Phi-_mu| c_j |Psi0>
  PoleExpansion poles;
};

/// Throws InputError when N - 1 < 0 or N + 1 > n_so. A degenerate N-sector
/// ground state is reported with a warning and the lowest eigenvector is
/// used.
FciResult fci_solve(const PauliSum& h, std::size_t n_electrons);

GreensFunction fci_greens(const PauliSum& h, std::size_t n_electrons, const MatsubaraGrid& grid);

}  // namespace qsegf
