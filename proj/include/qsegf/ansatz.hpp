#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsegf/pauli.hpp"
#include "qsegf/simulator.hpp"

namespace qsegf {

struct MolecularIntegrals;

/// Which generators the QCC circuit keeps.
///   Full       all Ms-conserving doubles and singles
///   SingleXXXY only the first opposite-spin double (XXXY for two orbitals)
///   Auto       SingleXXXY for two spatial orbitals, Full otherwise
enum class AnsatzMode { Full, SingleXXXY, Auto };

AnsatzMode parse_ansatz_mode(const std::string& text);
std::string to_string(AnsatzMode mode);

/// Qubit coupled-cluster circuit
///   |psi(theta)> = e^K exp(-i theta_m/2 P_m) ... exp(-i theta_1/2 P_1) |HF>.
struct QccCircuit {
  std::size_t n_so = 0;
  std::uint64_t hf_occupation = 0;
  std::vector<PauliString> generators;
  /// Spin-orbital (n_so x n_so) matrix for e^K; absent means identity.
  std::optional<Eigen::MatrixXd> orbital_rotation;
};

/// Aufbau occupation in the spin-blocked layout: the lowest (N+ms2)/2 alpha
/// and (N-ms2)/2 beta spin-orbitals.
std::uint64_t hf_occupation(std::size_t n_electrons, std::size_t n_so, int ms2);

/// P_ijab = X_b X_a X_j Y_i (i < j occupied, a < b virtual) and P_ia = X_a Y_i,
/// ordered opposite-spin doubles, same-spin doubles, singles; ties broken by
/// (i, j, a, b). Only Ms-conserving excitations are generated.
std::vector<PauliString> enumerate_generators(std::uint64_t hf, std::size_t n_so);

QccCircuit make_qcc_circuit(const MolecularIntegrals& mi, AnsatzMode mode,
                            std::optional<Eigen::MatrixXd> spatial_rotation = std::nullopt);

Statevector prepare_state(const QccCircuit& c, std::span<const double> theta);

/// Reads a row-major n_spatial x n_spatial orthogonal matrix, whitespace
/// separated. Entry (r, p) is <target orbital r | source orbital p>.
Eigen::MatrixXd read_orbital_rotation(const std::string& path, std::size_t n_spatial);

/// Embeds a spatial rotation into both spin blocks.
Eigen::MatrixXd spin_block_rotation(const Eigen::MatrixXd& spatial);

}  // namespace qsegf
