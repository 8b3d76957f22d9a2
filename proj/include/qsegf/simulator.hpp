#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qsegf/pauli.hpp"

namespace qsegf {

/// Dense register of 2^n amplitudes. Basis index bit q is the occupation of
/// qubit q (qubit 0 least significant).
class Statevector {
 public:
  static constexpr std::size_t kMaxQubits = 24;

  Statevector() = default;
  /// |0...0>
  explicit Statevector(std::size_t n_qubits);

  std::size_t n_qubits() const { return n_; }
  std::size_t dimension() const { return amps_.size(); }

  std::span<const complex> amplitudes() const { return amps_; }
  std::span<complex> amplitudes() { return amps_; }
  complex operator[](std::size_t index) const { return amps_[index]; }
  complex& operator[](std::size_t index) { return amps_[index]; }

  double norm() const;
  complex inner(const Statevector& other) const;  // <this|other>

 private:
  std::size_t n_ = 0;
  std::vector<complex> amps_;
};

Statevector prepare_basis_state(std::uint64_t occupation, std::size_t n_qubits);

/// s <- P s
void apply_pauli(Statevector& s, const PauliString& p);

/// s <- exp(-i theta/2 P) s = cos(theta/2) s - i sin(theta/2) P s
void apply_pauli_rotation(Statevector& s, const PauliString& p, double theta);

/// s <- exp(phi (c+_p c_q - c+_q c_p)) s. One-particle picture: c+_p maps to
/// cos(phi) c+_p - sin(phi) c+_q and c+_q to sin(phi) c+_p + cos(phi) c+_q.
void apply_givens(Statevector& s, std::size_t p, std::size_t q, double phi);

/// One Givens factor of an orbital rotation.
struct GivensRotation {
  std::size_t p;
  std::size_t q;
  double phi;
};

/// Factorization u = R(g_0) R(g_1) ... R(g_{k-1}) diag(signs), where R(g) is
/// the one-body matrix of apply_givens and every rotation acts on adjacent
/// orbitals of one spin block (u must be spin-block-diagonal with blocks of
/// size `block`).
struct GivensDecomposition {
  std::vector<GivensRotation> rotations;
  std::vector<double> signs;
};
GivensDecomposition givens_decomposition(const Eigen::MatrixXd& u, std::size_t block);

/// Applies the Fock-space image U of the orthogonal spin-orbital matrix u,
/// defined by U c+_p U^+ = sum_r u(r, p) c+_r. u must be spin-block-diagonal.
void apply_orbital_rotation(Statevector& s, const Eigen::MatrixXd& u);

complex expectation(const Statevector& s, const PauliString& p);
complex expectation(const Statevector& s, const PauliSum& o);

/// Keys the counter-based random stream of one (term, bin) cell.
struct SampleKey {
  std::uint64_t seed = 0;
  std::uint64_t term = 0;
};

/// Shot-noise estimate of <P>. `bin_means` holds the mean of each of the M
/// equally sized bins of shots.
struct ShotEstimate {
  PauliString term;
  double mean = 0.0;
  std::size_t shots = 0;
  std::vector<double> bin_means;
};

/// Draws `shots` i.i.d. +-1 outcomes of P (split into `bins` equal bins).
/// Bin b draws from an engine seeded by hash(seed, term, b), so results do
/// not depend on evaluation order.
ShotEstimate sample_expectation(const Statevector& s, const PauliString& p, std::size_t shots, std::size_t bins,
                                SampleKey key);

}  // namespace qsegf
