#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qsegf/pauli.hpp"
#include "qsegf/simulator.hpp"

namespace qsegf {

using CMatrix = Eigen::MatrixXcd;

/// EA: electron attachment, basis c+_i|psi>.  IP: ionization, basis c_i|psi>.
enum class Sector { EA, IP };

const char* to_string(Sector s);

struct SubspaceMatrices {
  CMatrix h;  // EA: <c_i H c+_j>,  IP: <c+_i H c_j>
  CMatrix s;  // EA: <c_i c+_j>,    IP: <c+_i c_j>
};

/// The qubit operators whose expectations fill one sector's matrices,
/// stored row-major (i * n_so + j).
struct SubspaceOperators {
  Sector sector = Sector::EA;
  std::size_t n_so = 0;
  std::vector<PauliSum> h_ops;
  std::vector<PauliSum> s_ops;
};

SubspaceOperators subspace_operators(const PauliSum& h, Sector sector);

SubspaceMatrices evaluate(const SubspaceOperators& ops, const Statevector& psi);

/// Exact (statevector) matrices for one sector.
SubspaceMatrices build_subspace_matrices(const Statevector& psi, const PauliSum& h, Sector sector);

struct GeneralizedEigen {
  Eigen::VectorXd energies;             // ascending, length r
  CMatrix coeffs;                       // n_so x r, V^+ S V = I_r
  Eigen::VectorXd overlap_eigenvalues;  // all eigenvalues of S, ascending
  std::size_t negative_overlaps = 0;    // eigenvalues of S below -1e-10
};

/// Solves H V = S V E by canonical orthogonalization: overlap eigenpairs
/// below `threshold` are dropped. Inputs are Hermitian-symmetrized first.
/// Throws NumericalError when no overlap eigenvalue survives.
GeneralizedEigen solve_generalized(const CMatrix& h_sub, const CMatrix& s_sub, double threshold);

/// X(mu, j) = sum_i conj(V(i, mu)) S(i, j), i.e. X = V^+ S.
CMatrix transition_amplitudes(const CMatrix& coeffs, const CMatrix& s_sub);

struct SubspaceResult {
  Sector sector = Sector::EA;
  CMatrix h_sub;
  CMatrix s_sub;
  Eigen::VectorXd energies;
  CMatrix coeffs;
  CMatrix amplitudes;  // r x n_so
  std::size_t negative_overlaps = 0;
};

SubspaceResult solve_subspace(Sector sector, const SubspaceMatrices& m, double threshold);

/// One bin's estimate of both sectors' matrices.
struct SubspaceSample {
  SubspaceMatrices ea;
  SubspaceMatrices ip;
};

/// Element-wise average of samples.
SubspaceSample average(const std::vector<SubspaceSample>& samples);

struct ShotOptions {
  std::size_t shots = 8190;  // per Pauli string
  std::size_t bins = 10;
  std::uint64_t seed = 0;
};

struct SampledSubspace {
  std::vector<SubspaceSample> bins;
  std::vector<PauliString> measured_strings;
};

/// Shot-noise estimate of both sectors' matrices. Every operator is split
/// into Hermitian parts A + iB; each distinct non-identity Pauli string is
/// sampled once with `shots` shots and shared by all matrix elements. String
/// k uses the random stream keyed by (seed, k) in sorted string order.
SampledSubspace sample_subspace_matrices(const Statevector& psi, const PauliSum& h, const ShotOptions& opts);

}  // namespace qsegf
