#pragma once

#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qsegf {

struct SpinOrbitalHamiltonian;

using complex = std::complex<double>;

enum class Pauli : std::uint8_t { I, X, Y, Z };

/// Tensor product of single-qubit Pauli matrices on `n_qubits` qubits,
/// stored in symplectic form: qubit q carries X^x_q Z^z_q up to the phase
/// that makes x = z = 1 equal to Y.
///
/// Text form lists the highest qubit first, so "XXXY" has Y on qubit 0.
class PauliString {
 public:
  static constexpr std::size_t kMaxQubits = 64;

  PauliString() = default;
  explicit PauliString(std::size_t n_qubits);
  static PauliString from_string(std::string_view letters);

  std::size_t n_qubits() const { return n_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }

  Pauli get(std::size_t qubit) const;
  PauliString& set(std::size_t qubit, Pauli p);

  bool is_identity() const { return x_ == 0 && z_ == 0; }
  std::size_t weight() const;
  bool commutes_with(const PauliString& other) const;

  std::string to_string() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  /// Lexicographic on the letter sequence (highest qubit first), I < X < Y < Z.
  friend std::strong_ordering operator<=>(const PauliString& a, const PauliString& b);

 private:
  std::size_t n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

/// a * b = phase * s, phase in {1, i, -1, -i}.
std::pair<complex, PauliString> multiply(const PauliString& a, const PauliString& b);

struct PauliTerm {
  complex coeff;
  PauliString string;
};

/// Complex-weighted sum of Pauli strings in canonical form: no duplicate
/// strings, no coefficient with magnitude below kPruneThreshold, terms sorted
/// by string.
class PauliSum {
 public:
  static constexpr double kPruneThreshold = 1e-14;

  PauliSum() = default;
  explicit PauliSum(std::size_t n_qubits) : n_(n_qubits) {}
  PauliSum(std::size_t n_qubits, std::vector<PauliTerm> terms);

  static PauliSum identity(std::size_t n_qubits, complex coeff = 1.0);
  static PauliSum single(const PauliString& s, complex coeff = 1.0);

  std::size_t n_qubits() const { return n_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Coefficient of `s`, zero when absent.
  complex coefficient(const PauliString& s) const;
  PauliSum adjoint() const;
  /// Largest |imaginary part| over all coefficients.
  double max_imag() const;
  /// Sum of |coeff| over non-identity strings; bounds the spectral radius of
  /// the traceless part.
  double one_norm_traceless() const;

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(complex scale);

  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(complex s, PauliSum a) { return a *= s; }
  friend PauliSum operator*(const PauliSum& a, const PauliSum& b);

  /// Renders terms as "(-0.5i)·XZY + (0.25)·IIZ".
  std::string to_string() const;

 private:
  void canonicalize();

  std::size_t n_ = 0;
  std::vector<PauliTerm> terms_;
};

/// Distributive product, re-canonicalized.
PauliSum sum_multiply(const PauliSum& a, const PauliSum& b);

/// Jordan-Wigner images with qubit 0 least significant:
/// c+_p = 1/2 (X_p - i Y_p) Z_{p-1} ... Z_0.
PauliSum jw_creation(std::size_t p, std::size_t n_so);
PauliSum jw_annihilation(std::size_t p, std::size_t n_so);
/// N = sum_p c+_p c_p.
PauliSum jw_number_operator(std::size_t n_so);

PauliSum map_hamiltonian(const SpinOrbitalHamiltonian& soh);

/// o = a + i b with a = (o + o^+)/2 and b = (o - o^+)/(2i), both Hermitian.
std::pair<PauliSum, PauliSum> hermitian_split(const PauliSum& o);

PauliSum commutator(const PauliSum& a, const PauliSum& b);

}  // namespace qsegf
