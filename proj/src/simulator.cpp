#include "qsegf/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "qsegf/error.hpp"

namespace qsegf {
namespace {

constexpr complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

void require_match(const Statevector& s, std::size_t n, const char* what) {
  if (s.n_qubits() != n) {
    throw InputError(fmt::format("simulator: {} acts on {} qubits, state has {}", what, n, s.n_qubits()));
  }
}

// Phase of P|b> = phase(b) |b ^ x>.
inline complex pauli_phase(const PauliString& p, std::uint64_t b) {
  const int y_count = std::popcount(p.x_mask() & p.z_mask());
  const int sign = std::popcount(b & p.z_mask()) & 1;
  return kIPowers[(y_count + 2 * sign) % 4];
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(const SampleKey& key, std::uint64_t bin) {
  return splitmix64(splitmix64(splitmix64(key.seed) ^ key.term) ^ bin);
}

}  // namespace

Statevector::Statevector(std::size_t n_qubits) : n_(n_qubits) {
  if (n_qubits > kMaxQubits) {
    throw InputError(fmt::format("simulator: {} qubits exceeds the dense limit {}", n_qubits, kMaxQubits));
  }
  amps_.assign(std::size_t{1} << n_qubits, complex{});
  amps_[0] = 1.0;
}

double Statevector::norm() const {
  double sum = 0.0;
  for (const auto& a : amps_) sum += std::norm(a);
  return std::sqrt(sum);
}

complex Statevector::inner(const Statevector& other) const {
  if (other.n_ != n_) throw InputError("simulator: inner product of states with different sizes");
  complex sum{};
  for (std::size_t i = 0; i < amps_.size(); ++i) sum += std::conj(amps_[i]) * other.amps_[i];
  return sum;
}

Statevector prepare_basis_state(std::uint64_t occupation, std::size_t n_qubits) {
  Statevector s(n_qubits);
  if (n_qubits < 64 && occupation >= (std::uint64_t{1} << n_qubits)) {
    throw InputError(fmt::format("simulator: occupation {:#b} does not fit in {} qubits", occupation, n_qubits));
  }
  s[0] = 0.0;
  s[occupation] = 1.0;
  return s;
}

void apply_pauli(Statevector& s, const PauliString& p) {
  require_match(s, p.n_qubits(), "Pauli string");
  std::vector<complex> out(s.dimension());
  for (std::uint64_t b = 0; b < s.dimension(); ++b) out[b ^ p.x_mask()] = pauli_phase(p, b) * s[b];
  std::copy(out.begin(), out.end(), s.amplitudes().begin());
}

void apply_pauli_rotation(Statevector& s, const PauliString& p, double theta) {
  require_match(s, p.n_qubits(), "Pauli rotation");
  const double c = std::cos(0.5 * theta);
  const complex mis{0.0, -std::sin(0.5 * theta)};
  const std::uint64_t x = p.x_mask();
  if (x == 0) {
    for (std::uint64_t b = 0; b < s.dimension(); ++b) s[b] *= c + mis * pauli_phase(p, b);
    return;
  }
  // P pairs b with b ^ x; update each pair once.
  const std::uint64_t pivot = std::uint64_t{1} << (63 - std::countl_zero(x));
  for (std::uint64_t b = 0; b < s.dimension(); ++b) {
    if (b & pivot) continue;
    const std::uint64_t b2 = b ^ x;
    const complex a0 = s[b];
    const complex a1 = s[b2];
    s[b] = c * a0 + mis * pauli_phase(p, b2) * a1;
    s[b2] = c * a1 + mis * pauli_phase(p, b) * a0;
  }
}

void apply_givens(Statevector& s, std::size_t p, std::size_t q, double phi) {
  if (p == q) throw InputError(fmt::format("simulator: Givens rotation needs two distinct qubits, got {} twice", p));
  if (p >= s.n_qubits() || q >= s.n_qubits()) {
    throw InputError(fmt::format("simulator: Givens qubits ({}, {}) out of range", p, q));
  }
  if (p > q) {
    std::swap(p, q);
    phi = -phi;
  }
  const double c = std::cos(phi);
  const double sn = std::sin(phi);
  const std::uint64_t bp = std::uint64_t{1} << p;
  const std::uint64_t bq = std::uint64_t{1} << q;
  const std::uint64_t between = (bq - 1) & ~((bp << 1) - 1);
  for (std::uint64_t b = 0; b < s.dimension(); ++b) {
    if (!(b & bp) || (b & bq)) continue;  // b = |1_p 0_q>
    const std::uint64_t b2 = b ^ bp ^ bq;  // |0_p 1_q>
    const double sign = (std::popcount(b & between) & 1) ? -1.0 : 1.0;
    const complex alpha = s[b];
    const complex beta = s[b2];
    s[b] = c * alpha + sign * sn * beta;
    s[b2] = -sign * sn * alpha + c * beta;
  }
}

GivensDecomposition givens_decomposition(const Eigen::MatrixXd& u, std::size_t block) {
  const auto n = static_cast<std::size_t>(u.rows());
  if (u.cols() != u.rows()) throw InputError("simulator: orbital rotation must be square");
  if (!(u.transpose() * u).isApprox(Eigen::MatrixXd::Identity(u.rows(), u.cols()), 1e-10)) {
    throw InputError("simulator: orbital rotation is not orthogonal (u^T u != I within 1e-10)");
  }
  if (block == 0 || n % block != 0) throw InputError("simulator: bad spin-block size for orbital rotation");
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (r / block != c / block && std::abs(u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))) > 1e-12) {
        throw InputError("simulator: orbital rotation mixes spin blocks");
      }

  GivensDecomposition out;
  out.signs.assign(n, 1.0);
  Eigen::MatrixXd a = u;
  // Reduce each block to a signed identity with adjacent-row rotations L_k,
  // then u = L_1^T ... L_k^T D, and L^T(phi) = R(-phi).
  for (std::size_t off = 0; off < n; off += block) {
    for (std::size_t col = off; col + 1 < off + block; ++col) {
      for (std::size_t q = off + block - 1; q > col; --q) {
        const std::size_t p = q - 1;
        const auto ip = static_cast<Eigen::Index>(p), iq = static_cast<Eigen::Index>(q);
        const auto ic = static_cast<Eigen::Index>(col);
        if (std::abs(a(iq, ic)) < 1e-15) continue;
        const double phi = std::atan2(a(iq, ic), a(ip, ic));
        const double c = std::cos(phi), sn = std::sin(phi);
        Eigen::RowVectorXd rp = a.row(ip), rq = a.row(iq);
        a.row(ip) = c * rp + sn * rq;
        a.row(iq) = -sn * rp + c * rq;
        out.rotations.push_back({p, q, -phi});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.signs[i] = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) < 0 ? -1.0 : 1.0;
  }
  return out;
}

void apply_orbital_rotation(Statevector& s, const Eigen::MatrixXd& u) {
  if (static_cast<std::size_t>(u.rows()) != s.n_qubits()) {
    throw InputError(fmt::format("simulator: {}x{} orbital rotation on {} qubits", u.rows(), u.cols(), s.n_qubits()));
  }
  const auto dec = givens_decomposition(u, s.n_qubits() / 2);
  for (std::size_t p = 0; p < dec.signs.size(); ++p) {
    if (dec.signs[p] > 0) continue;
    const std::uint64_t bit = std::uint64_t{1} << p;
    for (std::uint64_t b = 0; b < s.dimension(); ++b)
      if (b & bit) s[b] = -s[b];
  }
  for (auto it = dec.rotations.rbegin(); it != dec.rotations.rend(); ++it) apply_givens(s, it->p, it->q, it->phi);
}

complex expectation(const Statevector& s, const PauliString& p) {
  require_match(s, p.n_qubits(), "observable");
  complex sum{};
  for (std::uint64_t b = 0; b < s.dimension(); ++b) {
    sum += std::conj(s[b ^ p.x_mask()]) * pauli_phase(p, b) * s[b];
  }
  return sum;
}

complex expectation(const Statevector& s, const PauliSum& o) {
  require_match(s, o.n_qubits(), "observable");
  complex sum{};
  for (const auto& t : o.terms()) sum += t.coeff * expectation(s, t.string);
  return sum;
}

ShotEstimate sample_expectation(const Statevector& s, const PauliString& p, std::size_t shots, std::size_t bins,
                                SampleKey key) {
  if (shots == 0) throw InputError("simulator: shots must be positive");
  if (bins == 0 || shots % bins != 0) {
    throw InputError(fmt::format("simulator: {} shots are not divisible into {} bins", shots, bins));
  }
  if (p.is_identity()) throw InputError("simulator: refusing to sample the identity string (<I> = 1 exactly)");

  const double exact = expectation(s, p).real();
  const double prob_plus = std::clamp(0.5 * (1.0 + exact), 0.0, 1.0);
  const std::size_t per_bin = shots / bins;

  ShotEstimate est;
  est.term = p;
  est.shots = shots;
  est.bin_means.reserve(bins);
  double total = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    std::mt19937_64 engine(stream_seed(key, b));
    std::binomial_distribution<std::int64_t> draw(static_cast<std::int64_t>(per_bin), prob_plus);
    const auto plus = draw(engine);
    const double mean = (2.0 * static_cast<double>(plus) - static_cast<double>(per_bin)) / static_cast<double>(per_bin);
    est.bin_means.push_back(mean);
    total += mean;
  }
  est.mean = total / static_cast<double>(bins);
  return est;
}

}  // namespace qsegf
