#include "qsegf/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include <fmt/format.h>

#include "qsegf/error.hpp"
#include "qsegf/integrals.hpp"

namespace qsegf {
namespace {

constexpr complex kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

int letter_rank(bool x, bool z) {
  if (!x && !z) return 0;  // I
  if (x && !z) return 1;   // X
  if (x && z) return 2;    // Y
  return 3;                // Z
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw InputError(fmt::format("pauli: {} on {} vs {} qubits", what, a, b));
}

struct MaskHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const {
    return std::hash<std::uint64_t>{}(k.first * 0x9E3779B97F4A7C15ULL ^ k.second);
  }
};

// Accumulates coefficients by string; cheaper than sorting on every add.
class Accumulator {
 public:
  explicit Accumulator(std::size_t n) : n_(n) {}

  void add(complex c, const PauliString& s) {
    auto it = map_.try_emplace({s.x_mask(), s.z_mask()}, complex{}, s).first;
    it->second.first += c;
  }

  PauliSum finish() && {
    std::vector<PauliTerm> terms;
    terms.reserve(map_.size());
    for (auto& [key, value] : map_) terms.push_back({value.first, value.second});
    return PauliSum(n_, std::move(terms));
  }

 private:
  std::size_t n_;
  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, std::pair<complex, PauliString>, MaskHash> map_;
};

}  // namespace

PauliString::PauliString(std::size_t n_qubits) : n_(n_qubits) {
  if (n_qubits > kMaxQubits) throw InputError(fmt::format("pauli: {} qubits exceeds {}", n_qubits, kMaxQubits));
}

PauliString PauliString::from_string(std::string_view letters) {
  PauliString s(letters.size());
  for (std::size_t i = 0; i < letters.size(); ++i) {
    const std::size_t q = letters.size() - 1 - i;
    switch (letters[i]) {
      case 'I': case '_': break;
      case 'X': s.set(q, Pauli::X); break;
      case 'Y': s.set(q, Pauli::Y); break;
      case 'Z': s.set(q, Pauli::Z); break;
      default: throw InputError(fmt::format("pauli: bad letter '{}' in '{}'", letters[i], letters));
    }
  }
  return s;
}

Pauli PauliString::get(std::size_t qubit) const {
  const bool x = (x_ >> qubit) & 1U;
  const bool z = (z_ >> qubit) & 1U;
  return static_cast<Pauli>(letter_rank(x, z));
}

PauliString& PauliString::set(std::size_t qubit, Pauli p) {
  if (qubit >= n_) throw InputError(fmt::format("pauli: qubit {} out of range for {} qubits", qubit, n_));
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  x_ &= ~bit;
  z_ &= ~bit;
  if (p == Pauli::X || p == Pauli::Y) x_ |= bit;
  if (p == Pauli::Z || p == Pauli::Y) z_ |= bit;
  return *this;
}

std::size_t PauliString::weight() const { return static_cast<std::size_t>(std::popcount(x_ | z_)); }

bool PauliString::commutes_with(const PauliString& other) const {
  return (std::popcount((x_ & other.z_) ^ (z_ & other.x_)) & 1) == 0;
}

std::string PauliString::to_string() const {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  std::string out(n_, 'I');
  for (std::size_t q = 0; q < n_; ++q) out[n_ - 1 - q] = kLetters[static_cast<int>(get(q))];
  return out;
}

std::strong_ordering operator<=>(const PauliString& a, const PauliString& b) {
  if (auto c = a.n_ <=> b.n_; c != 0) return c;
  const std::uint64_t diff = (a.x_ ^ b.x_) | (a.z_ ^ b.z_);
  if (diff == 0) return std::strong_ordering::equal;
  const std::size_t q = 63 - static_cast<std::size_t>(std::countl_zero(diff));
  const int ra = letter_rank((a.x_ >> q) & 1U, (a.z_ >> q) & 1U);
  const int rb = letter_rank((b.x_ >> q) & 1U, (b.z_ >> q) & 1U);
  return ra <=> rb;
}

std::pair<complex, PauliString> multiply(const PauliString& a, const PauliString& b) {
  require_same_size(a.n_qubits(), b.n_qubits(), "multiply");
  // With P = i^{|x&z|} X^x Z^z:  X^x1 Z^z1 X^x2 Z^z2 = (-1)^{|z1&x2|} X^x3 Z^z3.
  const std::uint64_t x3 = a.x_mask() ^ b.x_mask();
  const std::uint64_t z3 = a.z_mask() ^ b.z_mask();
  int e = std::popcount(a.x_mask() & a.z_mask()) + std::popcount(b.x_mask() & b.z_mask()) -
          std::popcount(x3 & z3) + 2 * std::popcount(a.z_mask() & b.x_mask());
  e = ((e % 4) + 4) % 4;
  PauliString s(a.n_qubits());
  for (std::size_t q = 0; q < a.n_qubits(); ++q) {
    s.set(q, static_cast<Pauli>(letter_rank((x3 >> q) & 1U, (z3 >> q) & 1U)));
  }
  return {kPhases[e], s};
}

PauliSum::PauliSum(std::size_t n_qubits, std::vector<PauliTerm> terms) : n_(n_qubits), terms_(std::move(terms)) {
  for (const auto& t : terms_) require_same_size(n_, t.string.n_qubits(), "PauliSum term");
  canonicalize();
}

PauliSum PauliSum::identity(std::size_t n_qubits, complex coeff) {
  return PauliSum(n_qubits, {{coeff, PauliString(n_qubits)}});
}

PauliSum PauliSum::single(const PauliString& s, complex coeff) { return PauliSum(s.n_qubits(), {{coeff, s}}); }

void PauliSum::canonicalize() {
  std::sort(terms_.begin(), terms_.end(), [](const auto& a, const auto& b) { return a.string < b.string; });
  std::vector<PauliTerm> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().string == t.string) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const PauliTerm& t) { return std::abs(t.coeff) < kPruneThreshold; });
  terms_ = std::move(merged);
}

complex PauliSum::coefficient(const PauliString& s) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), s,
                             [](const PauliTerm& t, const PauliString& key) { return t.string < key; });
  return (it != terms_.end() && it->string == s) ? it->coeff : complex{};
}

PauliSum PauliSum::adjoint() const {
  PauliSum out = *this;
  for (auto& t : out.terms_) t.coeff = std::conj(t.coeff);
  return out;
}

double PauliSum::max_imag() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coeff.imag()));
  return m;
}

double PauliSum::one_norm_traceless() const {
  double s = 0.0;
  for (const auto& t : terms_)
    if (!t.string.is_identity()) s += std::abs(t.coeff);
  return s;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  require_same_size(n_, other.n_, "addition");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) { return *this += complex{-1.0} * other; }

PauliSum& PauliSum::operator*=(complex scale) {
  for (auto& t : terms_) t.coeff *= scale;
  canonicalize();
  return *this;
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  require_same_size(a.n_, b.n_, "sum_multiply");
  Accumulator acc(a.n_);
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      auto [phase, s] = multiply(ta.string, tb.string);
      acc.add(phase * ta.coeff * tb.coeff, s);
    }
  }
  return std::move(acc).finish();
}

std::string PauliSum::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += " + ";
    const double re = t.coeff.real();
    const double im = t.coeff.imag();
    std::string c;
    if (im == 0.0) {
      c = fmt::format("{}", re);
    } else if (re == 0.0) {
      c = fmt::format("{}i", im);
    } else {
      c = fmt::format("{}{}{}i", re, im < 0 ? "-" : "+", std::abs(im));
    }
    out += fmt::format("({})·{}", c, t.string.to_string());
  }
  return out;
}

PauliSum sum_multiply(const PauliSum& a, const PauliSum& b) { return a * b; }

PauliSum jw_creation(std::size_t p, std::size_t n_so) {
  if (p >= n_so) throw InputError(fmt::format("pauli: spin-orbital {} out of range for {} qubits", p, n_so));
  PauliString xs(n_so), ys(n_so);
  for (std::size_t q = 0; q < p; ++q) {
    xs.set(q, Pauli::Z);
    ys.set(q, Pauli::Z);
  }
  xs.set(p, Pauli::X);
  ys.set(p, Pauli::Y);
  return PauliSum(n_so, {{0.5, xs}, {complex{0.0, -0.5}, ys}});
}

PauliSum jw_annihilation(std::size_t p, std::size_t n_so) { return jw_creation(p, n_so).adjoint(); }

PauliSum jw_number_operator(std::size_t n_so) {
  Accumulator acc(n_so);
  for (std::size_t p = 0; p < n_so; ++p) {
    PauliString z(n_so);
    z.set(p, Pauli::Z);
    acc.add(0.5, PauliString(n_so));
    acc.add(-0.5, z);
  }
  return std::move(acc).finish();
}

PauliSum map_hamiltonian(const SpinOrbitalHamiltonian& soh) {
  const std::size_t n = soh.n_so;
  std::vector<PauliSum> cdag, c;
  for (std::size_t p = 0; p < n; ++p) {
    cdag.push_back(jw_creation(p, n));
    c.push_back(jw_annihilation(p, n));
  }

  Accumulator acc(n);
  auto add_scaled = [&acc](double scale, const PauliSum& op) {
    for (const auto& t : op.terms()) acc.add(scale * t.coeff, t.string);
  };

  acc.add(soh.e_core, PauliString(n));
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      const double hpq = soh.h(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
      if (hpq != 0.0) add_scaled(hpq, cdag[p] * c[q]);
    }
  }

  // 1/2 sum v_pqrs c+_p c+_q c_s c_r, built from pair products.
  std::vector<PauliSum> create_pair(n * n), annihilate_pair(n * n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      create_pair[p * n + q] = cdag[p] * cdag[q];
      annihilate_pair[p * n + q] = c[p] * c[q];
    }
  }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          if (r == s) continue;
          const double v = soh.v(p, q, r, s);
          if (v == 0.0) continue;
          add_scaled(0.5 * v, create_pair[p * n + q] * annihilate_pair[s * n + r]);
        }
    }
  return std::move(acc).finish();
}

std::pair<PauliSum, PauliSum> hermitian_split(const PauliSum& o) {
  const PauliSum dag = o.adjoint();
  PauliSum a = complex{0.5} * (o + dag);
  PauliSum b = complex{0.0, -0.5} * (o - dag);
  return {std::move(a), std::move(b)};
}

PauliSum commutator(const PauliSum& a, const PauliSum& b) { return a * b - b * a; }

}  // namespace qsegf
