#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "qsegf/integrals.hpp"
#include "qsegf/pauli.hpp"

namespace qsegf::testing {

inline std::string data_path(const std::string& name) { return std::string(QSEGF_TEST_DATA) + "/" + name; }

inline MolecularIntegrals h2() { return read_fcidump(data_path("h2_sto6g_0.76.fcidump")); }
inline MolecularIntegrals h4() { return read_fcidump(data_path("h4_sto6g_1.0.fcidump")); }

inline PauliSum qubit_hamiltonian(const MolecularIntegrals& mi) { return map_hamiltonian(to_spin_orbitals(mi)); }

// Applies c+_p (create) or c_p to a determinant; nullopt when it vanishes.
inline std::optional<std::pair<double, std::uint64_t>> ladder(std::uint64_t b, std::size_t p, bool create) {
  const std::uint64_t bit = std::uint64_t{1} << p;
  if (create == static_cast<bool>(b & bit)) return std::nullopt;
  const double sign = (std::popcount(b & (bit - 1)) & 1) ? -1.0 : 1.0;
  return std::pair{sign, b ^ bit};
}

// Second-quantized Hamiltonian assembled directly on occupation-number
// determinants, without any Pauli algebra.
inline Eigen::MatrixXd occupation_matrix(const SpinOrbitalHamiltonian& soh) {
  const std::size_t n = soh.n_so;
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
    const auto col = static_cast<Eigen::Index>(b);
    m(col, col) += soh.e_core;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) {
        const double hpq = soh.h(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
        if (hpq == 0.0) continue;
        auto a = ladder(b, q, false);
        if (!a) continue;
        auto c = ladder(a->second, p, true);
        if (!c) continue;
        m(static_cast<Eigen::Index>(c->second), col) += hpq * a->first * c->first;
      }
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t s = 0; s < n; ++s) {
            const double v = soh.v(p, q, r, s);
            if (v == 0.0) continue;
            // c+_p c+_q c_s c_r
            auto a1 = ladder(b, r, false);
            if (!a1) continue;
            auto a2 = ladder(a1->second, s, false);
            if (!a2) continue;
            auto a3 = ladder(a2->second, q, true);
            if (!a3) continue;
            auto a4 = ladder(a3->second, p, true);
            if (!a4) continue;
            m(static_cast<Eigen::Index>(a4->second), col) += 0.5 * v * a1->first * a2->first * a3->first * a4->first;
          }
  }
  return m;
}

inline Eigen::MatrixXd random_orthogonal(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ();
}

}  // namespace qsegf::testing
