#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "qsegf/error.hpp"
#include "qsegf/oracle.hpp"
#include "qsegf/qse.hpp"
#include "qsegf/vqe.hpp"
#include "support.hpp"

namespace qsegf {
namespace {

struct H2Ground {
  PauliSum h;
  Statevector psi;
};

const H2Ground& h2_ground() {
  static const H2Ground g = [] {
    const auto mi = testing::h2();
    H2Ground out;
    out.h = testing::qubit_hamiltonian(mi);
    const auto c = make_qcc_circuit(mi, AnsatzMode::Auto);
    out.psi = prepare_state(c, minimize(out.h, c).theta);
    return out;
  }();
  return g;
}

Eigen::VectorXcd as_vector(const Statevector& s) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dimension()));
  for (std::size_t b = 0; b < s.dimension(); ++b) v(static_cast<Eigen::Index>(b)) = s[b];
  return v;
}

TEST(SubspaceMatrices, HartreeFockOverlap) {
  const auto h = testing::qubit_hamiltonian(testing::h2());
  const auto hf = prepare_basis_state(0b0101, 4);
  const auto ea = build_subspace_matrices(hf, h, Sector::EA);
  const Eigen::Vector4d expect(0, 1, 0, 1);
  EXPECT_LT((ea.s - CMatrix(expect.cast<complex>().asDiagonal())).cwiseAbs().maxCoeff(), 1e-14);
  const auto ip = build_subspace_matrices(hf, h, Sector::IP);
  EXPECT_NEAR(ip.s.trace().real(), 2.0, 1e-14);
}

TEST(SubspaceMatrices, IpTraceIsElectronCount) {
  const auto& g = h2_ground();
  EXPECT_NEAR(build_subspace_matrices(g.psi, g.h, Sector::IP).s.trace().real(), 2.0, 1e-10);
}

TEST(SubspaceMatrices, MatchDenseOracle) {
  const auto& g = h2_ground();
  const CMatrix hm = dense_matrix(g.h);
  const Eigen::VectorXcd v = as_vector(g.psi);
  const auto ea = build_subspace_matrices(g.psi, g.h, Sector::EA);
  const auto ip = build_subspace_matrices(g.psi, g.h, Sector::IP);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      const Eigen::VectorXcd cj = apply_creation(v, j), ci = apply_creation(v, i);
      EXPECT_LT(std::abs(ea.h(ii, jj) - ci.dot(hm * cj)), 1e-10);
      EXPECT_LT(std::abs(ea.s(ii, jj) - ci.dot(cj)), 1e-12);
      const Eigen::VectorXcd aj = apply_annihilation(v, j), ai = apply_annihilation(v, i);
      EXPECT_LT(std::abs(ip.h(ii, jj) - ai.dot(hm * aj)), 1e-10);
      EXPECT_LT(std::abs(ip.s(ii, jj) - ai.dot(aj)), 1e-12);
    }
}

TEST(SolveGeneralized, IdentityOverlap) {
  CMatrix h = CMatrix::Zero(2, 2), s = CMatrix::Identity(2, 2);
  h(0, 0) = 2.0;
  h(1, 1) = 1.0;
  const auto r = solve_generalized(h, s, 1e-8);
  ASSERT_EQ(r.energies.size(), 2);
  EXPECT_NEAR(r.energies(0), 1.0, 1e-15);
  EXPECT_NEAR(r.energies(1), 2.0, 1e-15);
  EXPECT_NEAR(std::abs(r.coeffs(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(r.coeffs(0, 1)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(r.coeffs(0, 0)), 0.0, 1e-15);
}

TEST(SolveGeneralized, DropsNullSpace) {
  CMatrix h(2, 2), s = CMatrix::Zero(2, 2);
  h << 3.0, 0.5, 0.5, -1.0;
  s(1, 1) = 1.0;
  const auto r = solve_generalized(h, s, 1e-8);
  ASSERT_EQ(r.energies.size(), 1);
  EXPECT_NEAR(r.energies(0), -1.0, 1e-15);
}

TEST(SolveGeneralized, EmptySubspace) {
  EXPECT_THROW(solve_generalized(CMatrix::Identity(2, 2), CMatrix::Zero(2, 2), 1e-8), NumericalError);
  EXPECT_THROW(solve_generalized(CMatrix::Identity(2, 2), CMatrix::Identity(3, 3), 1e-8), InputError);
}

TEST(SolveGeneralized, OrthonormalInMetric) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  CMatrix a(5, 5), b(5, 5);
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = 0; j < 5; ++j) {
      a(i, j) = {normal(rng), normal(rng)};
      b(i, j) = {normal(rng), normal(rng)};
    }
  const CMatrix h = a + a.adjoint();
  const CMatrix s = b * b.adjoint();
  const auto r = solve_generalized(h, s, 1e-8);
  const CMatrix gram = r.coeffs.adjoint() * s * r.coeffs;
  EXPECT_LT((gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1e-8);
  const CMatrix resid = h * r.coeffs - s * r.coeffs * r.energies.cast<complex>().asDiagonal();
  EXPECT_LT(resid.cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SolveGeneralized, CountsNegativeOverlaps) {
  CMatrix s = CMatrix::Identity(2, 2);
  s(0, 0) = -0.01;
  const auto r = solve_generalized(CMatrix::Identity(2, 2), s, 1e-2);
  EXPECT_EQ(r.negative_overlaps, 1u);
  EXPECT_EQ(r.energies.size(), 1);
}

TEST(TransitionAmplitudes, IdentityCoefficients) {
  CMatrix s(2, 2);
  s << 0.7, complex(0.1, 0.2), complex(0.1, -0.2), 0.3;
  const CMatrix x = transition_amplitudes(CMatrix::Identity(2, 2), s);
  EXPECT_LT((x - s).cwiseAbs().maxCoeff(), 1e-16);
  EXPECT_THROW(transition_amplitudes(CMatrix::Identity(3, 3), s), InputError);
}

TEST(TransitionAmplitudes, Completeness) {
  const auto& g = h2_ground();
  const auto ea = solve_subspace(Sector::EA, build_subspace_matrices(g.psi, g.h, Sector::EA), 1e-8);
  const auto ip = solve_subspace(Sector::IP, build_subspace_matrices(g.psi, g.h, Sector::IP), 1e-8);
  const CMatrix sum = ea.amplitudes.adjoint() * ea.amplitudes + (ip.amplitudes.adjoint() * ip.amplitudes).transpose();
  EXPECT_LT((sum - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_NEAR(sum.trace().real(), 4.0, 1e-8);
  const CMatrix gram = ea.coeffs.adjoint() * ea.s_sub * ea.coeffs;
  EXPECT_LT((gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SolveSubspace, H2EnergiesMatchSectorSpectra) {
  const auto& g = h2_ground();
  const auto fci = fci_solve(g.h, 2);
  const auto ea = solve_subspace(Sector::EA, build_subspace_matrices(g.psi, g.h, Sector::EA), 1e-8);
  const auto ip = solve_subspace(Sector::IP, build_subspace_matrices(g.psi, g.h, Sector::IP), 1e-8);
  // One-electron attachment/removal spans the full 3- and 1-electron sectors of H2.
  ASSERT_EQ(ea.energies.size(), fci.plus.energies.size());
  ASSERT_EQ(ip.energies.size(), fci.minus.energies.size());
  EXPECT_LT((ea.energies - fci.plus.energies).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((ip.energies - fci.minus.energies).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SolveSubspace, H4InterlacesWithSectorSpectra) {
  const auto mi = testing::h4();
  const auto h = testing::qubit_hamiltonian(mi);
  const auto c = make_qcc_circuit(mi, AnsatzMode::Auto);
  const auto psi = prepare_state(c, minimize(h, c).theta);
  const auto fci = fci_solve(h, 4);
  const auto ea = solve_subspace(Sector::EA, build_subspace_matrices(psi, h, Sector::EA), 1e-8);
  const auto ip = solve_subspace(Sector::IP, build_subspace_matrices(psi, h, Sector::IP), 1e-8);
  for (Eigen::Index k = 0; k < ea.energies.size(); ++k) EXPECT_GE(ea.energies(k), fci.plus.energies(k) - 1e-10);
  for (Eigen::Index k = 0; k < ip.energies.size(); ++k) EXPECT_GE(ip.energies(k), fci.minus.energies(k) - 1e-10);
  EXPECT_NEAR(ea.energies(0), fci.plus.energies(0), 5e-2);
}

TEST(Sampling, NoiselessLimitAndDeterminism) {
  const auto& g = h2_ground();
  const auto a = sample_subspace_matrices(g.psi, g.h, {1000, 10, 3});
  const auto b = sample_subspace_matrices(g.psi, g.h, {1000, 10, 3});
  ASSERT_EQ(a.bins.size(), 10u);
  for (std::size_t k = 0; k < 10; ++k) {
    EXPECT_TRUE(a.bins[k].ea.h == b.bins[k].ea.h);
    EXPECT_TRUE(a.bins[k].ip.s == b.bins[k].ip.s);
  }
  EXPECT_FALSE(a.measured_strings.empty());
  for (std::size_t k = 1; k < a.measured_strings.size(); ++k) EXPECT_LT(a.measured_strings[k - 1], a.measured_strings[k]);

  // Many shots: averages approach the exact matrices.
  const auto big = sample_subspace_matrices(g.psi, g.h, {400000, 4, 5});
  const auto avg = average(big.bins);
  const auto exact_ea = build_subspace_matrices(g.psi, g.h, Sector::EA);
  const auto exact_ip = build_subspace_matrices(g.psi, g.h, Sector::IP);
  EXPECT_LT((avg.ea.s - exact_ea.s).cwiseAbs().maxCoeff(), 2e-2);
  EXPECT_LT((avg.ip.h - exact_ip.h).cwiseAbs().maxCoeff(), 1e-1);
}

TEST(Sampling, EigenstateStringsAreExact) {
  // On a determinant, Z-only strings have deterministic outcomes, so the
  // diagonal overlaps are exact in every bin.
  const auto h = testing::qubit_hamiltonian(testing::h2());
  const auto hf = prepare_basis_state(0b0101, 4);
  const auto r = sample_subspace_matrices(hf, h, {100, 10, 1});
  for (const auto& bin : r.bins) {
    EXPECT_NEAR(bin.ip.s.trace().real(), 2.0, 1e-14);
    EXPECT_NEAR(bin.ea.s(1, 1).real(), 1.0, 1e-14);
  }
}

TEST(Sampling, WithinFourSigmaOverSeeds) {
  // Element-wise: the exact matrix lies within 4 standard errors of the bin
  // mean for at least 95% of matrix elements.
  const auto& g = h2_ground();
  const auto exact_ea = build_subspace_matrices(g.psi, g.h, Sector::EA);
  std::size_t inside = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = sample_subspace_matrices(g.psi, g.h, {8190, 10, seed});
    for (Eigen::Index i = 0; i < 4; ++i)
      for (Eigen::Index j = 0; j < 4; ++j) {
        double mean = 0.0, sq = 0.0;
        for (const auto& b : r.bins) {
          mean += b.ea.h(i, j).real() / 10.0;
          sq += std::norm(b.ea.h(i, j).real()) / 10.0;
        }
        const double se = std::sqrt(std::max(sq - mean * mean, 0.0) / 9.0);
        const double diff = std::abs(mean - exact_ea.h(i, j).real());
        ++total;
        if (diff <= 4 * se || diff < 1e-12) ++inside;
      }
  }
  EXPECT_GE(static_cast<double>(inside) / static_cast<double>(total), 0.95);
}

}  // namespace
}  // namespace qsegf
