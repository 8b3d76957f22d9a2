#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "qsegf/error.hpp"
#include "qsegf/integrals.hpp"
#include "qsegf/oracle.hpp"
#include "support.hpp"

namespace qsegf {
namespace {

constexpr const char* kTiny =
    " &FCI NORB=2,NELEC=2,MS2=0,\n"
    "  ORBSYM=1,1,\n"
    "  ISYM=1,\n"
    " &END\n"
    "0.6 1 1 1 1\n"
    "0.2 2 1 1 1\n"
    "0.15 2 1 2 1\n"
    "0.5 2 2 1 1\n"
    "0.55 2 2 2 2\n"
    "-1.2 1 1 0 0\n"
    "0.05 2 1 0 0\n"
    "-0.4 2 2 0 0\n"
    "0.713753 0 0 0 0\n";

MolecularIntegrals tiny() {
  std::istringstream in(kTiny);
  return parse_fcidump(in);
}

TEST(ParseFcidump, HeaderFields) {
  const auto mi = tiny();
  EXPECT_EQ(mi.n_spatial, 2u);
  EXPECT_EQ(mi.n_electrons, 2u);
  EXPECT_EQ(mi.ms2, 0);
}

TEST(ParseFcidump, CoreEnergyLine) { EXPECT_DOUBLE_EQ(tiny().e_core, 0.713753); }

TEST(ParseFcidump, FillsAllEightImages) {
  const auto mi = tiny();
  for (auto [i, j, k, l] : {std::array<std::size_t, 4>{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}) {
    EXPECT_DOUBLE_EQ(mi.v(i, j, k, l), 0.2);
  }
  EXPECT_DOUBLE_EQ(mi.v(0, 0, 1, 1), 0.5);
  EXPECT_DOUBLE_EQ(mi.v(1, 1, 0, 0), 0.5);
  EXPECT_DOUBLE_EQ(mi.v(0, 1, 0, 1), 0.15);
  EXPECT_DOUBLE_EQ(mi.v(1, 0, 1, 0), 0.15);
  EXPECT_DOUBLE_EQ(mi.h(0, 1), 0.05);
  EXPECT_DOUBLE_EQ(mi.h(1, 0), 0.05);
}

TEST(ParseFcidump, SingleLineHeaderAndFortranExponent) {
  std::istringstream in("&FCI NORB=1,NELEC=1,MS2=1/\n1.5D-1 1 1 1 1\n-2.0d0 1 1 0 0\n0.0 0 0 0 0\n");
  const auto mi = parse_fcidump(in);
  EXPECT_DOUBLE_EQ(mi.v(0, 0, 0, 0), 0.15);
  EXPECT_DOUBLE_EQ(mi.h(0, 0), -2.0);
  EXPECT_EQ(mi.ms2, 1);
}

TEST(ParseFcidump, MalformedHeader) {
  std::istringstream in("NORB=2\n0.1 1 1 1 1\n");
  EXPECT_THROW(parse_fcidump(in), InputError);
  std::istringstream missing_end("&FCI NORB=2,NELEC=2\n0.1 1 1 1 1\n");
  EXPECT_THROW(parse_fcidump(missing_end), InputError);
  std::istringstream no_norb("&FCI NELEC=2 &END\n");
  EXPECT_THROW(parse_fcidump(no_norb), InputError);
}

TEST(ParseFcidump, IndexOutOfRange) {
  std::istringstream in("&FCI NORB=2,NELEC=2 &END\n0.1 3 1 1 1\n");
  try {
    parse_fcidump(in);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("out of range"), std::string::npos);
  }
}

TEST(ParseFcidump, DuplicateEntries) {
  std::istringstream agree("&FCI NORB=1,NELEC=1 &END\n0.1 1 1 1 1\n0.1000000000001 1 1 1 1\n");
  EXPECT_NO_THROW(parse_fcidump(agree));
  std::istringstream conflict("&FCI NORB=2,NELEC=1 &END\n0.1 2 1 1 1\n0.2 1 2 1 1\n");
  EXPECT_THROW(parse_fcidump(conflict), InputError);
}

TEST(ParseFcidump, TooManyElectrons) {
  std::istringstream in("&FCI NORB=1,NELEC=3 &END\n");
  EXPECT_THROW(parse_fcidump(in), InputError);
}

TEST(ParseFcidump, MissingFileNamesPath) {
  try {
    read_fcidump("/nonexistent/x.fcidump");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/x.fcidump"), std::string::npos);
  }
}

TEST(ParseFcidump, Fixtures) {
  const auto h2 = testing::h2();
  EXPECT_EQ(h2.n_spatial, 2u);
  EXPECT_EQ(h2.n_electrons, 2u);
  const auto h4 = testing::h4();
  EXPECT_EQ(h4.n_spatial, 4u);
  EXPECT_EQ(h4.n_electrons, 4u);
}

TEST(WriteFcidump, RoundTripIsBitwise) {
  for (const auto& mi : {tiny(), testing::h2(), testing::h4()}) {
    std::stringstream buf;
    write_fcidump(buf, mi);
    const auto back = parse_fcidump(buf);
    EXPECT_EQ(back.n_spatial, mi.n_spatial);
    EXPECT_EQ(back.n_electrons, mi.n_electrons);
    EXPECT_EQ(back.e_core, mi.e_core);
    EXPECT_TRUE(back.h == mi.h);
    EXPECT_TRUE(back.v == mi.v);
  }
}

TEST(ToSpinOrbitals, BlockLayout) {
  const auto mi = tiny();
  const auto soh = to_spin_orbitals(mi);
  EXPECT_EQ(soh.n_so, 4u);
  EXPECT_DOUBLE_EQ(soh.h(2, 3), mi.h(0, 1));
  EXPECT_DOUBLE_EQ(soh.h(0, 1), mi.h(0, 1));
  EXPECT_EQ(soh.h(0, 2), 0.0);
  EXPECT_EQ(soh.h(1, 3), 0.0);
}

TEST(ToSpinOrbitals, SpinSparsityAndHermiticity) {
  const auto soh = to_spin_orbitals(testing::h4());
  const std::size_t n = soh.n_so, half = n / 2;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          if (p / half != r / half || q / half != s / half) EXPECT_EQ(soh.v(p, q, r, s), 0.0);
          EXPECT_EQ(soh.v(p, q, r, s), soh.v(r, s, p, q));
        }
}

TEST(ToSpinOrbitals, HartreeFockEnergyMatchesFixture) {
  // E_HF = e_core + 2 sum_i h_ii + sum_ij [2 (ii|jj) - (ij|ji)] over doubly occupied MOs.
  const auto mi = testing::h2();
  const double e = mi.e_core + 2 * mi.h(0, 0) + 2 * mi.v(0, 0, 0, 0) - mi.v(0, 0, 0, 0);
  EXPECT_NEAR(e, -1.1239260696884157, 1e-10);
}

TEST(ToSpinOrbitals, GroundEnergyEqualsFci) {
  const auto soh = to_spin_orbitals(testing::h2());
  const Eigen::MatrixXd m = testing::occupation_matrix(soh);
  const auto sector = sector_spectrum(m.cast<complex>(), 2);
  EXPECT_NEAR(sector.energies(0), -1.1453890189059703, 1e-10);
}

TEST(RotateOrbitals, PreservesSymmetryAndSpectrum) {
  std::mt19937_64 rng(5);
  const auto mi = testing::h2();
  const Eigen::MatrixXd u = testing::random_orthogonal(2, rng);
  const auto rot = rotate_orbitals(mi, u);
  EXPECT_NO_THROW(validate(rot));
  const auto a = sector_spectrum(testing::occupation_matrix(to_spin_orbitals(mi)).cast<complex>(), 2);
  const auto b = sector_spectrum(testing::occupation_matrix(to_spin_orbitals(rot)).cast<complex>(), 2);
  EXPECT_LT((a.energies - b.energies).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(RotateOrbitals, RejectsNonOrthogonal) {
  Eigen::MatrixXd u(2, 2);
  u << 1, 0.1, 0, 1;
  EXPECT_THROW(rotate_orbitals(testing::h2(), u), InputError);
}

}  // namespace
}  // namespace qsegf
