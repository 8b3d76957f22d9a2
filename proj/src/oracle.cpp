#include "qsegf/oracle.hpp"

#include <bit>
#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "qsegf/error.hpp"

namespace qsegf {
namespace {

constexpr std::size_t kMaxDenseQubits = 12;
constexpr complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

std::size_t qubits_of(const CMatrix& h) {
  const auto dim = static_cast<std::uint64_t>(h.rows());
  if (h.rows() != h.cols() || dim == 0 || !std::has_single_bit(dim)) {
    throw InputError("oracle: Hamiltonian matrix must be square with a power-of-two dimension");
  }
  return static_cast<std::size_t>(std::countr_zero(dim));
}

double jw_sign(std::uint64_t b, std::size_t p) {
  const std::uint64_t below = (std::uint64_t{1} << p) - 1;
  return (std::popcount(b & below) & 1) ? -1.0 : 1.0;
}

}  // namespace

CMatrix dense_matrix(const PauliSum& o) {
  const std::size_t n = o.n_qubits();
  if (n > kMaxDenseQubits) {
    throw InputError(fmt::format("oracle: {} qubits exceeds the dense-matrix limit of {}", n, kMaxDenseQubits));
  }
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
  CMatrix m = CMatrix::Zero(dim, dim);
  for (const auto& t : o.terms()) {
    const std::uint64_t x = t.string.x_mask(), z = t.string.z_mask();
    const int y_count = std::popcount(x & z);
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
      const int sign = std::popcount(b & z) & 1;
      m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) += t.coeff * kIPowers[(y_count + 2 * sign) % 4];
    }
  }
  return m;
}

Eigen::VectorXcd SectorSpectrum::full_state(Eigen::Index k, std::size_t n_qubits) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(std::uint64_t{1} << n_qubits));
  for (std::size_t r = 0; r < basis.size(); ++r) v(static_cast<Eigen::Index>(basis[r])) = states(static_cast<Eigen::Index>(r), k);
  return v;
}

SectorSpectrum sector_spectrum(const CMatrix& h, std::size_t particle_number) {
  const std::size_t n = qubits_of(h);
  const auto dim = static_cast<std::uint64_t>(h.rows());
  for (std::uint64_t a = 0; a < dim; ++a)
    for (std::uint64_t b = 0; b < dim; ++b)
      if (std::popcount(a) != std::popcount(b) &&
          std::abs(h(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))) > 1e-10) {
        throw InputError("oracle: Hamiltonian does not commute with the particle-number operator");
      }
  if (particle_number > n) {
    throw InputError(fmt::format("oracle: sector with {} particles is empty for {} spin-orbitals", particle_number, n));
  }

  SectorSpectrum s;
  s.particle_number = particle_number;
  for (std::uint64_t b = 0; b < dim; ++b)
    if (static_cast<std::size_t>(std::popcount(b)) == particle_number) s.basis.push_back(b);
  const auto m = static_cast<Eigen::Index>(s.basis.size());
  CMatrix block(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c)
      block(r, c) = h(static_cast<Eigen::Index>(s.basis[static_cast<std::size_t>(r)]),
                      static_cast<Eigen::Index>(s.basis[static_cast<std::size_t>(c)]));
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (block + block.adjoint()));
  if (solver.info() != Eigen::Success) throw NumericalError("oracle: sector eigendecomposition failed");
  s.energies = solver.eigenvalues();
  s.states = solver.eigenvectors();
  return s;
}

Eigen::VectorXcd apply_creation(const Eigen::VectorXcd& v, std::size_t p) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  const std::uint64_t bit = std::uint64_t{1} << p;
  for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(v.size()); ++b)
    if (!(b & bit)) out(static_cast<Eigen::Index>(b | bit)) = jw_sign(b, p) * v(static_cast<Eigen::Index>(b));
  return out;
}

Eigen::VectorXcd apply_annihilation(const Eigen::VectorXcd& v, std::size_t p) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  const std::uint64_t bit = std::uint64_t{1} << p;
  for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(v.size()); ++b)
    if (b & bit) out(static_cast<Eigen::Index>(b ^ bit)) = jw_sign(b, p) * v(static_cast<Eigen::Index>(b));
  return out;
}

FciResult fci_solve(const PauliSum& h, std::size_t n_electrons) {
  const std::size_t n = h.n_qubits();
  if (n_electrons == 0 || n_electrons + 1 > n) {
    throw InputError(fmt::format("oracle: {} electrons in {} spin-orbitals leaves the {} sector empty", n_electrons, n,
                                 n_electrons == 0 ? "N-1" : "N+1"));
  }
  const CMatrix hm = dense_matrix(h);
  FciResult r;
  r.ground = sector_spectrum(hm, n_electrons);
  r.minus = sector_spectrum(hm, n_electrons - 1);
  r.plus = sector_spectrum(hm, n_electrons + 1);
  if (r.ground.energies.size() > 1 && r.ground.energies(1) - r.ground.energies(0) < 1e-10) {
    spdlog::warn("oracle: degenerate {}-electron ground state (gap {:.3g}); using the lowest eigenvector",
                 n_electrons, r.ground.energies(1) - r.ground.energies(0));
  }
  r.e0 = r.ground.energies(0);
  r.psi0 = r.ground.full_state(0, n);

  const auto n_so = static_cast<Eigen::Index>(n);
  auto amplitudes = [&](const SectorSpectrum& sector, bool create) {
    CMatrix x(sector.energies.size(), n_so);
    for (Eigen::Index j = 0; j < n_so; ++j) {
      const Eigen::VectorXcd moved = create ? apply_creation(r.psi0, static_cast<std::size_t>(j))
                                            : apply_annihilation(r.psi0, static_cast<std::size_t>(j));
      Eigen::VectorXcd restricted(static_cast<Eigen::Index>(sector.basis.size()));
      for (std::size_t k = 0; k < sector.basis.size(); ++k)
        restricted(static_cast<Eigen::Index>(k)) = moved(static_cast<Eigen::Index>(sector.basis[k]));
      x.col(j) = sector.states.adjoint() * restricted;
    }
    return x;
  };
  r.x_plus = amplitudes(r.plus, true);
  r.x_minus = amplitudes(r.minus, false);
  r.poles = lehmann_poles(r.e0, r.plus.energies, r.x_plus, r.minus.energies, r.x_minus);
  return r;
}

GreensFunction fci_greens(const PauliSum& h, std::size_t n_electrons, const MatsubaraGrid& grid) {
  return evaluate_on_grid(fci_solve(h, n_electrons).poles, grid);
}

}  // namespace qsegf
