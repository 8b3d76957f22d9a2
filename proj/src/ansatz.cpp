#include "qsegf/ansatz.hpp"

#include <bit>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "qsegf/error.hpp"
#include "qsegf/integrals.hpp"

namespace qsegf {

AnsatzMode parse_ansatz_mode(const std::string& text) {
  if (text == "full") return AnsatzMode::Full;
  if (text == "single-xxxy" || text == "single-XXXY" || text == "single") return AnsatzMode::SingleXXXY;
  if (text == "auto") return AnsatzMode::Auto;
  throw InputError(fmt::format("ansatz: unknown mode '{}' (expected full, single-xxxy or auto)", text));
}

std::string to_string(AnsatzMode mode) {
  switch (mode) {
    case AnsatzMode::Full: return "full";
    case AnsatzMode::SingleXXXY: return "single-xxxy";
    case AnsatzMode::Auto: return "auto";
  }
  return "?";
}

std::uint64_t hf_occupation(std::size_t n_electrons, std::size_t n_so, int ms2) {
  if (n_so % 2 != 0) throw InputError("ansatz: spin-orbital count must be even");
  const long n = static_cast<long>(n_electrons);
  if ((n + ms2) % 2 != 0 || n + ms2 < 0 || n - ms2 < 0) {
    throw InputError(fmt::format("ansatz: spin projection MS2={} is infeasible for {} electrons", ms2, n_electrons));
  }
  const auto n_alpha = static_cast<std::size_t>((n + ms2) / 2);
  const auto n_beta = static_cast<std::size_t>((n - ms2) / 2);
  const std::size_t n_spatial = n_so / 2;
  if (n_alpha > n_spatial || n_beta > n_spatial) {
    throw InputError(fmt::format("ansatz: {} alpha / {} beta electrons do not fit in {} orbitals", n_alpha, n_beta,
                                 n_spatial));
  }
  std::uint64_t occ = 0;
  for (std::size_t i = 0; i < n_alpha; ++i) occ |= std::uint64_t{1} << i;
  for (std::size_t i = 0; i < n_beta; ++i) occ |= std::uint64_t{1} << (n_spatial + i);
  return occ;
}

std::vector<PauliString> enumerate_generators(std::uint64_t hf, std::size_t n_so) {
  const std::size_t n_spatial = n_so / 2;
  auto spin = [n_spatial](std::size_t p) { return p / n_spatial; };
  std::vector<std::size_t> occ, virt;
  for (std::size_t p = 0; p < n_so; ++p) ((hf >> p) & 1U ? occ : virt).push_back(p);

  auto double_string = [n_so](std::size_t i, std::size_t j, std::size_t a, std::size_t b) {
    PauliString s(n_so);
    s.set(b, Pauli::X).set(a, Pauli::X).set(j, Pauli::X).set(i, Pauli::Y);
    return s;
  };

  std::vector<PauliString> opposite, same, singles;
  for (std::size_t x = 0; x < occ.size(); ++x)
    for (std::size_t y = x + 1; y < occ.size(); ++y)
      for (std::size_t u = 0; u < virt.size(); ++u)
        for (std::size_t w = u + 1; w < virt.size(); ++w) {
          const std::size_t i = occ[x], j = occ[y], a = virt[u], b = virt[w];
          if (spin(i) + spin(j) != spin(a) + spin(b)) continue;
          if (spin(i) != spin(j)) {
            opposite.push_back(double_string(i, j, a, b));
          } else if (spin(a) == spin(i)) {
            same.push_back(double_string(i, j, a, b));
          }
        }
  for (std::size_t i : occ)
    for (std::size_t a : virt) {
      if (spin(i) != spin(a)) continue;
      PauliString s(n_so);
      s.set(a, Pauli::X).set(i, Pauli::Y);
      singles.push_back(s);
    }

  std::vector<PauliString> out;
  out.insert(out.end(), opposite.begin(), opposite.end());
  out.insert(out.end(), same.begin(), same.end());
  out.insert(out.end(), singles.begin(), singles.end());
  return out;
}

QccCircuit make_qcc_circuit(const MolecularIntegrals& mi, AnsatzMode mode,
                            std::optional<Eigen::MatrixXd> spatial_rotation) {
  QccCircuit c;
  c.n_so = 2 * mi.n_spatial;
  c.hf_occupation = hf_occupation(mi.n_electrons, c.n_so, mi.ms2);
  c.generators = enumerate_generators(c.hf_occupation, c.n_so);
  if (mode == AnsatzMode::Auto) mode = mi.n_spatial == 2 ? AnsatzMode::SingleXXXY : AnsatzMode::Full;
  if (mode == AnsatzMode::SingleXXXY && c.generators.size() > 1) c.generators.resize(1);
  if (spatial_rotation) c.orbital_rotation = spin_block_rotation(*spatial_rotation);
  return c;
}

Statevector prepare_state(const QccCircuit& c, std::span<const double> theta) {
  if (theta.size() != c.generators.size()) {
    throw InputError(fmt::format("ansatz: {} parameters for {} generators", theta.size(), c.generators.size()));
  }
  Statevector s = prepare_basis_state(c.hf_occupation, c.n_so);
  for (std::size_t m = 0; m < theta.size(); ++m) apply_pauli_rotation(s, c.generators[m], theta[m]);
  if (c.orbital_rotation) apply_orbital_rotation(s, *c.orbital_rotation);
  return s;
}

Eigen::MatrixXd read_orbital_rotation(const std::string& path, std::size_t n_spatial) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("ansatz: cannot open orbital-rotation file '{}'", path));
  std::vector<double> values;
  double x = 0.0;
  while (in >> x) values.push_back(x);
  if (!in.eof()) throw InputError(fmt::format("ansatz: non-numeric entry in orbital-rotation file '{}'", path));
  if (values.size() != n_spatial * n_spatial) {
    throw InputError(fmt::format("ansatz: orbital-rotation file '{}' has {} entries, expected {}x{}", path,
                                 values.size(), n_spatial, n_spatial));
  }
  const auto n = static_cast<Eigen::Index>(n_spatial);
  Eigen::MatrixXd u(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) u(r, c) = values[static_cast<std::size_t>(r * n + c)];
  if (!(u.transpose() * u).isApprox(Eigen::MatrixXd::Identity(n, n), 1e-10)) {
    throw InputError(fmt::format("ansatz: orbital rotation in '{}' is not orthogonal", path));
  }
  return u;
}

Eigen::MatrixXd spin_block_rotation(const Eigen::MatrixXd& spatial) {
  const Eigen::Index n = spatial.rows();
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  u.topLeftCorner(n, n) = spatial;
  u.bottomRightCorner(n, n) = spatial;
  return u;
}

}  // namespace qsegf
