#include "qsegf/integrals.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "qsegf/error.hpp"

namespace qsegf {
namespace {

constexpr double kDuplicateTolerance = 1e-12;

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

std::string strip_whitespace(const std::string& s) {
  std::string out;
  std::copy_if(s.begin(), s.end(), std::back_inserter(out),
               [](unsigned char c) { return !std::isspace(c); });
  return out;
}

long parse_integer(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    long value = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw InputError(fmt::format("integrals: malformed FCIDUMP header value {}='{}'", key, text));
  }
}

struct Header {
  long norb = -1;
  long nelec = -1;
  long ms2 = 0;
};

// Reads the namelist block "&FCI ... &END" (or "/" terminated).
Header read_header(std::istream& in) {
  std::string text;
  std::string line;
  bool started = false;
  bool finished = false;
  while (std::getline(in, line)) {
    std::string u = upper(line);
    if (!started) {
      auto pos = u.find("&FCI");
      if (pos == std::string::npos) {
        if (strip_whitespace(u).empty()) continue;
        throw InputError("integrals: malformed FCIDUMP header (expected '&FCI')");
      }
      started = true;
      u = u.substr(pos + 4);
    }
    auto end = u.find("&END");
    if (end == std::string::npos) end = u.find('/');
    if (end != std::string::npos) {
      text += u.substr(0, end);
      finished = true;
      break;
    }
    text += u;
    text += ',';
  }
  if (!started || !finished) {
    throw InputError("integrals: malformed FCIDUMP header (missing '&END' or '/')");
  }

  std::map<std::string, std::string> fields;
  std::stringstream ss(strip_whitespace(text));
  std::string token;
  while (std::getline(ss, token, ',')) {
    auto eq = token.find('=');
    if (eq == std::string::npos) continue;  // continuation of a list value (ORBSYM)
    fields[token.substr(0, eq)] = token.substr(eq + 1);
  }

  Header h;
  if (!fields.count("NORB") || !fields.count("NELEC")) {
    throw InputError("integrals: malformed FCIDUMP header (NORB and NELEC are required)");
  }
  h.norb = parse_integer("NORB", fields["NORB"]);
  h.nelec = parse_integer("NELEC", fields["NELEC"]);
  if (fields.count("MS2")) h.ms2 = parse_integer("MS2", fields["MS2"]);
  if (h.norb <= 0) throw InputError("integrals: NORB must be positive");
  if (h.nelec < 0) throw InputError("integrals: NELEC must be non-negative");
  return h;
}

double parse_value(std::string text, std::size_t line_no) {
  std::replace(text.begin(), text.end(), 'D', 'E');
  std::replace(text.begin(), text.end(), 'd', 'e');
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InputError(fmt::format("integrals: bad value '{}' on FCIDUMP body line {}", text, line_no));
  }
}

// Stores `value` at `slot`, enforcing the duplicate rule.
void store(std::optional<double>& seen, double& slot, double value, std::size_t line_no) {
  if (seen && std::abs(*seen - value) > kDuplicateTolerance) {
    throw InputError(fmt::format(
        "integrals: conflicting duplicate FCIDUMP entry on line {} ({} vs {})", line_no, *seen, value));
  }
  seen = value;
  slot = value;
}

}  // namespace

MolecularIntegrals parse_fcidump(std::istream& in) {
  const Header header = read_header(in);
  const auto n = static_cast<std::size_t>(header.norb);

  MolecularIntegrals mi;
  mi.n_spatial = n;
  mi.n_electrons = static_cast<std::size_t>(header.nelec);
  mi.ms2 = static_cast<int>(header.ms2);
  mi.h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  mi.v = Tensor4(n);

  // Canonical-key bookkeeping for the duplicate rule.
  std::map<std::array<std::size_t, 4>, std::optional<double>> seen_two;
  std::map<std::array<std::size_t, 2>, std::optional<double>> seen_one;
  std::optional<double> seen_core;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string value_text;
    if (!(ls >> value_text)) continue;
    std::array<long, 4> idx{};
    for (auto& k : idx) {
      if (!(ls >> k)) {
        throw InputError(fmt::format("integrals: FCIDUMP body line {} needs 'value i j k l'", line_no));
      }
    }
    const double value = parse_value(value_text, line_no);
    for (long k : idx) {
      if (k < 0 || k > header.norb) {
        throw InputError(fmt::format("integrals: index {} out of range [1, {}] on FCIDUMP body line {}", k,
                                     header.norb, line_no));
      }
    }
    const auto [i, j, k, l] = idx;
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      store(seen_core, mi.e_core, value, line_no);
    } else if (k == 0 && l == 0) {
      if (j == 0) continue;  // orbital energy line, not needed
      if (i == 0) {
        throw InputError(fmt::format("integrals: index 0 out of range [1, {}] on FCIDUMP body line {}",
                                     header.norb, line_no));
      }
      std::size_t a = static_cast<std::size_t>(i - 1), b = static_cast<std::size_t>(j - 1);
      auto key = std::array{std::max(a, b), std::min(a, b)};
      double tmp = 0.0;
      store(seen_one[key], tmp, value, line_no);
      mi.h(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = value;
      mi.h(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = value;
    } else {
      if (i == 0 || j == 0 || k == 0 || l == 0) {
        throw InputError(fmt::format("integrals: index 0 out of range [1, {}] on FCIDUMP body line {}",
                                     header.norb, line_no));
      }
      std::size_t p = static_cast<std::size_t>(i - 1), q = static_cast<std::size_t>(j - 1);
      std::size_t r = static_cast<std::size_t>(k - 1), s = static_cast<std::size_t>(l - 1);
      std::array<std::size_t, 2> ij{std::max(p, q), std::min(p, q)};
      std::array<std::size_t, 2> kl{std::max(r, s), std::min(r, s)};
      if (ij < kl) std::swap(ij, kl);
      double tmp = 0.0;
      store(seen_two[{ij[0], ij[1], kl[0], kl[1]}], tmp, value, line_no);
      for (auto [a, b, c, d] : {std::array{p, q, r, s}, std::array{q, p, r, s}, std::array{p, q, s, r},
                                std::array{q, p, s, r}, std::array{r, s, p, q}, std::array{s, r, p, q},
                                std::array{r, s, q, p}, std::array{s, r, q, p}}) {
        mi.v(a, b, c, d) = value;
      }
    }
  }
  validate(mi);
  return mi;
}

MolecularIntegrals read_fcidump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("integrals: cannot open FCIDUMP file '{}'", path));
  try {
    return parse_fcidump(in);
  } catch (const InputError& e) {
    throw InputError(fmt::format("{} (file '{}')", e.what(), path));
  }
}

void write_fcidump(std::ostream& out, const MolecularIntegrals& mi) {
  const std::size_t n = mi.n_spatial;
  out << fmt::format(" &FCI NORB={},NELEC={},MS2={},\n  ORBSYM=", n, mi.n_electrons, mi.ms2);
  for (std::size_t i = 0; i < n; ++i) out << "1,";
  out << "\n  ISYM=1,\n &END\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          const double value = mi.v(i, j, k, l);
          if (value == 0.0) continue;
          out << fmt::format("{} {} {} {} {}\n", value, i + 1, j + 1, k + 1, l + 1);
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double value = mi.h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (value == 0.0) continue;
      out << fmt::format("{} {} {} 0 0\n", value, i + 1, j + 1);
    }
  }
  out << fmt::format("{} 0 0 0 0\n", mi.e_core);
}

void validate(const MolecularIntegrals& mi) {
  const std::size_t n = mi.n_spatial;
  if (static_cast<std::size_t>(mi.h.rows()) != n || static_cast<std::size_t>(mi.h.cols()) != n ||
      mi.v.extent() != n) {
    throw InputError("integrals: tensor shapes do not match n_spatial");
  }
  if (mi.n_electrons > 2 * n) {
    throw InputError(fmt::format("integrals: {} electrons do not fit in {} spatial orbitals", mi.n_electrons, n));
  }
  if (n > 0 && (mi.h - mi.h.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InputError("integrals: one-body integrals are not symmetric");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          const double x = mi.v(i, j, k, l);
          for (double y : {mi.v(j, i, k, l), mi.v(i, j, l, k), mi.v(k, l, i, j)}) {
            if (std::abs(x - y) > 1e-12) {
              throw InputError("integrals: two-body integrals lack 8-fold permutational symmetry");
            }
          }
        }
}

SpinOrbitalHamiltonian to_spin_orbitals(const MolecularIntegrals& mi) {
  const std::size_t n = mi.n_spatial;
  const std::size_t n_so = 2 * n;
  SpinOrbitalHamiltonian soh;
  soh.n_so = n_so;
  soh.e_core = mi.e_core;
  soh.h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_so), static_cast<Eigen::Index>(n_so));
  soh.v = Tensor4(n_so);

  auto spin = [n](std::size_t p) { return p / n; };
  auto orb = [n](std::size_t p) { return p % n; };

  for (std::size_t p = 0; p < n_so; ++p)
    for (std::size_t q = 0; q < n_so; ++q)
      if (spin(p) == spin(q))
        soh.h(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) =
            mi.h(static_cast<Eigen::Index>(orb(p)), static_cast<Eigen::Index>(orb(q)));

  // v_pqrs = (p r | q s) with spin(p) == spin(r) and spin(q) == spin(s).
  for (std::size_t p = 0; p < n_so; ++p)
    for (std::size_t q = 0; q < n_so; ++q)
      for (std::size_t r = 0; r < n_so; ++r) {
        if (spin(p) != spin(r)) continue;
        for (std::size_t s = 0; s < n_so; ++s) {
          if (spin(q) != spin(s)) continue;
          soh.v(p, q, r, s) = mi.v(orb(p), orb(r), orb(q), orb(s));
        }
      }
  return soh;
}

MolecularIntegrals rotate_orbitals(const MolecularIntegrals& mi, const Eigen::MatrixXd& u) {
  const auto n = static_cast<Eigen::Index>(mi.n_spatial);
  if (u.rows() != n || u.cols() != n) {
    throw InputError(fmt::format("integrals: rotation is {}x{}, expected {}x{}", u.rows(), u.cols(), n, n));
  }
  if (!(u.transpose() * u).isApprox(Eigen::MatrixXd::Identity(n, n), 1e-10)) {
    throw InputError("integrals: orbital rotation is not orthogonal");
  }
  MolecularIntegrals out = mi;
  out.h = u * mi.h * u.transpose();

  // Four quarter transformations, one index at a time.
  const auto m = static_cast<std::size_t>(n);
  Tensor4 a = mi.v;
  for (int axis = 0; axis < 4; ++axis) {
    Tensor4 b(m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k)
          for (std::size_t l = 0; l < m; ++l) {
            std::array<std::size_t, 4> idx{i, j, k, l};
            const std::size_t target = idx[static_cast<std::size_t>(axis)];
            double sum = 0.0;
            for (std::size_t x = 0; x < m; ++x) {
              idx[static_cast<std::size_t>(axis)] = x;
              sum += u(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(x)) *
                     a(idx[0], idx[1], idx[2], idx[3]);
            }
            b(i, j, k, l) = sum;
          }
    a = std::move(b);
  }
  // Symmetrize away roundoff so the 8-fold invariant holds exactly.
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) {
          const double avg = (a(i, j, k, l) + a(j, i, k, l) + a(i, j, l, k) + a(j, i, l, k) + a(k, l, i, j) +
                              a(l, k, i, j) + a(k, l, j, i) + a(l, k, j, i)) /
                             8.0;
          out.v(i, j, k, l) = avg;
        }
  out.h = 0.5 * (out.h + out.h.transpose()).eval();
  return out;
}

}  // namespace qsegf
