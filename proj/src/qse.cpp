#include "qsegf/qse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "qsegf/error.hpp"

namespace qsegf {

const char* to_string(Sector s) { return s == Sector::EA ? "EA" : "IP"; }

SubspaceOperators subspace_operators(const PauliSum& h, Sector sector) {
  const std::size_t n = h.n_qubits();
  SubspaceOperators ops;
  ops.sector = sector;
  ops.n_so = n;
  ops.h_ops.resize(n * n);
  ops.s_ops.resize(n * n);

  // EA: left = c_i, right = c+_j.  IP: left = c+_i, right = c_j.
  std::vector<PauliSum> left(n), right(n), h_right(n);
  for (std::size_t p = 0; p < n; ++p) {
    left[p] = sector == Sector::EA ? jw_annihilation(p, n) : jw_creation(p, n);
    right[p] = sector == Sector::EA ? jw_creation(p, n) : jw_annihilation(p, n);
    h_right[p] = h * right[p];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      ops.h_ops[i * n + j] = left[i] * h_right[j];
      ops.s_ops[i * n + j] = left[i] * right[j];
    }
  }
  return ops;
}

SubspaceMatrices evaluate(const SubspaceOperators& ops, const Statevector& psi) {
  const auto n = static_cast<Eigen::Index>(ops.n_so);
  SubspaceMatrices m{CMatrix::Zero(n, n), CMatrix::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto k = static_cast<std::size_t>(i * n + j);
      m.h(i, j) = expectation(psi, ops.h_ops[k]);
      m.s(i, j) = expectation(psi, ops.s_ops[k]);
    }
  }
  return m;
}

SubspaceMatrices build_subspace_matrices(const Statevector& psi, const PauliSum& h, Sector sector) {
  return evaluate(subspace_operators(h, sector), psi);
}

GeneralizedEigen solve_generalized(const CMatrix& h_sub, const CMatrix& s_sub, double threshold) {
  if (h_sub.rows() != h_sub.cols() || s_sub.rows() != s_sub.cols() || h_sub.rows() != s_sub.rows()) {
    throw InputError("qse: subspace matrices must be square and of equal size");
  }
  const CMatrix h = 0.5 * (h_sub + h_sub.adjoint());
  const CMatrix s = 0.5 * (s_sub + s_sub.adjoint());

  Eigen::SelfAdjointEigenSolver<CMatrix> overlap(s);
  if (overlap.info() != Eigen::Success) throw NumericalError("qse: overlap eigendecomposition failed");
  const Eigen::VectorXd& sigma = overlap.eigenvalues();

  GeneralizedEigen out;
  out.overlap_eigenvalues = sigma;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) < -1e-10) ++out.negative_overlaps;
    if (sigma(k) >= threshold) kept.push_back(k);
  }
  if (kept.empty()) {
    throw NumericalError(fmt::format("qse: every overlap eigenvalue is below the threshold {:g} (largest {:g})",
                                     threshold, sigma.size() ? sigma.maxCoeff() : 0.0));
  }

  const auto r = static_cast<Eigen::Index>(kept.size());
  CMatrix y(s.rows(), r);
  for (Eigen::Index c = 0; c < r; ++c) {
    y.col(c) = overlap.eigenvectors().col(kept[static_cast<std::size_t>(c)]) / std::sqrt(sigma(kept[static_cast<std::size_t>(c)]));
  }
  const CMatrix projected = y.adjoint() * h * y;
  Eigen::SelfAdjointEigenSolver<CMatrix> reduced(0.5 * (projected + projected.adjoint()));
  if (reduced.info() != Eigen::Success) throw NumericalError("qse: projected eigendecomposition failed");
  out.energies = reduced.eigenvalues();
  out.coeffs = y * reduced.eigenvectors();
  return out;
}

CMatrix transition_amplitudes(const CMatrix& coeffs, const CMatrix& s_sub) {
  if (coeffs.rows() != s_sub.rows()) throw InputError("qse: coefficient and overlap shapes disagree");
  return coeffs.adjoint() * s_sub;
}

SubspaceResult solve_subspace(Sector sector, const SubspaceMatrices& m, double threshold) {
  GeneralizedEigen ge = solve_generalized(m.h, m.s, threshold);
  SubspaceResult r;
  r.sector = sector;
  r.h_sub = m.h;
  r.s_sub = m.s;
  r.energies = std::move(ge.energies);
  r.coeffs = std::move(ge.coeffs);
  r.amplitudes = transition_amplitudes(r.coeffs, 0.5 * (m.s + m.s.adjoint()));
  r.negative_overlaps = ge.negative_overlaps;
  return r;
}

SubspaceSample average(const std::vector<SubspaceSample>& samples) {
  if (samples.empty()) throw InputError("qse: cannot average zero samples");
  SubspaceSample acc = samples.front();
  for (std::size_t k = 1; k < samples.size(); ++k) {
    acc.ea.h += samples[k].ea.h;
    acc.ea.s += samples[k].ea.s;
    acc.ip.h += samples[k].ip.h;
    acc.ip.s += samples[k].ip.s;
  }
  const double scale = 1.0 / static_cast<double>(samples.size());
  acc.ea.h *= scale;
  acc.ea.s *= scale;
  acc.ip.h *= scale;
  acc.ip.s *= scale;
  return acc;
}

SampledSubspace sample_subspace_matrices(const Statevector& psi, const PauliSum& h, const ShotOptions& opts) {
  const std::size_t n = h.n_qubits();
  const SubspaceOperators ea = subspace_operators(h, Sector::EA);
  const SubspaceOperators ip = subspace_operators(h, Sector::IP);

  // Hermitian parts of every operator, in a fixed order.
  std::vector<std::pair<PauliSum, PauliSum>> split;
  for (const SubspaceOperators* ops : {&ea, &ip}) {
    for (const auto* list : {&ops->h_ops, &ops->s_ops}) {
      for (const auto& o : *list) split.push_back(hermitian_split(o));
    }
  }

  std::set<PauliString> strings;
  for (const auto& [a, b] : split) {
    for (const auto* part : {&a, &b})
      for (const auto& t : part->terms())
        if (!t.string.is_identity()) strings.insert(t.string);
  }

  SampledSubspace out;
  out.measured_strings.assign(strings.begin(), strings.end());
  std::map<PauliString, std::vector<double>> bin_values;
  for (std::size_t k = 0; k < out.measured_strings.size(); ++k) {
    const auto est = sample_expectation(psi, out.measured_strings[k], opts.shots, opts.bins, {opts.seed, k});
    bin_values.emplace(out.measured_strings[k], est.bin_means);
  }

  auto estimate = [&](const PauliSum& part, std::size_t bin) {
    double sum = 0.0;
    for (const auto& t : part.terms()) {
      const double value = t.string.is_identity() ? 1.0 : bin_values.at(t.string)[bin];
      sum += t.coeff.real() * value;
    }
    return sum;
  };

  const auto dim = static_cast<Eigen::Index>(n);
  out.bins.resize(opts.bins);
  for (std::size_t bin = 0; bin < opts.bins; ++bin) {
    std::size_t next = 0;
    for (SubspaceMatrices* target : {&out.bins[bin].ea, &out.bins[bin].ip}) {
      for (CMatrix* m : {&target->h, &target->s}) {
        m->resize(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
          for (Eigen::Index j = 0; j < dim; ++j) {
            const auto& [a, b] = split[next++];
            (*m)(i, j) = complex{estimate(a, bin), estimate(b, bin)};
          }
        }
      }
    }
  }
  return out;
}

}  // namespace qsegf
