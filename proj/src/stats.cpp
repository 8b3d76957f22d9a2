#include "qsegf/stats.hpp"

#include <cmath>
#include <future>
#include <numeric>

#include <fmt/format.h>

#include "qsegf/error.hpp"

namespace qsegf {

std::vector<double> bin_means(std::span<const double> samples, std::size_t m) {
  if (m == 0 || samples.size() % m != 0) {
    throw InputError(fmt::format("stats: {} samples cannot be split into {} equal bins", samples.size(), m));
  }
  const std::size_t width = samples.size() / m;
  std::vector<double> out(m);
  for (std::size_t b = 0; b < m; ++b) {
    const auto first = samples.begin() + static_cast<std::ptrdiff_t>(b * width);
    out[b] = std::accumulate(first, first + static_cast<std::ptrdiff_t>(width), 0.0) / static_cast<double>(width);
  }
  return out;
}

JackknifeEstimate jackknife(double u0, std::span<const double> leave_one_out) {
  const std::size_t m = leave_one_out.size();
  if (m < 2) throw InputError(fmt::format("stats: jackknife needs at least 2 bins, got {}", m));
  const double md = static_cast<double>(m);
  const double u_bar = std::accumulate(leave_one_out.begin(), leave_one_out.end(), 0.0) / md;
  double var = 0.0;
  for (double u : leave_one_out) var += (u - u_bar) * (u - u_bar);
  var /= md;
  return {u0 - (md - 1.0) * (u_bar - u0), std::sqrt(md - 1.0) * std::sqrt(std::max(var, 0.0)), m};
}

JackknifeEstimate jackknife(std::span<const double> bins) {
  const std::size_t m = bins.size();
  if (m < 2) throw InputError(fmt::format("stats: jackknife needs at least 2 bins, got {}", m));
  const double total = std::accumulate(bins.begin(), bins.end(), 0.0);
  std::vector<double> loo(m);
  for (std::size_t i = 0; i < m; ++i) loo[i] = (total - bins[i]) / static_cast<double>(m - 1);
  return jackknife(total / static_cast<double>(m), loo);
}

GreensFunction propagate(const std::vector<SubspaceSample>& bins, const GreensPipeline& pipeline) {
  const std::size_t m = bins.size();
  if (m < 2) throw InputError(fmt::format("stats: propagation needs at least 2 bins, got {}", m));

  GreensFunction full = pipeline(average(bins));
  // Subsamples are independent; results are collected in index order.
  std::vector<std::future<GreensFunction>> jobs;
  jobs.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<SubspaceSample> rest;
    rest.reserve(m - 1);
    for (std::size_t k = 0; k < m; ++k)
      if (k != i) rest.push_back(bins[k]);
    jobs.push_back(std::async(std::launch::async, [&pipeline, rest = std::move(rest)] { return pipeline(average(rest)); }));
  }
  std::vector<GreensFunction> loo;
  loo.reserve(m);
  std::string failure;
  for (std::size_t i = 0; i < m; ++i) {
    try {
      loo.push_back(jobs[i].get());
    } catch (const Error& e) {
      if (failure.empty()) failure = fmt::format("stats: pipeline failed on leave-one-out subsample {}: {}", i, e.what());
      continue;
    }
    if (!(loo.back().grid == full.grid) || loo.back().values.size() != full.values.size()) {
      if (failure.empty()) failure = fmt::format("stats: subsample {} produced a different grid", i);
    }
  }
  if (!failure.empty()) throw NumericalError(failure);

  GreensFunction out;
  out.grid = full.grid;
  const auto dim = static_cast<Eigen::Index>(full.n_so());
  out.values.assign(full.values.size(), CMatrix::Zero(dim, dim));
  out.re_err.assign(full.values.size(), Eigen::MatrixXd::Zero(dim, dim));
  out.im_err.assign(full.values.size(), Eigen::MatrixXd::Zero(dim, dim));
  std::vector<double> re(m), im(m);
  for (std::size_t n = 0; n < full.values.size(); ++n) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
          re[k] = loo[k].values[n](i, j).real();
          im[k] = loo[k].values[n](i, j).imag();
        }
        const auto jr = jackknife(full.values[n](i, j).real(), re);
        const auto ji = jackknife(full.values[n](i, j).imag(), im);
        out.values[n](i, j) = {jr.mean, ji.mean};
        out.re_err[n](i, j) = jr.std;
        out.im_err[n](i, j) = ji.std;
      }
    }
  }
  return out;
}

double excess_kurtosis(std::span<const double> values) {
  if (values.empty()) throw InputError("stats: kurtosis of an empty sequence");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = (v - mean) * (v - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  if (m2 == 0.0) return 0.0;
  return m4 / (m2 * m2) - 3.0;
}

}  // namespace qsegf
