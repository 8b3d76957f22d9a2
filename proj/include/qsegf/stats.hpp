#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qsegf/greens.hpp"
#include "qsegf/qse.hpp"

namespace qsegf {

/// Means of `m` contiguous, equally sized bins. Throws InputError when the
/// length is not divisible by m.
std::vector<double> bin_means(std::span<const double> samples, std::size_t m);

struct JackknifeEstimate {
  double mean = 0.0;  // bias-corrected
  double std = 0.0;
  std::size_t bins = 0;
};

/// Jackknife of a statistic from its full-sample value u0 and its M
/// leave-one-out values u_i:
///   U  = u0 - (M - 1)(mean(u_i) - u0)
///   dU = sqrt(M - 1) * sqrt(mean((u_i - mean(u_i))^2))
JackknifeEstimate jackknife(double u0, std::span<const double> leave_one_out);

/// Jackknife of the plain mean of `bins` (M >= 2).
JackknifeEstimate jackknife(std::span<const double> bins);

using GreensPipeline = std::function<GreensFunction(const SubspaceSample&)>;

/// Runs `pipeline` on the average of all bins and on each leave-one-out
/// average, then jackknifes every real and imaginary element independently.
/// The returned values are the bias-corrected means.
GreensFunction propagate(const std::vector<SubspaceSample>& bins, const GreensPipeline& pipeline);

/// Sample excess kurtosis m4 / m2^2 - 3 (0 for a constant sequence).
double excess_kurtosis(std::span<const double> values);

}  // namespace qsegf
