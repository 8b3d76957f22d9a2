#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qsegf/ansatz.hpp"
#include "qsegf/pauli.hpp"

namespace qsegf {

struct VqeOptions {
  double gtol = 1e-7;
  std::size_t max_iter = 500;
};

struct VqeResult {
  std::vector<double> theta;
  double energy = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
  /// Best energy after each iteration (entry 0 is the starting point).
  std::vector<double> energy_trace;
};

/// <psi(theta)|H|psi(theta)>, exact.
double energy(const PauliSum& h, const QccCircuit& c, std::span<const double> theta);

/// Parameter-shift gradient, dE/dtheta_k = [E(theta_k + pi/2) - E(theta_k - pi/2)] / 2.
std::vector<double> energy_gradient(const PauliSum& h, const QccCircuit& c, std::span<const double> theta);

/// Quasi-Newton (BFGS) descent from theta = 0 with a backtracking Armijo line
/// search, driven by parameter-shift gradients. Stops when the gradient
/// 2-norm drops below gtol; otherwise returns the best point found with
/// converged = false.
VqeResult minimize(const PauliSum& h, const QccCircuit& c, const VqeOptions& opts = {});

}  // namespace qsegf
