#include "qsegf/vqe.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <spdlog/spdlog.h>

#include "qsegf/simulator.hpp"

namespace qsegf {

double energy(const PauliSum& h, const QccCircuit& c, std::span<const double> theta) {
  return expectation(prepare_state(c, theta), h).real();
}

std::vector<double> energy_gradient(const PauliSum& h, const QccCircuit& c, std::span<const double> theta) {
  std::vector<double> shifted(theta.begin(), theta.end());
  std::vector<double> grad(theta.size());
  constexpr double kShift = std::numbers::pi / 2;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    shifted[k] = theta[k] + kShift;
    const double plus = energy(h, c, shifted);
    shifted[k] = theta[k] - kShift;
    const double minus = energy(h, c, shifted);
    shifted[k] = theta[k];
    grad[k] = 0.5 * (plus - minus);
  }
  return grad;
}

VqeResult minimize(const PauliSum& h, const QccCircuit& c, const VqeOptions& opts) {
  const auto n = static_cast<Eigen::Index>(c.generators.size());
  auto to_span = [](const Eigen::VectorXd& v) { return std::span<const double>(v.data(), static_cast<std::size_t>(v.size())); };
  auto grad_at = [&](const Eigen::VectorXd& x) {
    auto g = energy_gradient(h, c, to_span(x));
    return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(g.data(), n));
  };

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  double fx = energy(h, c, to_span(x));
  Eigen::VectorXd g = grad_at(x);
  Eigen::MatrixXd inv_hess = Eigen::MatrixXd::Identity(n, n);

  VqeResult result;
  result.energy_trace.push_back(fx);

  std::size_t iter = 0;
  while (n > 0 && g.norm() >= opts.gtol && iter < opts.max_iter) {
    Eigen::VectorXd dir = -inv_hess * g;
    if (dir.dot(g) >= 0) {  // not a descent direction; reset the curvature model
      inv_hess.setIdentity();
      dir = -g;
    }
    // Backtracking Armijo search.
    double step = 1.0;
    Eigen::VectorXd x_new;
    double f_new = fx;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      x_new = x + step * dir;
      f_new = energy(h, c, to_span(x_new));
      if (f_new <= fx + 1e-4 * step * g.dot(dir)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++iter;
    if (!accepted) {
      spdlog::debug("vqe: line search stalled at iteration {}", iter);
      if (inv_hess.isIdentity()) break;
      inv_hess.setIdentity();
      result.energy_trace.push_back(fx);
      continue;
    }
    const Eigen::VectorXd g_new = grad_at(x_new);
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-14) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
      inv_hess = (eye - rho * s * y.transpose()) * inv_hess * (eye - rho * y * s.transpose()) + rho * s * s.transpose();
    }
    x = x_new;
    fx = f_new;
    g = g_new;
    result.energy_trace.push_back(fx);
  }

  result.theta.assign(x.data(), x.data() + n);
  result.energy = fx;
  result.iterations = iter;
  result.gradient_norm = g.norm();
  result.converged = n == 0 || result.gradient_norm < opts.gtol;
  if (!result.converged) {
    spdlog::warn("vqe: not converged after {} iterations (|grad| = {:.3e})", iter, result.gradient_norm);
  }
  return result;
}

}  // namespace qsegf
