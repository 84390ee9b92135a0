#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "qbs/core_model.hpp"

namespace testing {

using qbs::cplx;

struct Draw {
  double g, phi, theta, p;
};

// g in [0, g_max], theta in [0, 2pi), phi in (-pi, pi], p in [-p_max, p_max]
inline Draw draw(std::mt19937_64& rng, double g_max = 3.0, double p_max = 5.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {g_max * u(rng), qbs::kPi * (2 * u(rng) - 1), 2 * qbs::kPi * u(rng), p_max * (2 * u(rng) - 1)};
}

inline double max_abs_diff(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testing
