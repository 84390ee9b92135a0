#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "qbs/errors.hpp"

namespace qbs {

struct OdeOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  double min_step = 1e-6;
  double initial_step = 1e-3;
  long max_steps = 50'000'000;
};

// Adaptive Dormand-Prince 5(4) from y0 at t0 through each sample time
// (ascending, >= t0). Returns the state at every sample.
template <class State, class System>
std::vector<State> integrate_samples(System&& system, State y, double t0,
                                     std::span<const double> samples, const OdeOptions& opt = {}) {
  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol, opt.max_step,
                                         odeint::runge_kutta_dopri5<State>());
  std::vector<State> out;
  out.reserve(samples.size());
  double t = t0;
  double dt = std::min(opt.initial_step, opt.max_step);
  long steps = 0;
  for (double target : samples) {
    if (target < t) throw IntegratorFailure("sample times must be ascending");
    while (t < target) {
      const double remaining = target - t;
      const bool clipped = dt >= remaining;
      double trial = clipped ? remaining : dt;
      const auto res = stepper.try_step(system, y, t, trial);
      if (res == odeint::success) {
        // keep the proposed size unless the step was only clipped to land on target
        if (!clipped || trial > dt) dt = trial;
        if (clipped) t = target;
      } else {
        dt = trial;
        if (dt < opt.min_step)
          throw IntegratorFailure("step size fell below floor at t = " + std::to_string(t));
      }
      if (++steps > opt.max_steps) throw IntegratorFailure("step budget exhausted");
    }
    out.push_back(y);
  }
  return out;
}

}  // namespace qbs
