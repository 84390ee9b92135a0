#include "qbs/floquet.hpp"

#include <cmath>
#include <string>

#include "qbs/ode.hpp"

namespace qbs {

void FloquetParams::validate() const {
  if (!(delta_mod > 0.0) || !std::isfinite(delta_mod))
    throw InvalidParameter("modulation frequency must be positive");
  if (!(a_mod >= 0.0) || !std::isfinite(a_mod)) throw InvalidParameter("modulation depth must be >= 0");
  if (!(g_prime >= 0.0) || !std::isfinite(g_prime)) throw InvalidParameter("g' must be >= 0");
  if (!std::isfinite(phi_prime) || !std::isfinite(omega0)) throw InvalidParameter("non-finite phase or frequency");
  if (!(eta1 > 0.0) || !(eta2 > 0.0)) throw InvalidParameter("waveguide couplings must be positive");
  if (a_mod / delta_mod > 4.0) throw InvalidParameter("A/Delta beyond the series range (4)");
}

bool FloquetParams::rwa_regime() const { return delta_mod >= 10.0 * std::max(a_mod, g_prime); }

double bessel_j(int n, double x) {
  if (n < 0) throw InvalidParameter("bessel order must be >= 0");
  if (std::abs(x) > 4.0) throw InvalidParameter("bessel series limited to |x| <= 4");
  const double h = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= h / k;
  double sum = term;
  const double h2 = h * h;
  for (int k = 1; k < 40; ++k) {
    term *= -h2 / (static_cast<double>(k) * (k + n));
    sum += term;
  }
  return sum;
}

EffectiveCoupling effective_coupling(const FloquetParams& fp) {
  fp.validate();
  const double x = fp.a_mod / fp.delta_mod;
  // e^{i phi'} pulled out so that A = 0 maps back onto (g'/2, phi') without rounding
  const cplx rel = bessel_j(0, x) + bessel_j(2, x) * std::polar(1.0, -2.0 * fp.phi_prime);
  return {0.5 * fp.g_prime * std::abs(rel), wrap_phase(fp.phi_prime + std::arg(rel))};
}

double balance_modulation_depth(double eta_ratio) {
  if (!(eta_ratio > 0.0)) throw InvalidParameter("eta ratio must be positive");
  if (eta_ratio > kJ1Max)
    throw NoSolution("J1 never reaches " + std::to_string(eta_ratio) + " (max " +
                     std::to_string(kJ1Max) + ")");
  // J1 rises monotonically on (0, kJ1MaxArg)
  double lo = 0.0, hi = kJ1MaxArg;
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (bessel_j(1, mid) < eta_ratio)
      lo = mid;
    else
      hi = mid;
  }
  const double x = 0.5 * (lo + hi);
  if (std::abs(bessel_j(1, x) - eta_ratio) > 1e-12)
    throw NoSolution("balance root did not converge");
  return x;
}

Trajectory simulate_modulated_pair(const FloquetParams& fp, double t_end,
                                   const Eigen::Vector4cd& initial, int samples) {
  fp.validate();
  if (!(t_end > 0.0) || samples < 2) throw InvalidParameter("need t_end > 0 and >= 2 samples");
  if (std::abs(initial.norm() - 1.0) > 1e-12) throw InvalidParameter("initial state not normalized");
  const double D = fp.delta_mod;
  const double x = fp.a_mod / D;
  using State = std::vector<cplx>;
  // basis {gg, ge, eg, ee}; s1+ s2 takes |ge> to |eg>
  auto rhs = [&](const State& y, State& dydt, double t) {
    const cplx h = fp.g_prime * std::cos(D * t + fp.phi_prime) *
                   std::exp(kI * (-D * t + x * std::sin(D * t)));
    dydt[0] = 0.0;
    dydt[1] = -kI * std::conj(h) * y[2];
    dydt[2] = -kI * h * y[1];
    dydt[3] = 0.0;
  };
  Trajectory tr;
  tr.times.resize(samples);
  for (int i = 0; i < samples; ++i) tr.times[i] = t_end * i / (samples - 1);
  OdeOptions opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-11;
  opt.max_step = 2.0 * kPi / (20.0 * D);
  opt.min_step = 1e-6 * opt.max_step;
  const auto states =
      integrate_samples(rhs, State(initial.data(), initial.data() + 4), 0.0, tr.times, opt);
  tr.states.reserve(states.size());
  for (const auto& y : states) {
    Eigen::Vector4cd v(y[0], y[1], y[2], y[3]);
    if (std::abs(v.norm() - 1.0) > 1e-9)
      throw IntegratorFailure("norm drifted to " + std::to_string(v.norm()));
    tr.states.push_back(v);
  }
  return tr;
}

Eigen::Vector4cd evolve_effective(const EffectiveCoupling& c, double t,
                                  const Eigen::Vector4cd& initial) {
  // exp(-iHt) on the {ge, eg} pair with H = [[0, c*], [c, 0]]
  const cplx k = c.value();
  const double w = c.g_eff_mag;
  const double cs = std::cos(w * t);
  const cplx sn = w > 0.0 ? std::sin(w * t) / w : cplx(t);
  Eigen::Vector4cd out = initial;
  out(1) = cs * initial(1) - kI * sn * std::conj(k) * initial(2);
  out(2) = cs * initial(2) - kI * sn * k * initial(1);
  return out;
}

double validate_rwa(const FloquetParams& fp, double t_end, int samples) {
  const Eigen::Vector4cd eg(0.0, 0.0, 1.0, 0.0);
  const auto coupling = effective_coupling(fp);
  const auto tr = simulate_modulated_pair(fp, t_end, eg, samples);
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const Eigen::Vector4cd eff = evolve_effective(coupling, tr.times[i], eg);
    worst = std::max(worst, 1.0 - std::norm(eff.dot(tr.states[i])));
  }
  return worst;
}

}  // namespace qbs
