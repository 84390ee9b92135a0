#include "qbs/hom.hpp"

#include <cmath>
#include <string>

#include "qbs/single_photon.hpp"

namespace qbs {

HomAmplitudes hom_amplitudes(const QbsParams& params, double p) {
  const auto s = scattering_set(params, p);
  const double rt2 = std::sqrt(2.0);
  return {rt2 * s.r_rl * s.t_ll, rt2 * s.r_lr * s.t_rr, s.r_rl * s.r_lr + s.t_ll * s.t_rr, p};
}

HomWeights hom_weights(const HomAmplitudes& a) {
  return {4.0 * std::norm(a.a_ll) + std::norm(a.a_lr), 4.0 * std::norm(a.a_rr) + std::norm(a.a_lr)};
}

namespace {

double port_weight(const QbsParams& params, double p, Port port) {
  const auto w = hom_weights(hom_amplitudes(params, p));
  const double n2 = port == Port::Left ? w.n2_left : w.n2_right;
  if (n2 < kDarkPortTolerance)
    throw VanishingOutput("HOM output weight " + std::to_string(n2) + " is below tolerance");
  return n2;
}

}  // namespace

double hom_g2(const QbsParams& params, double p, double tau, Port port) {
  const double n2 = port_weight(params, p, port);
  const Channel ch = channel_for(Direction::Right, Direction::Left, port);
  return kHomNormalization * std::norm(psi2_channel(params, p, tau, ch)) / n2;
}

double hom_g2_zero(const QbsParams& params, double p, Port port) {
  const double n2 = port_weight(params, p, port);
  const auto s = scattering_set(params, p);
  const double G = params.gamma();
  return kHomNormalization * 4.0 * std::norm(1.0 - G / (G - kI * p)) * std::norm(s.r_rl) / n2;
}

double hom_g2_zero_balanced(double p, double gamma) {
  return kHomNormalization * std::norm(1.0 - gamma / (gamma - kI * p));
}

CorrelationCurve hom_g2_curve(const QbsParams& params, double p,
                              std::span<const double> tau_grid, Port port) {
  require_tau_grid(tau_grid);
  const double n2 = port_weight(params, p, port);
  const Channel ch = channel_for(Direction::Right, Direction::Left, port);
  CorrelationCurve curve{port, InputKind::FockHom, {tau_grid.begin(), tau_grid.end()}, {}};
  curve.g2_values.reserve(tau_grid.size());
  for (double tau : tau_grid)
    curve.g2_values.push_back(kHomNormalization * std::norm(psi2_channel(params, p, tau, ch)) / n2);
  return curve;
}

namespace {

double imbalance(double g, double theta, double p, double phi, double gamma) {
  return std::norm(scattering_set(QbsParams(g, phi, theta, gamma), p).r_rl) - 0.5;
}

}  // namespace

std::optional<double> find_balanced_phase(double g, double theta, double p, double phi_lo,
                                          double phi_hi, double gamma) {
  double f_lo = imbalance(g, theta, p, phi_lo, gamma);
  const double f_hi = imbalance(g, theta, p, phi_hi, gamma);
  if (f_lo == 0.0) return phi_lo;
  if (f_hi == 0.0) return phi_hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) return std::nullopt;
  while (phi_hi - phi_lo > 1e-13) {
    const double mid = 0.5 * (phi_lo + phi_hi);
    const double f_mid = imbalance(g, theta, p, mid, gamma);
    if (std::abs(f_mid) < 1e-15) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      phi_lo = mid;
      f_lo = f_mid;
    } else {
      phi_hi = mid;
    }
  }
  return 0.5 * (phi_lo + phi_hi);
}

std::vector<double> balanced_phases(double g, double theta, double p, int scan, double gamma) {
  std::vector<double> roots;
  for (int i = 0; i < scan; ++i) {
    const double a = -kPi + 2.0 * kPi * i / scan;
    const double b = -kPi + 2.0 * kPi * (i + 1) / scan;
    try {
      if (auto root = find_balanced_phase(g, theta, p, a, b, gamma)) {
        if (roots.empty() || *root - roots.back() > 1e-9) roots.push_back(*root);
      }
    } catch (const DegenerateResolvent&) {
    }
  }
  return roots;
}

}  // namespace qbs
