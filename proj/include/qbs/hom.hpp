#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qbs/core_model.hpp"
#include "qbs/two_photon.hpp"

namespace qbs {

// One photon enters from each side.
struct HomAmplitudes {
  cplx a_ll;  // both leave left, sqrt2 r_rl t_ll
  cplx a_rr;  // both leave right, sqrt2 r_lr t_rr
  cplx a_lr;  // one each way, r_rl r_lr + t_ll t_rr
  double p;

  double norm_sum() const { return std::norm(a_ll) + std::norm(a_rr) + std::norm(a_lr); }
};

// Mean squared photon number per port: 4|a_pp|^2 + |a_lr|^2.
struct HomWeights {
  double n2_left;
  double n2_right;
};

HomAmplitudes hom_amplitudes(const QbsParams& params, double p);
HomWeights hom_weights(const HomAmplitudes& amps);

// Overall constant in g2 = kHomNormalization * |Psi_TS(tau)|^2 / n2. With the
// envelopes of two_photon the plateau at a balanced point is then 1/2.
inline constexpr double kHomNormalization = 1.0;

double hom_g2(const QbsParams& params, double p, double tau, Port port);
// 4 |1 - G/(G - ip)|^2 |r|^2 / n2
double hom_g2_zero(const QbsParams& params, double p, Port port);
// Value of hom_g2_zero wherever |r|^2 = 1/2: |1 - G/(G - ip)|^2.
double hom_g2_zero_balanced(double p, double gamma = 1.0);
CorrelationCurve hom_g2_curve(const QbsParams& params, double p,
                              std::span<const double> tau_grid, Port port);

// phi in [phi_lo, phi_hi] with |r_rl|^2 = 1/2, by bisection to 1e-13. The
// bracket must straddle the crossing.
std::optional<double> find_balanced_phase(double g, double theta, double p, double phi_lo,
                                          double phi_hi, double gamma = 1.0);
// All crossings on (-pi, pi] located from a scan with `scan` cells.
std::vector<double> balanced_phases(double g, double theta, double p, int scan = 720,
                                    double gamma = 1.0);

}  // namespace qbs
