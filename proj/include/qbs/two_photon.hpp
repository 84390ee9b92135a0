#pragma once

#include <span>
#include <vector>

#include "qbs/core_model.hpp"
#include "qbs/single_photon.hpp"

namespace qbs {

enum class Port { Left, Right };

// Input pair -> output port. RR: both photons right-moving, LL: both
// left-moving, TS: one from each side.
enum class Channel { RR_to_L, RR_to_R, LL_to_L, LL_to_R, TS_to_L, TS_to_R };

Port output_port(Channel ch);
Channel channel_for(Direction first, Direction second, Port out);

enum class InputKind { CoherentBoth, FockHom };

struct TwoPhotonEnvelope {
  std::vector<double> tau_grid;
  std::vector<cplx> values;
  Channel channel;
};

struct CorrelationCurve {
  Port port;
  InputKind input_kind;
  std::vector<double> tau_grid;
  std::vector<double> g2_values;
};

// Envelope of the two-photon output with the plane-wave factor and 1/2pi
// dropped. Tends to 2 A_1 A_2 (single-photon amplitudes) as tau grows.
cplx psi2_channel(const QbsParams& params, double p, double tau, Channel ch);
TwoPhotonEnvelope envelope(const QbsParams& params, double p, std::span<const double> tau_grid,
                           Channel ch);

// Equal-amplitude coherent drive from both sides.
double g2_coherent(const QbsParams& params, double p, double tau, Port port);
// Dedicated tau = 0 form in terms of r and t.
double g2_zero_coherent(const QbsParams& params, double p, Port port);
// Same at p = 0, written through D(0).
double g2_zero_resonant(const QbsParams& params, Port port);
CorrelationCurve g2_curve(const QbsParams& params, double p, std::span<const double> tau_grid,
                          Port port);

// Geometric spacing near 0 then linear out to tau_max; both endpoints included.
std::vector<double> default_tau_grid(std::size_t n = 600, double tau_max = 60.0);

// Rejects empty or non-increasing grids and negative times.
void require_tau_grid(std::span<const double> tau_grid);

inline constexpr double kDarkPortTolerance = 1e-10;

}  // namespace qbs
