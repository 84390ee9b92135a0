#include "qbs/two_photon.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qbs {

Port output_port(Channel ch) {
  switch (ch) {
    case Channel::RR_to_L:
    case Channel::LL_to_L:
    case Channel::TS_to_L:
      return Port::Left;
    default:
      return Port::Right;
  }
}

Channel channel_for(Direction first, Direction second, Port out) {
  const bool left = out == Port::Left;
  if (first != second) return left ? Channel::TS_to_L : Channel::TS_to_R;
  if (first == Direction::Right) return left ? Channel::RR_to_L : Channel::RR_to_R;
  return left ? Channel::LL_to_L : Channel::LL_to_R;
}

namespace {

Direction flip(Direction d) { return d == Direction::Right ? Direction::Left : Direction::Right; }

// Everything at fixed (params, p, tau) that the kernel needs.
struct Pieces {
  ScatteringSet s;
  Matrix4C m;
  Matrix4C u;
  Matrix4C n;
};

Pieces make_pieces(const QbsParams& params, double p, double tau) {
  return {scattering_set(params, p), resolvent(params, p), propagator(params, tau),
          propagated_resolvent(params, tau, p)};
}

// Single-photon amplitude from an input direction into a port, and whether
// that input passes straight through to the port.
cplx amplitude(const ScatteringSet& s, Port port, Direction in) {
  if (port == Port::Left) return in == Direction::Right ? s.r_rl : s.t_ll;
  return in == Direction::Left ? s.r_lr : s.t_rr;
}

bool direct_path(Port port, Direction in) {
  return (port == Port::Left) == (in == Direction::Left);
}

// One ordering of the photon pair; the envelope is K(a, b) + K(b, a).
// First photon (a) is emitted, second (b) scatters off the atom left in the
// collective excitation; the U term is the doubly-excited decay path.
cplx kernel(const Pieces& pc, const QbsParams& params, double p, double tau, Port port,
            Direction a, Direction b) {
  const double G = params.gamma();
  const double th = params.theta();
  // out_l projects on the Right pattern and re-emits into the Left one
  const Direction o = port == Port::Left ? Direction::Right : Direction::Left;
  const Direction o_tilde = flip(o);
  const cplx amp_a = amplitude(pc.s, port, a);
  const cplx amp_b = amplitude(pc.s, port, b);
  const cplx scattered_a = amp_a - (direct_path(port, a) ? 1.0 : 0.0);

  const cplx free = std::exp(-kI * p * tau) * amp_a * amp_b;
  const cplx pair = G * G / (2.0 * (G - kI * p)) * pattern_element(pc.u, o, o_tilde, th) *
                    pattern_element(pc.m, flip(a), b, th);
  const cplx bound = G * scattered_a * pattern_element(pc.n, o, b, th);
  return free + pair + bound;
}

cplx assemble(const Pieces& pc, const QbsParams& params, double p, double tau, Channel ch) {
  const Port port = output_port(ch);
  Direction a = Direction::Right;
  Direction b = Direction::Left;
  switch (ch) {
    case Channel::RR_to_L:
    case Channel::RR_to_R:
      b = Direction::Right;
      break;
    case Channel::LL_to_L:
    case Channel::LL_to_R:
      a = Direction::Left;
      break;
    default:
      break;
  }
  return kernel(pc, params, p, tau, port, a, b) + kernel(pc, params, p, tau, port, b, a);
}

Channel same_side(Direction d, Port port) { return channel_for(d, d, port); }

double port_intensity(const ScatteringSet& s, Port port) {
  return port == Port::Left ? std::norm(s.r_rl + s.t_ll) : std::norm(s.r_lr + s.t_rr);
}

void require_bright(double intensity, Port port) {
  if (intensity < kDarkPortTolerance)
    throw VanishingOutput(std::string(port == Port::Left ? "left" : "right") +
                          " port output " + std::to_string(intensity) + " is below tolerance");
}

double g2_from_pieces(const Pieces& pc, const QbsParams& params, double p, double tau,
                      Port port) {
  const double intensity = port_intensity(pc.s, port);
  require_bright(intensity, port);
  const cplx psi = assemble(pc, params, p, tau, channel_for(Direction::Right, Direction::Left, port)) +
                   0.5 * assemble(pc, params, p, tau, same_side(Direction::Right, port)) +
                   0.5 * assemble(pc, params, p, tau, same_side(Direction::Left, port));
  return std::norm(psi) / (intensity * intensity);
}

}  // namespace

void require_tau_grid(std::span<const double> tau_grid) {
  if (tau_grid.empty()) throw InvalidParameter("empty tau grid");
  if (!(tau_grid.front() >= 0.0)) throw InvalidParameter("tau grid must start at >= 0");
  for (std::size_t i = 1; i < tau_grid.size(); ++i)
    if (!(tau_grid[i] > tau_grid[i - 1]))
      throw InvalidParameter("tau grid must be strictly increasing");
}

cplx psi2_channel(const QbsParams& params, double p, double tau, Channel ch) {
  if (!(tau >= 0.0)) throw InvalidParameter("tau must be >= 0");
  return assemble(make_pieces(params, p, tau), params, p, tau, ch);
}

TwoPhotonEnvelope envelope(const QbsParams& params, double p, std::span<const double> tau_grid,
                           Channel ch) {
  require_tau_grid(tau_grid);
  TwoPhotonEnvelope env{{tau_grid.begin(), tau_grid.end()}, {}, ch};
  env.values.reserve(tau_grid.size());
  for (double tau : tau_grid) env.values.push_back(psi2_channel(params, p, tau, ch));
  return env;
}

double g2_coherent(const QbsParams& params, double p, double tau, Port port) {
  if (!(tau >= 0.0)) throw InvalidParameter("tau must be >= 0");
  return g2_from_pieces(make_pieces(params, p, tau), params, p, tau, port);
}

double g2_zero_coherent(const QbsParams& params, double p, Port port) {
  // The right port is the left port with phi reversed.
  const QbsParams q = port == Port::Left ? params : params.with_phi(-params.phi());
  const auto s = scattering_set(q, p);
  const double G = q.gamma();
  const double intensity = std::norm(s.r_rl + s.t_ll);
  require_bright(intensity, port);
  const cplx num = -kI * p * (2.0 * s.r_rl + 2.0 * s.t_ll - 1.0) + G * (1.0 + s.t_ll - s.t_rr);
  return std::norm(num) / (intensity * intensity * std::norm(G - kI * p));
}

double g2_zero_resonant(const QbsParams& params, Port port) {
  const double G = params.gamma();
  const double g = params.g();
  const double th = params.theta();
  const double ph = port == Port::Left ? params.phi() : -params.phi();
  const cplx d0 = channel_constants(params, 0.0).d_of_p;
  if (std::abs(d0) < kDegenerateTolerance) throw DegenerateResolvent("D(0) vanishes");
  const cplx out = g * g + 2.0 * g * G * std::polar(1.0, ph) * std::sin(th) +
                   2.0 * kI * G * (g * std::cos(ph) + G * std::sin(th));
  const double out2 = std::norm(out);
  if (out2 < kDarkPortTolerance * std::norm(d0))
    throw VanishingOutput("resonant output vanishes");
  const cplx num = d0 + 4.0 * kI * g * G * std::sin(ph) * std::sin(th);
  return std::norm(d0) * std::norm(num) / (out2 * out2);
}

CorrelationCurve g2_curve(const QbsParams& params, double p, std::span<const double> tau_grid,
                          Port port) {
  require_tau_grid(tau_grid);
  CorrelationCurve curve{port, InputKind::CoherentBoth, {tau_grid.begin(), tau_grid.end()}, {}};
  curve.g2_values.reserve(tau_grid.size());
  for (double tau : tau_grid) curve.g2_values.push_back(g2_coherent(params, p, tau, port));
  return curve;
}

std::vector<double> default_tau_grid(std::size_t n, double tau_max) {
  if (n < 2 || !(tau_max > 0.0)) throw InvalidParameter("tau grid needs n >= 2 and tau_max > 0");
  // A quarter of the points go geometric on [1e-3, 1], the rest linear to tau_max.
  const std::size_t n_geo = std::max<std::size_t>(1, n / 4);
  const double knee = std::min(1.0, tau_max / 2.0);
  const double first = knee * 1e-3;
  std::vector<double> grid;
  grid.reserve(n);
  grid.push_back(0.0);
  for (std::size_t i = 0; i < n_geo; ++i)
    grid.push_back(first * std::pow(knee / first, static_cast<double>(i) / n_geo));
  const std::size_t n_lin = n - grid.size();
  if (n_lin == 1) grid.push_back(tau_max);
  for (std::size_t i = 0; n_lin > 1 && i < n_lin; ++i)
    grid.push_back(knee + (tau_max - knee) * static_cast<double>(i) / (n_lin - 1));
  grid.back() = tau_max;
  return grid;
}

}  // namespace qbs
