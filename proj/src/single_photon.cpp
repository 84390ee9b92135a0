#include "qbs/single_photon.hpp"

#include <cmath>
#include <string>

namespace qbs {

ScatteringSet scattering_set(const QbsParams& params, double p) {
  const auto c = channel_constants(params, p);
  if (std::abs(c.d_of_p) < kDegenerateTolerance)
    throw DegenerateResolvent("|D(p)| = " + std::to_string(std::abs(c.d_of_p)) +
                              " at p = " + std::to_string(p));
  const double G = params.gamma();
  const double g = params.g();
  const double th = params.theta();
  const double ph = params.phi();
  const cplx d = c.d_of_p;
  ScatteringSet s;
  s.r_rl = 2.0 * kI * G * (G * std::sin(th) + p * std::cos(th) + g * std::cos(ph)) / d;
  s.t_rr = (g * g - p * p + 2.0 * g * G * std::polar(1.0, -ph) * std::sin(th)) / d;
  s.t_ll = (g * g - p * p + 2.0 * g * G * std::polar(1.0, ph) * std::sin(th)) / d;
  s.r_lr = s.r_rl;
  s.p = p;
  return s;
}

ScatteringSet scattering_set_matrix_elements(const QbsParams& params, double p) {
  const Matrix4C m = resolvent(params, p);
  const double G = params.gamma();
  const double th = params.theta();
  using D = Direction;
  // out_l pairs with the Right pattern, out_r with the Left pattern
  ScatteringSet s;
  s.r_rl = -G * pattern_element(m, D::Right, D::Right, th);
  s.t_rr = 1.0 - G * pattern_element(m, D::Left, D::Right, th);
  s.r_lr = -G * pattern_element(m, D::Left, D::Left, th);
  s.t_ll = 1.0 - G * pattern_element(m, D::Right, D::Left, th);
  s.p = p;
  return s;
}

PortProbabilities output_probabilities(const QbsParams& params, double p) {
  const auto s = scattering_set(params, p);
  return {std::norm(s.r_rl + s.t_ll), std::norm(s.r_lr + s.t_rr)};
}

RtGrid reflectance_transmittance_grid(const QbsParams& base, std::span<const double> theta,
                                      std::span<const double> phi, double p) {
  if (theta.empty() || phi.empty()) throw InvalidParameter("empty theta or phi range");
  RtGrid grid;
  grid.theta.assign(theta.begin(), theta.end());
  grid.phi.assign(phi.begin(), phi.end());
  grid.values.reserve(theta.size() * phi.size());
  for (double th : theta) {
    for (double ph : phi) {
      try {
        const auto s = scattering_set(QbsParams(base.g(), ph, th, base.gamma()), p);
        grid.values.push_back(RtValue{std::norm(s.r_rl), std::norm(s.t_rr)});
      } catch (const DegenerateResolvent&) {
        grid.values.emplace_back(std::nullopt);
      }
    }
  }
  return grid;
}

}  // namespace qbs
