#include "qbs/core_model.hpp"

#include <cmath>
#include <string>

namespace qbs {

double wrap_phase(double phi) {
  double w = std::remainder(phi, 2.0 * kPi);  // [-pi, pi]
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

QbsParams::QbsParams(double g, double phi, double theta, double gamma)
    : gamma_(gamma), g_(g), phi_(0.0), theta_(theta) {
  if (!std::isfinite(gamma) || gamma <= 0.0)
    throw InvalidParameter("gamma must be positive, got " + std::to_string(gamma));
  if (!std::isfinite(g) || g < 0.0)
    throw InvalidParameter("g must be >= 0, got " + std::to_string(g));
  if (!std::isfinite(phi)) throw InvalidParameter("phi must be finite");
  if (!std::isfinite(theta) || theta < 0.0)
    throw InvalidParameter("theta must be finite and >= 0, got " + std::to_string(theta));
  phi_ = wrap_phase(phi);
}

cplx Matrix4C::operator()(BasisState row, BasisState col) const {
  if (ground_pole_ && row == BasisState::GG && col == BasisState::GG)
    throw GroundStatePole("|gg><gg| entry is i/p, undefined at p = 0");
  return m_(static_cast<int>(row), static_cast<int>(col));
}

ChannelConstants channel_constants(const QbsParams& params, double p) {
  const double G = params.gamma();
  const double g = params.g();
  const cplx e = std::polar(1.0, params.theta());
  ChannelConstants c;
  c.alpha_plus = G * (1.0 + e) + kI * g * std::cos(params.phi());
  c.alpha_minus = G * (1.0 - e) - kI * g * std::cos(params.phi());
  c.beta = g * std::sin(params.phi());
  const cplx diff = c.alpha_minus - c.alpha_plus;
  c.big_delta = -diff * diff + 4.0 * c.beta * c.beta;
  c.d_of_p = (c.alpha_plus - kI * p) * (c.alpha_minus - kI * p) + c.beta * c.beta;
  c.p = p;
  return c;
}

Matrix4C effective_hamiltonian(const QbsParams& params) {
  const auto c = channel_constants(params, 0.0);
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  h(0, 0) = -2.0 * kI * params.gamma();
  h(1, 1) = -kI * c.alpha_plus;
  h(2, 2) = -kI * c.alpha_minus;
  h(1, 2) = -kI * c.beta;
  h(2, 1) = kI * c.beta;
  return Matrix4C(h);
}

namespace {

void require_regular(const ChannelConstants& c) {
  if (std::abs(c.d_of_p) < kDegenerateTolerance)
    throw DegenerateResolvent("|D(p)| = " + std::to_string(std::abs(c.d_of_p)) +
                              " at p = " + std::to_string(c.p));
}

// Corners shared by M and N; i/p is kept out of the dense storage at p = 0.
Matrix4C with_corners(Eigen::Matrix4cd m, cplx ee, double p) {
  m(0, 0) = ee;
  if (p == 0.0) return Matrix4C(m, true);
  m(3, 3) = kI / p;
  return Matrix4C(m);
}

}  // namespace

Matrix4C resolvent(const QbsParams& params, double p) {
  const auto c = channel_constants(params, p);
  require_regular(c);
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(1, 1) = (c.alpha_minus - kI * p) / c.d_of_p;
  m(2, 2) = (c.alpha_plus - kI * p) / c.d_of_p;
  m(1, 2) = -c.beta / c.d_of_p;
  m(2, 1) = c.beta / c.d_of_p;
  return with_corners(m, 1.0 / (2.0 * params.gamma() - kI * p), p);
}

namespace detail {

HalfAngle half_angle(cplx big_delta, double tau, cplx root) {
  // Series in z = D tau^2/4 once the argument is small; it is exact in D,
  // so it also covers D -> 0 where the quotient is 0/0.
  const cplx z = big_delta * tau * tau / 4.0;
  if (std::abs(z) < 1e-3) {
    cplx c = 0.0, s = 0.0, term = 1.0;
    double fact_even = 1.0, fact_odd = 1.0;
    for (int k = 0; k < 8; ++k) {
      if (k > 0) {
        term *= -z;
        fact_even *= (2.0 * k - 1.0) * (2.0 * k);
        fact_odd *= (2.0 * k) * (2.0 * k + 1.0);
      }
      c += term / fact_even;
      s += term / fact_odd;
    }
    return {c, 0.5 * tau * s};
  }
  const cplx x = 0.5 * root * tau;
  return {std::cos(x), std::sin(x) / root};
}

Matrix4C propagator_with_root(const QbsParams& params, double tau, cplx root) {
  const double G = params.gamma();
  const auto c = channel_constants(params, 0.0);
  const auto h = half_angle(c.big_delta, tau, root);
  const double decay = std::exp(-G * tau);
  const cplx diff = c.alpha_minus - c.alpha_plus;
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  u(0, 0) = std::exp(-2.0 * G * tau);
  u(1, 1) = (h.cos_half + diff * h.sinc_half) * decay;
  u(2, 2) = (h.cos_half - diff * h.sinc_half) * decay;
  u(1, 2) = -2.0 * c.beta * h.sinc_half * decay;
  u(2, 1) = -u(1, 2);
  u(3, 3) = 1.0;
  return Matrix4C(u);
}

Matrix4C propagated_resolvent_with_root(const QbsParams& params, double tau, double p,
                                        cplx root) {
  const double G = params.gamma();
  const auto c = channel_constants(params, p);
  require_regular(c);
  const auto h = half_angle(c.big_delta, tau, root);
  const cplx scale = std::exp(-G * tau) / c.d_of_p;
  const cplx ap = c.alpha_plus - kI * p;
  const cplx am = c.alpha_minus - kI * p;
  const cplx diff = c.alpha_minus - c.alpha_plus;
  const double b2 = c.beta * c.beta;
  Eigen::Matrix4cd n = Eigen::Matrix4cd::Zero();
  n(1, 1) = (am * h.cos_half + (diff * am - 2.0 * b2) * h.sinc_half) * scale;
  n(2, 2) = (ap * h.cos_half - (diff * ap + 2.0 * b2) * h.sinc_half) * scale;
  n(1, 2) = -c.beta * (h.cos_half + (ap + am) * h.sinc_half) * scale;
  n(2, 1) = -n(1, 2);
  const cplx ee = std::exp(-2.0 * G * tau) / (2.0 * G - kI * p);
  return with_corners(n, ee, p);
}

}  // namespace detail

Matrix4C propagator(const QbsParams& params, double tau) {
  if (!(tau >= 0.0)) throw InvalidParameter("tau must be >= 0");
  const auto c = channel_constants(params, 0.0);
  return detail::propagator_with_root(params, tau, std::sqrt(c.big_delta));
}

Matrix4C propagated_resolvent(const QbsParams& params, double tau, double p) {
  if (!(tau >= 0.0)) throw InvalidParameter("tau must be >= 0");
  const auto c = channel_constants(params, p);
  return detail::propagated_resolvent_with_root(params, tau, p, std::sqrt(c.big_delta));
}

cplx pattern_element(const Matrix4C& o, Direction bra, Direction ket, double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  auto vec = [&](Direction d) {
    const double sign = d == Direction::Right ? -1.0 : 1.0;
    return Eigen::Vector2cd(std::sqrt(2.0) * c, sign * std::sqrt(2.0) * kI * s);
  };
  const Eigen::Vector2cd vb = vec(bra);
  const Eigen::Vector2cd vk = vec(ket);
  const Eigen::Matrix2cd blk = o.dense().block<2, 2>(1, 1);
  return (vb.transpose() * blk * vk)(0, 0);
}

}  // namespace qbs
