#include "oracles/dense.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

namespace {
const cplx I(0.0, 1.0);
}

Eigen::Matrix4cd lower1() {
  Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();
  s(0, 1) = 1.0;
  s(2, 3) = 1.0;
  return s;
}

Eigen::Matrix4cd lower2() {
  Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();
  s(0, 2) = 1.0;
  s(1, 3) = 1.0;
  return s;
}

Eigen::Matrix4cd heff_product(double g, double phi, double theta, double gamma) {
  const Eigen::Matrix4cd s[2] = {lower1(), lower2()};
  const cplx geff = g * std::exp(I * phi) + gamma * std::sin(theta);
  Eigen::Matrix4cd h = geff * s[0].adjoint() * s[1] + std::conj(geff) * s[1].adjoint() * s[0];
  const double rates[2][2] = {{gamma, gamma * std::cos(theta)}, {gamma * std::cos(theta), gamma}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) h -= I * rates[i][j] * s[i].adjoint() * s[j];
  return h;
}

Eigen::Matrix4cd to_parity(const Eigen::Matrix4cd& product) {
  // columns: parity states written in the product basis
  Eigen::Matrix4cd t = Eigen::Matrix4cd::Zero();
  const double r = 1.0 / std::sqrt(2.0);
  t(3, 0) = 1.0;               // ee
  t(1, 1) = r, t(2, 1) = r;    // + = (eg + ge)/sqrt2
  t(1, 2) = r, t(2, 2) = -r;   // -
  t(0, 3) = 1.0;               // gg
  return t.adjoint() * product * t;
}

Eigen::Matrix4cd resolvent(double g, double phi, double theta, double p, double gamma) {
  const Eigen::Matrix4cd h = to_parity(heff_product(g, phi, theta, gamma));
  const Eigen::Matrix4cd a = I * h - I * p * Eigen::Matrix4cd::Identity();
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m.block<3, 3>(0, 0) = Eigen::Matrix3cd(a.block<3, 3>(0, 0)).inverse();
  return m;
}

Eigen::Matrix4cd propagator(double g, double phi, double theta, double tau, double gamma) {
  const Eigen::MatrixXcd h = to_parity(heff_product(g, phi, theta, gamma));
  const Eigen::MatrixXcd u = (-I * tau * h).exp();
  return u;
}

namespace {

struct Collective {
  Eigen::Matrix4cd out_l, out_r, in_r, in_l;
};

Collective collective(double theta) {
  const double x[2] = {-theta / 2, theta / 2};
  const Eigen::Matrix4cd s[2] = {lower1(), lower2()};
  Collective c{Eigen::Matrix4cd::Zero(), Eigen::Matrix4cd::Zero(), Eigen::Matrix4cd::Zero(),
               Eigen::Matrix4cd::Zero()};
  for (int i = 0; i < 2; ++i) {
    c.out_l += std::exp(I * x[i]) * s[i];
    c.out_r += std::exp(-I * x[i]) * s[i];
    c.in_r += std::exp(I * x[i]) * s[i].adjoint();
    c.in_l += std::exp(-I * x[i]) * s[i].adjoint();
  }
  return c;
}

// (iH - i z) inverted on the excited states only (gg is dropped).
Eigen::Matrix4cd excited_inverse(const Eigen::Matrix4cd& h, double z) {
  const Eigen::Matrix4cd a = I * h - I * z * Eigen::Matrix4cd::Identity();
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m.block<3, 3>(1, 1) = Eigen::Matrix3cd(a.block<3, 3>(1, 1)).inverse();
  return m;
}

Eigen::Vector4cd ground() { return Eigen::Vector4cd(1.0, 0.0, 0.0, 0.0); }

}  // namespace

Amplitudes scattering(double g, double phi, double theta, double p, double gamma) {
  const Eigen::Matrix4cd h = heff_product(g, phi, theta, gamma);
  const Eigen::Matrix4cd m = excited_inverse(h, p);
  const auto c = collective(theta);
  const Eigen::Vector4cd gg = ground();
  auto elem = [&](const Eigen::Matrix4cd& out, const Eigen::Matrix4cd& in) {
    return (gg.transpose() * out * m * in * gg)(0, 0);
  };
  return {-gamma * elem(c.out_l, c.in_r), 1.0 - gamma * elem(c.out_r, c.in_r),
          -gamma * elem(c.out_r, c.in_l), 1.0 - gamma * elem(c.out_l, c.in_l)};
}

cplx coherent_two_photon(double g, double phi, double theta, double p, double tau, bool left,
                         cplx alpha_r, cplx alpha_l, cplx* a1, double gamma) {
  const Eigen::Matrix4cd h = heff_product(g, phi, theta, gamma);
  const Eigen::Matrix4cd m = excited_inverse(h, p);
  const Eigen::Matrix4cd m2 = excited_inverse(h, 2.0 * p);
  const auto c = collective(theta);
  const Eigen::Matrix4cd& o = left ? c.out_l : c.out_r;
  const cplx direct = left ? alpha_l : alpha_r;
  const Eigen::Matrix4cd v = alpha_r * c.in_r + alpha_l * c.in_l;
  const Eigen::MatrixXcd hx = h;
  const Eigen::Matrix4cd u = Eigen::MatrixXcd((-I * tau * hx).exp());
  const double sg = std::sqrt(gamma);
  const Eigen::Vector4cd gg = ground();
  // one- and two-excitation amplitudes of the driven atoms
  const Eigen::Vector4cd c1 = -I * sg * m * v * gg;
  const Eigen::Vector4cd c2 = -gamma * m2 * v * m * v * gg;
  const cplx amp1 = direct - I * sg * (gg.transpose() * o * c1)(0, 0);
  const Eigen::Vector4cd after_first = direct * c1 - I * sg * o * c2;
  if (a1) *a1 = amp1;
  return std::exp(-I * p * tau) * amp1 * amp1 -
         I * sg * (gg.transpose() * o * u * (after_first - amp1 * c1))(0, 0);
}

cplx channel(double g, double phi, double theta, double p, double tau, bool left, Pair pair) {
  auto f = [&](double ar, double al) {
    return coherent_two_photon(g, phi, theta, p, tau, left, ar, al);
  };
  switch (pair) {
    case Pair::RR:
      return 2.0 * f(1, 0);
    case Pair::LL:
      return 2.0 * f(0, 1);
    default:
      return f(1, 1) - f(1, 0) - f(0, 1);
  }
}

double g2(double g, double phi, double theta, double p, double tau, bool left) {
  cplx a1;
  const cplx psi = coherent_two_photon(g, phi, theta, p, tau, left, 1.0, 1.0, &a1);
  return std::norm(psi) / std::pow(std::norm(a1), 2);
}

}  // namespace oracle
