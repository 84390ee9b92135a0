#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "qbs/errors.hpp"

namespace qbs {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// |D(p)| below this is treated as a pole of the scattering closed forms.
inline constexpr double kDegenerateTolerance = 1e-12;

// Basis {|ee>, |+>, |->, |gg>} with |+-> = (|eg> +- |ge>)/sqrt2.
enum class BasisState : int { EE = 0, PLUS = 1, MINUS = 2, GG = 3 };

// Wraps to (-pi, pi].
double wrap_phase(double phi);

class QbsParams {
 public:
  QbsParams(double g, double phi, double theta, double gamma = 1.0);

  double gamma() const { return gamma_; }
  double g() const { return g_; }
  double phi() const { return phi_; }
  double theta() const { return theta_; }

  QbsParams with_phi(double phi) const { return {g_, phi, theta_, gamma_}; }
  QbsParams with_g(double g) const { return {g, phi_, theta_, gamma_}; }
  QbsParams with_theta(double theta) const { return {g_, phi_, theta, gamma_}; }

 private:
  double gamma_;
  double g_;
  double phi_;
  double theta_;
};

class Matrix4C {
 public:
  Matrix4C() : m_(Eigen::Matrix4cd::Zero()) {}
  // ground_pole marks a (GG, GG) entry that is infinite; it is stored as 0.
  explicit Matrix4C(const Eigen::Matrix4cd& m, bool ground_pole = false)
      : m_(m), ground_pole_(ground_pole) {}

  cplx operator()(BasisState row, BasisState col) const;
  // Single-excitation block entry, i and j in {PLUS, MINUS}.
  cplx block(int i, int j) const { return m_(1 + i, 1 + j); }

  const Eigen::Matrix4cd& dense() const { return m_; }
  bool has_ground_pole() const { return ground_pole_; }

 private:
  Eigen::Matrix4cd m_;
  bool ground_pole_ = false;
};

struct ChannelConstants {
  cplx alpha_plus;
  cplx alpha_minus;
  double beta;
  cplx big_delta;  // -(alpha_- - alpha_+)^2 + 4 beta^2
  cplx d_of_p;     // (alpha_+ - ip)(alpha_- - ip) + beta^2
  double p;
};

ChannelConstants channel_constants(const QbsParams& params, double p);

Matrix4C effective_hamiltonian(const QbsParams& params);
// M = -i/(H_eff - p)
Matrix4C resolvent(const QbsParams& params, double p);
// U(tau) = exp(-i H_eff tau)
Matrix4C propagator(const QbsParams& params, double tau);
// N(tau) = U(tau) M
Matrix4C propagated_resolvent(const QbsParams& params, double tau, double p);

// Phase pattern of a collective single-excitation amplitude: Right carries
// e^{+i k0 x_j} on atom j, Left carries e^{-i k0 x_j}.
enum class Direction { Right, Left };

// <Y-pattern| O |X-pattern> reduced to the (+, -) block:
// v_R = sqrt2 (cos(theta/2), -i sin(theta/2)), v_L = sqrt2 (cos, +i sin),
// result = v_bra^T O v_ket.
cplx pattern_element(const Matrix4C& o, Direction bra, Direction ket, double theta);

namespace detail {

// cos(sqrt(D) tau/2) and sin(sqrt(D) tau/2)/sqrt(D); both even in sqrt(D).
struct HalfAngle {
  cplx cos_half;
  cplx sinc_half;
};

HalfAngle half_angle(cplx big_delta, double tau, cplx root);

Matrix4C propagator_with_root(const QbsParams& params, double tau, cplx root);
Matrix4C propagated_resolvent_with_root(const QbsParams& params, double tau, double p,
                                        cplx root);

}  // namespace detail

}  // namespace qbs
