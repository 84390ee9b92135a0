#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qbs/core_model.hpp"

namespace qbs {

// Two qubits, qubit 2 frequency-modulated as w0 + D - A cos(D t), coupled by
// g' cos(D t + phi'). Frequencies are angular.
struct FloquetParams {
  double omega0 = 0.0;
  double delta_mod = 1.0;
  double a_mod = 0.0;
  double g_prime = 0.0;
  double phi_prime = 0.0;
  double eta1 = 1.0;
  double eta2 = 1.0;

  // Throws InvalidParameter for non-physical values.
  void validate() const;
  // Scale separation needed for the static effective coupling, D >= 10 max(A, g').
  bool rwa_regime() const;
};

struct EffectiveCoupling {
  double g_eff_mag;
  double phi_eff;

  cplx value() const { return std::polar(g_eff_mag, phi_eff); }
};

// Ascending series, 40 terms; |x| <= 4.
double bessel_j(int n, double x);

inline constexpr double kJ1MaxArg = 1.8411837813406593;
inline constexpr double kJ1Max = 0.5818652242815964;

// (g'/2) [J0(A/D) e^{i phi'} + J2(A/D) e^{-i phi'}]
EffectiveCoupling effective_coupling(const FloquetParams& fp);

// Smallest x = A/D > 0 with J1(x) = eta1/eta2.
double balance_modulation_depth(double eta_ratio);

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::Vector4cd> states;  // product basis {gg, ge, eg, ee}
};

// Frame with qubit energies removed, so the exchange term carries
// exp(-i D t + i (A/D) sin D t). Samples on a uniform grid including t_end.
Trajectory simulate_modulated_pair(const FloquetParams& fp, double t_end,
                                   const Eigen::Vector4cd& initial, int samples = 400);

// Exact evolution under g e^{i phi} s1+ s2 + h.c. with (g, phi) from effective_coupling.
Eigen::Vector4cd evolve_effective(const EffectiveCoupling& c, double t,
                                  const Eigen::Vector4cd& initial);

// max_t 1 - |<psi_full(t)|psi_eff(t)>|^2 starting from |eg>.
double validate_rwa(const FloquetParams& fp, double t_end, int samples = 400);

}  // namespace qbs
