#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qbs/core_model.hpp"
#include "qbs/two_photon.hpp"

namespace qbs {

using Matrix16C = Eigen::Matrix<cplx, 16, 16>;
using Vector16C = Eigen::Matrix<cplx, 16, 1>;

// Atomic state in the product basis {|gg>, |ge>, |eg>, |ee>}
// (first label is atom 1, at x = -d/2).
class DensityMatrix4 {
 public:
  explicit DensityMatrix4(const Eigen::Matrix4cd& m) : m_(m) {}

  const Eigen::Matrix4cd& matrix() const { return m_; }
  cplx trace() const { return m_.trace(); }
  double hermiticity_error() const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff(); }
  double min_eigenvalue() const;
  double excited_population() const;

  // Throws Error if trace, hermiticity or positivity are off by more than tol.
  void validate(double trace_tol = 1e-10, double herm_tol = 1e-12, double eig_tol = 1e-10) const;

 private:
  Eigen::Matrix4cd m_;
};

// Omega_lambda = sqrt(eps G) alpha_lambda. Omega_r drives the right-moving
// input, Omega_l the left-moving one; p is the drive detuning.
struct DriveSpec {
  cplx omega_l;
  cplx omega_r;
  double p;
  double epsilon = 1.0;

  // Throws WeakDriveViolation above 0.2 G on either side.
  static DriveSpec make(cplx omega_l, cplx omega_r, double p, double gamma = 1.0,
                        double epsilon = 1.0);
  // Above 0.05 G the perturbative comparison picks up visible corrections.
  bool strong(double gamma = 1.0) const;
};

inline constexpr double kWeakDriveLimit = 0.05;
inline constexpr double kDriveHardLimit = 0.2;

struct LindbladGenerator {
  Matrix16C superoperator;  // on column-stacked rho
  Eigen::Matrix4cd hamiltonian;
  QbsParams params;
  DriveSpec drive;

  Eigen::Matrix4cd apply(const Eigen::Matrix4cd& rho) const;
};

LindbladGenerator build_generator(const QbsParams& params, const DriveSpec& drive);

// Lowering operators and sum_j e^{-+ i k0 x_j} sigma_j in the product basis.
Eigen::Matrix4cd sigma_minus(int atom);
Eigen::Matrix4cd collective_lowering(double theta, Direction pattern);

// Output field operator for a port, in units where the input is Omega.
Eigen::Matrix4cd output_operator(const LindbladGenerator& gen, Port port);

DensityMatrix4 steady_state(const LindbladGenerator& gen);
// Evolves rho0 by the master equation and samples it at `times`.
std::vector<DensityMatrix4> evolve(const LindbladGenerator& gen, const DensityMatrix4& rho0,
                                   std::span<const double> times);
DensityMatrix4 steady_state_by_integration(const LindbladGenerator& gen, double t_end = 200.0);

// Probe from one side only: `probe` is the propagation direction of the input.
struct NumericScattering {
  double reflectance;
  double transmittance;
  cplx r;
  cplx t;
};

NumericScattering numeric_scattering(const QbsParams& params, double p, Direction probe,
                                     double omega = 0.01);

// Both sides driven with amplitude omega. G2(tau)/G1^2 via quantum regression.
CorrelationCurve numeric_g2(const QbsParams& params, const DriveSpec& drive,
                            std::span<const double> tau_grid, Port port);
// (4 g2(omega/2) - g2(omega)) / 3
CorrelationCurve numeric_g2_extrapolated(const QbsParams& params, double p, double omega,
                                         std::span<const double> tau_grid, Port port);

// Real 16-vector of a Hermitian 4x4 (diagonal, then Re/Im of the upper triangle).
Eigen::Matrix<double, 16, 1> hermitian_to_real(const Eigen::Matrix4cd& m);
Eigen::Matrix4cd real_to_hermitian(const Eigen::Matrix<double, 16, 1>& v);

}  // namespace qbs
