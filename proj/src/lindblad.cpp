#include "qbs/lindblad.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "qbs/ode.hpp"

namespace qbs {

double DensityMatrix4::min_eigenvalue() const {
  const Eigen::Matrix4cd h = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double DensityMatrix4::excited_population() const {
  // atoms excited: |ge>, |eg> carry one, |ee> two
  return m_(1, 1).real() + m_(2, 2).real() + 2.0 * m_(3, 3).real();
}

void DensityMatrix4::validate(double trace_tol, double herm_tol, double eig_tol) const {
  if (std::abs(trace() - 1.0) > trace_tol)
    throw Error("density matrix trace off by " + std::to_string(std::abs(trace() - 1.0)));
  if (hermiticity_error() > herm_tol)
    throw Error("density matrix not Hermitian: " + std::to_string(hermiticity_error()));
  if (min_eigenvalue() < -eig_tol)
    throw Error("density matrix not positive: " + std::to_string(min_eigenvalue()));
}

DriveSpec DriveSpec::make(cplx omega_l, cplx omega_r, double p, double gamma, double epsilon) {
  const double worst = std::max(std::abs(omega_l), std::abs(omega_r)) / gamma;
  if (!(worst <= kDriveHardLimit))
    throw WeakDriveViolation("drive |Omega|/Gamma = " + std::to_string(worst) + " exceeds " +
                             std::to_string(kDriveHardLimit));
  if (!(epsilon > 0.0)) throw InvalidParameter("epsilon must be positive");
  return {omega_l, omega_r, p, epsilon};
}

bool DriveSpec::strong(double gamma) const {
  return std::max(std::abs(omega_l), std::abs(omega_r)) / gamma > kWeakDriveLimit;
}

Eigen::Matrix4cd sigma_minus(int atom) {
  Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();
  if (atom == 1) {
    s(0, 2) = 1.0;  // |eg> -> |gg>
    s(1, 3) = 1.0;  // |ee> -> |ge>
  } else {
    s(0, 1) = 1.0;
    s(2, 3) = 1.0;
  }
  return s;
}

Eigen::Matrix4cd collective_lowering(double theta, Direction pattern) {
  const double sign = pattern == Direction::Right ? 1.0 : -1.0;
  // k0 x_1 = -theta/2, k0 x_2 = +theta/2
  return std::polar(1.0, -sign * theta / 2.0) * sigma_minus(1) +
         std::polar(1.0, sign * theta / 2.0) * sigma_minus(2);
}

namespace {

Matrix16C kron(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b) {
  Matrix16C k;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) k.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
  return k;
}

Vector16C vec(const Eigen::Matrix4cd& m) {
  return Eigen::Map<const Vector16C>(m.data());
}

Eigen::Matrix4cd unvec(const Vector16C& v) { return Eigen::Map<const Eigen::Matrix4cd>(v.data()); }

}  // namespace

Eigen::Matrix4cd LindbladGenerator::apply(const Eigen::Matrix4cd& rho) const {
  return unvec(superoperator * vec(rho));
}

LindbladGenerator build_generator(const QbsParams& params, const DriveSpec& drive) {
  const double G = params.gamma();
  const double th = params.theta();
  const Eigen::Matrix4cd s[2] = {sigma_minus(1), sigma_minus(2)};
  const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();

  const cplx g_eff = params.g() * std::polar(1.0, params.phi()) + G * std::sin(th);
  Eigen::Matrix4cd h = g_eff * s[0].adjoint() * s[1] + std::conj(g_eff) * s[1].adjoint() * s[0];
  h -= drive.p * (s[0].adjoint() * s[0] + s[1].adjoint() * s[1]);
  const Eigen::Matrix4cd vd = drive.omega_r * collective_lowering(th, Direction::Left).adjoint() +
                              drive.omega_l * collective_lowering(th, Direction::Right).adjoint();
  h += vd + vd.adjoint();

  Eigen::Matrix2d rates;
  rates << G, G * std::cos(th), G * std::cos(th), G;
  // Both subscript orderings of the dissipator agree only for symmetric rates.
  if (rates(0, 1) != rates(1, 0)) throw Error("decay-rate matrix must be symmetric");

  Matrix16C l = -kI * (kron(id, h) - kron(h.transpose(), id));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Eigen::Matrix4cd sij = s[i].adjoint() * s[j];
      l += rates(i, j) * (2.0 * kron(s[j].adjoint().transpose(), s[i]) -
                          kron(sij.transpose(), id) - kron(id, sij));
    }
  }
  return {l, h, params, drive};
}

Eigen::Matrix4cd output_operator(const LindbladGenerator& gen, Port port) {
  const double G = gen.params.gamma();
  const double th = gen.params.theta();
  const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
  if (port == Port::Left)
    return gen.drive.omega_l * id - kI * G * collective_lowering(th, Direction::Right);
  return gen.drive.omega_r * id - kI * G * collective_lowering(th, Direction::Left);
}

DensityMatrix4 steady_state(const LindbladGenerator& gen) {
  const Matrix16C& l = gen.superoperator;
  Eigen::JacobiSVD<Matrix16C> svd(l);
  const auto& sv = svd.singularValues();
  const double floor = 1e-10 * std::max(1.0, sv(0));
  int null_dim = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) < floor) ++null_dim;
  if (null_dim > 1)
    throw NonUniqueSteadyState("generator has a " + std::to_string(null_dim) +
                               "-dimensional null space");

  Matrix16C a = l;
  a.row(0).setZero();
  for (int k = 0; k < 4; ++k) a(0, 5 * k) = 1.0;  // trace row
  Vector16C rhs = Vector16C::Zero();
  rhs(0) = 1.0;
  Eigen::Matrix4cd rho = unvec(a.fullPivLu().solve(rhs));
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix4(rho);
}

Eigen::Matrix<double, 16, 1> hermitian_to_real(const Eigen::Matrix4cd& m) {
  Eigen::Matrix<double, 16, 1> v;
  int k = 0;
  for (int i = 0; i < 4; ++i) v(k++) = m(i, i).real();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      v(k++) = m(i, j).real();
      v(k++) = m(i, j).imag();
    }
  return v;
}

Eigen::Matrix4cd real_to_hermitian(const Eigen::Matrix<double, 16, 1>& v) {
  Eigen::Matrix4cd m;
  int k = 0;
  for (int i = 0; i < 4; ++i) m(i, i) = v(k++);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      m(i, j) = cplx(v(k), v(k + 1));
      m(j, i) = cplx(v(k), -v(k + 1));
      k += 2;
    }
  return m;
}

std::vector<DensityMatrix4> evolve(const LindbladGenerator& gen, const DensityMatrix4& rho0,
                                   std::span<const double> times) {
  using State = std::vector<double>;
  using Real16 = Eigen::Matrix<double, 16, 1>;
  auto rhs = [&gen](const State& y, State& dydt, double) {
    const Real16 out = hermitian_to_real(gen.apply(real_to_hermitian(Eigen::Map<const Real16>(y.data()))));
    Eigen::Map<Real16>(dydt.data()) = out;
  };
  const Real16 y0 = hermitian_to_real(rho0.matrix());
  OdeOptions opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-10;
  const auto states = integrate_samples(rhs, State(y0.data(), y0.data() + 16), 0.0, times, opt);
  std::vector<DensityMatrix4> out;
  out.reserve(states.size());
  for (const auto& y : states) out.emplace_back(real_to_hermitian(Eigen::Map<const Real16>(y.data())));
  return out;
}

DensityMatrix4 steady_state_by_integration(const LindbladGenerator& gen, double t_end) {
  Eigen::Matrix4cd ground = Eigen::Matrix4cd::Zero();
  ground(0, 0) = 1.0;
  const double t[] = {t_end};
  return evolve(gen, DensityMatrix4(ground), t).back();
}

NumericScattering numeric_scattering(const QbsParams& params, double p, Direction probe,
                                     double omega) {
  const double G = params.gamma();
  const bool from_left = probe == Direction::Right;  // right-moving light enters on the left
  const DriveSpec drive = from_left ? DriveSpec::make(0.0, omega, p, G) : DriveSpec::make(omega, 0.0, p, G);
  const auto gen = build_generator(params, drive);
  const auto rho = steady_state(gen);
  if (rho.excited_population() > 0.1)
    throw WeakDriveViolation("excited population " + std::to_string(rho.excited_population()) +
                             " is outside the weak-drive regime");
  const Eigen::Matrix4cd& r = rho.matrix();
  const Eigen::Matrix4cd o_left = output_operator(gen, Port::Left);
  const Eigen::Matrix4cd o_right = output_operator(gen, Port::Right);
  const Eigen::Matrix4cd& o_back = from_left ? o_left : o_right;
  const Eigen::Matrix4cd& o_fwd = from_left ? o_right : o_left;
  const double w2 = omega * omega;
  NumericScattering ns;
  ns.reflectance = (o_back * r * o_back.adjoint()).trace().real() / w2;
  ns.transmittance = (o_fwd * r * o_fwd.adjoint()).trace().real() / w2;
  ns.r = (o_back * r).trace() / omega;
  ns.t = (o_fwd * r).trace() / omega;
  return ns;
}

CorrelationCurve numeric_g2(const QbsParams& params, const DriveSpec& drive,
                            std::span<const double> tau_grid, Port port) {
  require_tau_grid(tau_grid);
  const auto gen = build_generator(params, drive);
  const auto rho = steady_state(gen);
  const Eigen::Matrix4cd o = output_operator(gen, port);
  const Eigen::Matrix4cd x = o * rho.matrix() * o.adjoint();
  const double g1 = x.trace().real();
  if (g1 < kDarkPortTolerance * std::norm(std::max(std::abs(drive.omega_l), std::abs(drive.omega_r))))
    throw VanishingOutput("numeric output intensity vanishes");
  const Eigen::MatrixXcd l = gen.superoperator;
  const Vector16C vx = vec(x);
  CorrelationCurve curve{port, InputKind::CoherentBoth, {tau_grid.begin(), tau_grid.end()}, {}};
  curve.g2_values.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    const Eigen::MatrixXcd prop = (l * tau).exp();
    const Vector16C vy = prop * vx;
    const Eigen::Matrix4cd y = unvec(vy);
    const double g2 = (o * y * o.adjoint()).trace().real();
    curve.g2_values.push_back(g2 / (g1 * g1));
  }
  return curve;
}

CorrelationCurve numeric_g2_extrapolated(const QbsParams& params, double p, double omega,
                                         std::span<const double> tau_grid, Port port) {
  const double G = params.gamma();
  const auto full = numeric_g2(params, DriveSpec::make(omega, omega, p, G), tau_grid, port);
  const auto half = numeric_g2(params, DriveSpec::make(omega / 2, omega / 2, p, G), tau_grid, port);
  CorrelationCurve out = full;
  for (std::size_t i = 0; i < out.g2_values.size(); ++i)
    out.g2_values[i] = (4.0 * half.g2_values[i] - full.g2_values[i]) / 3.0;
  return out;
}

}  // namespace qbs
