#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles/dense.hpp"
#include "qbs/core_model.hpp"

using namespace qbs;
using testing::max_abs_diff;

namespace {

const QbsParams kRef(1.0, 0.3, kPi / 8);

// mpmath, 40 digits
const cplx kAlphaPlus(1.9238795325112867561, 1.3380199214906957914);
const cplx kAlphaMinus(0.076120467488713243872, -1.3380199214906957914);
const double kBeta = 0.29552020666133957511;
const cplx kBigDelta(4.0963044490314192737, -9.889353756460901083);
const cplx kDAt02(1.9840761122578548184, -2.8723384391152252708);

Eigen::Matrix2cd block(const Matrix4C& m) { return m.dense().block<2, 2>(1, 1); }

}  // namespace

TEST_SUITE("core_model") {
  TEST_CASE("parameters validate and wrap the phase") {
    CHECK(QbsParams(1, 3 * kPi, 0).phi() == doctest::Approx(kPi));
    CHECK(QbsParams(1, -kPi, 0).phi() == doctest::Approx(kPi));
    CHECK(QbsParams(1, -0.87 * kPi, 0).phi() == doctest::Approx(-0.87 * kPi));
    CHECK_THROWS_AS(QbsParams(-1, 0, 0), InvalidParameter);
    CHECK_THROWS_AS(QbsParams(1, 0, -0.1), InvalidParameter);
    CHECK_THROWS_AS(QbsParams(1, 0, 0, 0.0), InvalidParameter);
    CHECK_THROWS_AS(QbsParams(1, NAN, 0), InvalidParameter);
  }

  TEST_CASE("channel constants at reference point") {
    const auto c = channel_constants(kRef, 0.2);
    CHECK(std::abs(c.alpha_plus - kAlphaPlus) < 1e-15);
    CHECK(std::abs(c.alpha_minus - kAlphaMinus) < 1e-15);
    CHECK(std::abs(c.beta - kBeta) < 1e-15);
    CHECK(std::abs(c.big_delta - kBigDelta) < 1e-14);
    CHECK(std::abs(c.d_of_p - kDAt02) < 1e-14);
  }

  TEST_CASE("channel constant identities") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
      const auto d = testing::draw(rng);
      const QbsParams q(d.g, d.phi, d.theta);
      const auto c = channel_constants(q, d.p);
      CHECK(std::abs(c.alpha_plus + c.alpha_minus - 2.0) < 1e-14);
      CHECK(c.beta == d.g * std::sin(q.phi()));
      // determinant of the single-excitation block of (iH - ip)
      const Eigen::Matrix2cd a = kI * block(effective_hamiltonian(q)) - kI * d.p * Eigen::Matrix2cd::Identity();
      CHECK(std::abs(a.determinant() - c.d_of_p) <= 1e-14 * std::max(1.0, std::abs(c.d_of_p)));
    }
  }

  TEST_CASE("degenerate and simple substitutions") {
    const auto mirror = channel_constants(QbsParams(0, 0.4, kPi), 0.0);
    CHECK(std::abs(mirror.alpha_plus) < 1e-15);
    CHECK(std::abs(mirror.alpha_minus - 2.0) < 1e-15);
    CHECK(std::abs(mirror.d_of_p) < 1e-15);
    const auto c = channel_constants(QbsParams(1, 0, 0), 0.0);
    CHECK(c.beta == 0.0);
    CHECK(std::abs(c.alpha_plus - cplx(2, 1)) < 1e-15);
    CHECK(std::abs(c.alpha_minus - cplx(0, -1)) < 1e-15);
    CHECK(std::abs(c.d_of_p - cplx(2, 1) * cplx(0, -1)) < 1e-15);
  }

  TEST_CASE("effective hamiltonian") {
    for (double phi : {0.0, kPi}) {
      const auto h = effective_hamiltonian(QbsParams(1.3, phi, 0.7));
      CHECK(std::abs(h(BasisState::PLUS, BasisState::MINUS)) < 1e-15);
      CHECK(std::abs(h(BasisState::MINUS, BasisState::PLUS)) < 1e-15);
    }
    const auto h = effective_hamiltonian(QbsParams(1, kPi / 2, 0)).dense();
    Eigen::Matrix4cd want = Eigen::Matrix4cd::Zero();
    want(0, 0) = cplx(0, -2);
    want(1, 1) = cplx(0, -2);
    want(1, 2) = cplx(0, -1);
    want(2, 1) = cplx(0, 1);
    CHECK(max_abs_diff(h, want) < 1e-15);
    // dense construction from the product-basis operators
    std::mt19937_64 rng(12);
    for (int k = 0; k < 50; ++k) {
      const auto d = testing::draw(rng);
      const auto mine = effective_hamiltonian(QbsParams(d.g, d.phi, d.theta)).dense();
      CHECK(max_abs_diff(mine, oracle::to_parity(oracle::heff_product(d.g, d.phi, d.theta))) < 1e-14);
    }
  }

  TEST_CASE("resolvent") {
    const auto m = resolvent(kRef, 0.2);
    const cplx want[4] = {cplx(0.37489006574902445394, -0.23245518271599402599),
                          cplx(-0.048111927572431680024, -0.069651430251312467904),
                          cplx(0.048111927572431680024, 0.069651430251312467904),
                          cplx(0.044994681379576109336, 0.63871535297648827936)};
    for (int i = 0; i < 4; ++i) CHECK(std::abs(m.block(i / 2, i % 2) - want[i]) < 1e-15);
    CHECK(std::abs(m(BasisState::EE, BasisState::EE) - cplx(0.4950495049504950495, 0.04950495049504950495)) < 1e-15);
    CHECK(std::abs(m(BasisState::GG, BasisState::GG) - cplx(0, 5)) < 1e-14);

    // (iH - ip) M = 1 away from |gg>
    const Eigen::Matrix4cd a = kI * effective_hamiltonian(kRef).dense() - kI * 0.2 * Eigen::Matrix4cd::Identity();
    const Eigen::Matrix3cd prod = (a * m.dense()).block<3, 3>(0, 0);
    CHECK((prod - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff() < 1e-14);

    std::mt19937_64 rng(13);
    for (int k = 0; k < 100; ++k) {
      const auto d = testing::draw(rng);
      const QbsParams q(d.g, d.phi, d.theta);
      if (std::abs(channel_constants(q, d.p).d_of_p) < 1e-6) continue;
      const Eigen::Matrix4cd dense = oracle::resolvent(d.g, d.phi, d.theta, d.p);
      const Eigen::Matrix4cd mine = resolvent(q, d.p).dense();
      CHECK((mine - dense).block<3, 3>(0, 0).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, dense.cwiseAbs().maxCoeff()));
    }
  }

  TEST_CASE("resolvent block is diagonal without parity breaking") {
    const QbsParams q(1.2, 0.0, 1.1);
    const auto c = channel_constants(q, 0.4);
    const auto m = resolvent(q, 0.4);
    CHECK(std::abs(m.block(0, 1)) == 0.0);
    CHECK(std::abs(m.block(0, 0) - 1.0 / (c.alpha_plus - kI * 0.4)) < 1e-15);
    CHECK(std::abs(m.block(1, 1) - 1.0 / (c.alpha_minus - kI * 0.4)) < 1e-15);
  }

  TEST_CASE("ground-state pole and degenerate resolvent") {
    const auto m = resolvent(kRef, 0.0);
    CHECK(m.has_ground_pole());
    CHECK_THROWS_AS(m(BasisState::GG, BasisState::GG), GroundStatePole);
    CHECK(std::isfinite(m.dense().cwiseAbs().maxCoeff()));
    CHECK_NOTHROW(m(BasisState::PLUS, BasisState::MINUS));
    CHECK_THROWS_AS(resolvent(QbsParams(0, 0.3, kPi), 0.0), DegenerateResolvent);
    CHECK_THROWS_AS(propagated_resolvent(QbsParams(0, 0.3, kPi), 1.0, 0.0), DegenerateResolvent);
    CHECK_THROWS_AS(propagated_resolvent(kRef, 1.0, 0.0)(BasisState::GG, BasisState::GG), GroundStatePole);
  }

  TEST_CASE("propagator") {
    CHECK(max_abs_diff(propagator(kRef, 0.0).dense(), Eigen::Matrix4cd::Identity()) < 1e-15);
    const auto u = propagator(kRef, 0.7);
    const cplx want[4] = {cplx(0.14622373302208535309, -0.2081485333075909131),
                          cplx(-0.093136111249369853438, -0.019683567017370375983),
                          cplx(0.093136111249369853438, 0.019683567017370375983),
                          cplx(0.55032159692331247451, 0.75830461430842306174)};
    for (int i = 0; i < 4; ++i) CHECK(std::abs(u.block(i / 2, i % 2) - want[i]) < 1e-14);
    CHECK(std::abs(u(BasisState::EE, BasisState::EE) - 0.24659696394160647694) < 1e-15);
    CHECK(u(BasisState::GG, BasisState::GG) == cplx(1.0));

    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> ut(0.0, 5.0);
    for (int k = 0; k < 100; ++k) {
      const auto d = testing::draw(rng);
      const QbsParams q(d.g, d.phi, d.theta);
      const double t1 = ut(rng), t2 = ut(rng);
      const Eigen::Matrix4cd prod = propagator(q, t1).dense() * propagator(q, t2).dense();
      CHECK(max_abs_diff(propagator(q, t1 + t2).dense(), prod) < 1e-12);
      CHECK(max_abs_diff(propagator(q, t1).dense(), oracle::propagator(d.g, d.phi, d.theta, t1)) < 1e-10);
    }
  }

  TEST_CASE("propagated resolvent") {
    const auto n = propagated_resolvent(kRef, 0.7, 0.2);
    const cplx want[4] = {cplx(0.0033226503010349476951, -0.11945735962158013544),
                          cplx(-0.013151381897377884052, -0.060543384980730476513),
                          cplx(0.013151381897377884052, 0.060543384980730476513),
                          cplx(-0.46268922372544049809, 0.37818444983165728844)};
    for (int i = 0; i < 4; ++i) CHECK(std::abs(n.block(i / 2, i % 2) - want[i]) < 1e-14);
    CHECK(std::abs(n(BasisState::EE, BasisState::EE) - cplx(0.12207770492158736482, 0.012207770492158736482)) < 1e-15);

    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> ut(0.0, 5.0);
    for (int k = 0; k < 200; ++k) {
      const auto d = testing::draw(rng);
      const QbsParams q(d.g, d.phi, d.theta);
      if (std::abs(channel_constants(q, d.p).d_of_p) < 1e-6 || d.p == 0.0) continue;
      const double tau = ut(rng);
      const Eigen::Matrix4cd m = resolvent(q, d.p).dense();
      const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
      CHECK(max_abs_diff(propagated_resolvent(q, 0.0, d.p).dense(), m) < 1e-13 * scale);
      const Eigen::Matrix4cd um = propagator(q, tau).dense() * m;
      CHECK(max_abs_diff(propagated_resolvent(q, tau, d.p).dense(), um) < 1e-12 * scale);
    }
  }

  TEST_CASE("antisymmetry and phi parity of off-diagonal entries") {
    std::mt19937_64 rng(16);
    for (int k = 0; k < 200; ++k) {
      const auto d = testing::draw(rng);
      const QbsParams q(d.g, d.phi, d.theta);
      const QbsParams qm = q.with_phi(-q.phi());
      if (std::abs(channel_constants(q, d.p).d_of_p) < 1e-6) continue;
      const Matrix4C mats[4] = {effective_hamiltonian(q), resolvent(q, d.p), propagator(q, 1.3),
                                propagated_resolvent(q, 1.3, d.p)};
      const Matrix4C flipped[4] = {effective_hamiltonian(qm), resolvent(qm, d.p), propagator(qm, 1.3),
                                   propagated_resolvent(qm, 1.3, d.p)};
      for (int i = 0; i < 4; ++i) {
        CHECK(mats[i].block(0, 1) == -mats[i].block(1, 0));
        CHECK(std::abs(mats[i].block(0, 1) + flipped[i].block(0, 1)) < 1e-14);
        CHECK(std::abs(mats[i].block(0, 0) - flipped[i].block(0, 0)) < 1e-14);
        CHECK(std::abs(mats[i].block(1, 1) - flipped[i].block(1, 1)) < 1e-14);
        // only EE, PLUS, MINUS couple; EE and GG stay on the diagonal
        for (int j = 1; j < 4; ++j) {
          CHECK(mats[i].dense()(0, j) == cplx(0.0));
          CHECK(mats[i].dense()(j, 0) == cplx(0.0));
        }
        for (int j = 0; j < 3; ++j) {
          CHECK(mats[i].dense()(3, j) == cplx(0.0));
          CHECK(mats[i].dense()(j, 3) == cplx(0.0));
        }
      }
    }
  }

  TEST_CASE("either square root of the discriminant gives the same matrices") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 200; ++k) {
      const auto d = testing::draw(rng);
      const QbsParams q(d.g, d.phi, d.theta);
      if (std::abs(channel_constants(q, d.p).d_of_p) < 1e-6) continue;
      const cplx root = std::sqrt(channel_constants(q, 0).big_delta);
      const double tau = 0.1 + 0.05 * k;
      const auto u1 = detail::propagator_with_root(q, tau, root).dense();
      const auto u2 = detail::propagator_with_root(q, tau, -root).dense();
      CHECK(max_abs_diff(u1, u2) < 1e-14);
      const auto n1 = detail::propagated_resolvent_with_root(q, tau, d.p, root).dense();
      const auto n2 = detail::propagated_resolvent_with_root(q, tau, d.p, -root).dense();
      CHECK(max_abs_diff(n1, n2) < 1e-14 * std::max(1.0, n1.cwiseAbs().maxCoeff()));
    }
  }

  TEST_CASE("exceptional point (vanishing discriminant) is regular") {
    // g = G, theta = 0, phi = -pi/2: alpha_- - alpha_+ = -2, beta = -1
    const QbsParams ep(1.0, -kPi / 2, 0.0);
    CHECK(std::abs(channel_constants(ep, 0).big_delta) < 1e-14);
    for (double tau : {0.0, 0.3, 2.0, 9.0}) {
      const auto u = propagator(ep, tau).dense();
      CHECK(max_abs_diff(u, oracle::propagator(1.0, -kPi / 2, 0.0, tau)) < 1e-10);
      const auto near = propagator(ep.with_phi(-kPi / 2 + 1e-9), tau).dense();
      CHECK(max_abs_diff(u, near) < 1e-7);
    }
    // just inside the series threshold the series agrees with the trig form
    const cplx d = channel_constants(ep.with_phi(-kPi / 2 + 1e-4), 0).big_delta;
    const cplx root = std::sqrt(d);
    const double tau = std::sqrt(4e-3 / std::abs(d)) * (1 - 1e-9);
    const auto a = detail::half_angle(d, tau, root);
    const cplx c = std::cos(root * tau / 2.0), sn = std::sin(root * tau / 2.0) / root;
    CHECK(std::abs(a.cos_half - c) < 1e-12 * std::abs(c));
    CHECK(std::abs(a.sinc_half - sn) < 1e-12 * std::abs(sn));
  }

  TEST_CASE("single-excitation block decays at the slowest eigenmode rate") {
    // |U_ij| <= C (1 + tau) e^{-(G - |Im sqrt(D)|/2) tau}; the extra (1 + tau)
    // covers non-normal growth next to exceptional points.
    std::mt19937_64 rng(18);
    for (int k = 0; k < 200; ++k) {
      auto d = testing::draw(rng, 2.0);
      const QbsParams q(d.g, d.phi, d.theta);
      const double rate = 1.0 - std::abs(std::sqrt(channel_constants(q, 0).big_delta).imag()) / 2;
      CHECK(rate >= -1e-12);
      for (double tau = 0.0; tau <= 20.0; tau += 0.5) {
        const double bound = 10.0 * (1 + tau) * std::exp(-rate * tau);
        CHECK(propagator(q, tau).dense().block<2, 2>(1, 1).cwiseAbs().maxCoeff() <= bound);
      }
    }
  }

  TEST_CASE("pattern elements reproduce the collective amplitudes") {
    // v_R^T O v_L from explicit product-basis vectors
    const double th = 0.9;
    const Eigen::Matrix4cd product = oracle::heff_product(1.1, 0.4, th);
    const Matrix4C parity(oracle::to_parity(product));
    Eigen::Vector4cd in_r = Eigen::Vector4cd::Zero(), in_l = Eigen::Vector4cd::Zero();
    in_r(1) = std::exp(-kI * th / 2.0), in_r(2) = std::exp(kI * th / 2.0);
    in_l(1) = std::exp(kI * th / 2.0), in_l(2) = std::exp(-kI * th / 2.0);
    const cplx direct = (in_r.transpose() * product * in_l)(0, 0);
    CHECK(std::abs(pattern_element(parity, Direction::Right, Direction::Left, th) - direct) < 1e-14);
  }
}
