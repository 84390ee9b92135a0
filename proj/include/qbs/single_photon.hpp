#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qbs/core_model.hpp"

namespace qbs {

// r_rl = r_{r->l}(p), t_rr = t_{r->r}(p), r_lr = r_{l->r}(-p), t_ll = t_{l->l}(-p)
struct ScatteringSet {
  cplx r_rl;
  cplx t_rr;
  cplx r_lr;
  cplx t_ll;
  double p;
};

ScatteringSet scattering_set(const QbsParams& params, double p);
// Same amplitudes from <out| M |in> sums over the (+, -) block.
ScatteringSet scattering_set_matrix_elements(const QbsParams& params, double p);

// Output intensities for unit-amplitude coherent inputs from both sides:
// p_left = |r_rl + t_ll|^2, p_right = |r_lr + t_rr|^2, summing to 2.
struct PortProbabilities {
  double p_left;
  double p_right;

  // Share of the total output leaving each port (sums to 1).
  double left_fraction() const { return p_left / (p_left + p_right); }
  double right_fraction() const { return p_right / (p_left + p_right); }
};

PortProbabilities output_probabilities(const QbsParams& params, double p);

// Laser detuning delta maps to p = kDetuningSign * delta (fixed by matching
// the anti-bunched left port at theta = pi/8, phi = -0.87 pi).
inline constexpr int kDetuningSign = +1;
inline double momentum_from_detuning(double delta) { return kDetuningSign * delta; }

struct RtValue {
  double reflectance;
  double transmittance;
};

// Row-major in theta: values[i * phi.size() + j].
struct RtGrid {
  std::vector<double> theta;
  std::vector<double> phi;
  std::vector<std::optional<RtValue>> values;
};

RtGrid reflectance_transmittance_grid(const QbsParams& base, std::span<const double> theta,
                                      std::span<const double> phi, double p);

}  // namespace qbs
