#pragma once

#include <utility>
#include <vector>

#include "heraldshape/grid.hpp"

namespace heraldshape {

/// Gaussian biphoton model parameters: correlation time t_c and
/// unconditional width t_u, both as 1/e widths of the e^{-x^2/2t^2} exponent.
struct GaussianBiphotonParams {
  double t_c;
  double t_u;

  GaussianBiphotonParams(double tc, double tu) : t_c(tc), t_u(tu) {
    if (!(t_c > 0.0) || !(t_u > 0.0))
      throw std::invalid_argument("GaussianBiphotonParams: widths must be positive");
    if (t_c > t_u)
      throw std::invalid_argument("GaussianBiphotonParams: t_c must not exceed t_u");
  }
};

/// Normalized joint two-photon amplitude Psi(t, t').
struct JointAmplitude {
  Field2D amplitude;
  std::string label;
  /// Pre-normalization norm^2 as sampled (1 when the analytic prefactor
  /// was already exact on this grid).
  double norm_correction = 1.0;
};

/// Classically correlated (non-entangled) ensemble of pure joint states.
struct ClassicalMixture {
  std::vector<std::pair<double, JointAmplitude>> components;

  void validate() const;
};

/// Sample the Gaussian model
///   Psi(t,t') = e^{-(t-t')^2/2 t_c^2} e^{-(t+t')^2/2 t_u^2} sqrt(2/(pi t_c t_u))
/// and renormalize numerically. Requires dt <= t_c on both axes; trapezoid
/// sums of Gaussians are spectrally accurate from ~2 samples per width, so
/// dt <= t_c/2 is already effectively exact.
JointAmplitude make_gaussian_joint(const GaussianBiphotonParams& params,
                                   const TimeGrid& grid_s, const TimeGrid& grid_i);

/// Product state Psi(t,t') = f(t) g(t'), normalized.
JointAmplitude make_separable(const Field1D& f_signal, const Field1D& g_idler);

/// Normalized copy of a user-supplied tabulated amplitude.
JointAmplitude make_tabulated(const Field2D& values, std::string label = "tabulated");

/// Schmidt purity Tr(rho_s^2) of the reduced signal state, from the singular
/// values of the sampled amplitude: sum s_k^4 / (sum s_k^2)^2. 1 iff separable.
double entanglement_proxy(const JointAmplitude& state);

}  // namespace heraldshape
