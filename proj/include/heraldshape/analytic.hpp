#pragma once

#include <stdexcept>
#include <string>

namespace heraldshape {

/// Parameter set of the all-Gaussian model: joint-state widths t_c <= t_u,
/// modulator width t_m, detector frequency uncertainty omega_d (>= 0).
struct GaussianScenario {
  double t_c;
  double t_u;
  double t_m;
  double omega_d;

  GaussianScenario(double tc, double tu, double tm, double wd)
      : t_c(tc), t_u(tu), t_m(tm), omega_d(wd) {
    if (!(t_c > 0.0) || !(t_u > 0.0) || !(t_m > 0.0))
      throw std::invalid_argument("GaussianScenario: time scales must be positive");
    if (omega_d < 0.0)
      throw std::invalid_argument("GaussianScenario: omega_d must be >= 0");
  }
};

/// Closed-form heralded-state purity of the all-Gaussian model. Evaluated on
/// t_m-normalized ratios so extreme t_u cannot overflow. Exactly 1 at
/// omega_d = 0; depends only on the dimensionless ratios.
double purity_closed_form(const GaussianScenario& s);

/// Strong-correlation limit (t_c -> 0, t_u -> inf) of the purity:
/// 1 / sqrt(1 + t_m^2 omega_d^2).
double purity_limit(double t_m, double omega_d);

struct HeraldedShapeModel {
  /// 1/e amplitude parameter w of |psi(t|0)| = e^{-t^2 / 2 w^2}.
  double width;
  /// Phase slope of psi(t|w') per unit w': psi picks up e^{i c w' t} with
  /// c -> 1 in the strong-correlation limit.
  double frequency_response;
};

/// Gaussian closed form of the frequency-resolved heralded shape, obtained by
/// completing the square in the idler integral of the all-Gaussian model.
HeraldedShapeModel gaussian_heralded_width(const GaussianScenario& s);

}  // namespace heraldshape
