#include "heraldshape/analytic.hpp"

#include <cmath>

namespace heraldshape {

double purity_closed_form(const GaussianScenario& s) {
  // Work in units of t_m: a = t_c/t_m, b = t_u/t_m, x = t_m * omega_d.
  const double a2 = (s.t_c / s.t_m) * (s.t_c / s.t_m);
  const double b2 = (s.t_u / s.t_m) * (s.t_u / s.t_m);
  const double x2 = (s.t_m * s.omega_d) * (s.t_m * s.omega_d);

  const double num1 = a2 + 4.0 + b2;
  const double num2 = b2 + a2 * (b2 + 1.0 + b2 * x2);
  const double den1 = b2 + a2 * (b2 + 1.0);
  const double den2 = a2 + 4.0 + b2 + x2 * (a2 + b2);
  return std::sqrt((num1 * num2) / (den1 * den2));
}

double purity_limit(double t_m, double omega_d) {
  if (!(t_m > 0.0)) throw std::invalid_argument("purity_limit: t_m must be positive");
  if (omega_d < 0.0) throw std::invalid_argument("purity_limit: omega_d must be >= 0");
  const double x = t_m * omega_d;
  return 1.0 / std::sqrt(1.0 + x * x);
}

HeraldedShapeModel gaussian_heralded_width(const GaussianScenario& s) {
  // psi(t|w') ~ integral dt' e^{-t'^2/2t_m^2} Psi(t,t') e^{i w' t'}.
  // Collecting the t' exponent: -(alpha/2) t'^2 + (beta t + i w') t' - (g0/2) t^2
  // with alpha = 1/t_m^2 + 1/t_c^2 + 1/t_u^2, beta = 1/t_c^2 - 1/t_u^2,
  // g0 = 1/t_c^2 + 1/t_u^2. The Gaussian integral leaves
  //   psi(t) ~ exp((beta t + i w')^2 / 2 alpha - g0 t^2 / 2),
  // so |psi| = e^{-t^2/2w^2} with 1/w^2 = g0 - beta^2/alpha, and the w'-linear
  // phase term is (beta/alpha) w' t.
  const double inv_c2 = 1.0 / (s.t_c * s.t_c);
  const double inv_u2 = 1.0 / (s.t_u * s.t_u);
  const double inv_m2 = 1.0 / (s.t_m * s.t_m);
  const double alpha = inv_m2 + inv_c2 + inv_u2;
  const double beta = inv_c2 - inv_u2;
  const double g0 = inv_c2 + inv_u2;
  const double inv_w2 = g0 - beta * beta / alpha;
  return HeraldedShapeModel{1.0 / std::sqrt(inv_w2), beta / alpha};
}

}  // namespace heraldshape
