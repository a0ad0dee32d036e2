#include "heraldshape/metrics.hpp"

namespace heraldshape {

namespace {

Verdict grade(double ratio) {
  if (ratio <= RegimeReport::kSatisfied) return Verdict::Satisfied;
  if (ratio <= RegimeReport::kMarginal) return Verdict::Marginal;
  return Verdict::Violated;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Marginal: return "marginal";
    default: return "violated";
  }
}

double purity(const SignalDensityMatrix& rho) {
  if (!rho.matrix.finite()) throw NumericsError("purity: non-finite density matrix");
  if (rho.hermiticity_defect() > 1e-9)
    throw NumericsError("purity: density matrix not Hermitian");
  if (std::abs(rho.trace() - 1.0) > 1e-9)
    throw NumericsError("purity: density matrix trace differs from 1");
  const double dt = rho.matrix.grid_s.dt;
  return rho.matrix.values.squaredNorm() * dt * dt;
}

double fidelity(const Field1D& a, const Field1D& b) {
  if (!a.grid.compatible(b.grid))
    throw std::invalid_argument("fidelity: grids differ");
  const double na2 = a.norm2();
  const double nb2 = b.norm2();
  if (!(na2 > 0.0) || !(nb2 > 0.0))
    throw std::invalid_argument("fidelity: zero field");
  const Complex overlap = (a.values.adjoint() * b.values)(0) * a.grid.dt;
  return std::norm(overlap) / (na2 * nb2);
}

double fidelity(const HeraldedShape& psi, const Field1D& target) {
  return fidelity(target, psi.amplitude);
}

RateEstimate heralding_rate_modulated(double omega_f, double t_c, double t_m,
                                      double t_u) {
  if (!(omega_f > 0.0) || !(t_c > 0.0) || !(t_m > 0.0) || !(t_u > 0.0))
    throw std::invalid_argument("heralding_rate_modulated: parameters must be positive");
  RateEstimate r;
  r.modulator_pass = t_m / t_u;
  r.acceptance_clamped = omega_f * t_c > 1.0;
  r.filter_acceptance = std::min(omega_f * t_c, 1.0);
  r.formula = omega_f * t_c * r.modulator_pass;
  return r;
}

RateEstimate heralding_rate_pulsed(double omega_f, double t_c) {
  if (!(omega_f > 0.0) || !(t_c > 0.0))
    throw std::invalid_argument("heralding_rate_pulsed: parameters must be positive");
  RateEstimate r;
  r.modulator_pass = 1.0;
  r.acceptance_clamped = omega_f * t_c > 1.0;
  r.filter_acceptance = std::min(omega_f * t_c, 1.0);
  r.formula = omega_f * t_c;
  return r;
}

RegimeReport validate_regime(double t_c, double t_m, double t_u, double omega_f,
                             double omega_d) {
  if (!(t_c > 0.0) || !(t_m > 0.0) || !(t_u > 0.0))
    throw std::invalid_argument("validate_regime: time scales must be positive");
  RegimeReport r;
  r.ratio_cm = t_c / t_m;
  r.ratio_mu = t_m / t_u;
  r.correlation = grade(r.ratio_cm);
  r.window = t_m < t_u ? Verdict::Satisfied : Verdict::Violated;
  if (omega_f > 0.0) {
    r.ratio_mf = t_m * omega_f;
    r.filter = grade(r.ratio_mf);
    r.filter_acceptance_clamped = omega_f * t_c > 1.0;
  }
  if (omega_d > 0.0) {
    r.ratio_md = t_m * omega_d;
    r.detector = grade(r.ratio_md);
  }
  return r;
}

double amplitude_width(const Field1D& f) {
  Eigen::VectorXd p = f.values.array().abs2();
  const double total = p.sum();
  if (!(total > 0.0)) throw std::invalid_argument("amplitude_width: zero field");
  double mean = 0.0, second = 0.0;
  for (Index k = 0; k < f.grid.n; ++k) mean += p(k) * f.grid.t(k);
  mean /= total;
  for (Index k = 0; k < f.grid.n; ++k) {
    const double d = f.grid.t(k) - mean;
    second += p(k) * d * d;
  }
  second /= total;
  return std::sqrt(2.0 * second);
}

double phase_slope(const Field1D& f) {
  double num = 0.0, den = 0.0;
  for (Index k = 0; k + 1 < f.grid.n; ++k) {
    const Complex step = f.values(k + 1) * std::conj(f.values(k));
    const double w = std::abs(step);
    if (w == 0.0) continue;
    num += w * std::arg(step);
    den += w;
  }
  if (!(den > 0.0)) throw std::invalid_argument("phase_slope: zero field");
  return num / (den * f.grid.dt);
}

}  // namespace heraldshape
