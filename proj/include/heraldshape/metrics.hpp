#pragma once

#include "heraldshape/heralding.hpp"

namespace heraldshape {

enum class Verdict { Satisfied, Marginal, Violated };

const char* to_string(Verdict v);

/// Verdicts for the operating-regime inequalities
///   t_c << t_m < t_u,  t_m << 1/omega_f,  t_m * omega_d << 1.
/// "<<" thresholds: satisfied at ratio <= 1/10, marginal at <= 1/3.
struct RegimeReport {
  double ratio_cm = 0.0;  // t_c / t_m
  double ratio_mu = 0.0;  // t_m / t_u
  double ratio_mf = 0.0;  // t_m * omega_f
  double ratio_md = 0.0;  // t_m * omega_d

  Verdict correlation = Verdict::Violated;     // t_c << t_m
  Verdict window = Verdict::Violated;          // t_m < t_u (strict)
  Verdict filter = Verdict::Satisfied;         // t_m << 1/omega_f
  Verdict detector = Verdict::Satisfied;       // t_m * omega_d << 1

  bool filter_acceptance_clamped = false;      // omega_f * t_c > 1

  static constexpr double kSatisfied = 1.0 / 10.0;
  static constexpr double kMarginal = 1.0 / 3.0;

  bool any_violated() const {
    return correlation == Verdict::Violated || window == Verdict::Violated ||
           filter == Verdict::Violated || detector == Verdict::Violated;
  }
};

/// Tr(rho^2) = sum_jk |rho_jk|^2 dt^2. Checks the cheap invariants
/// (finiteness, Hermiticity, trace) and throws on violation; full PSD
/// verification lives in SignalDensityMatrix::validate.
double purity(const SignalDensityMatrix& rho);

/// Overlap fidelity |<target/||target||, psi>|^2 with the L2 inner product.
double fidelity(const HeraldedShape& psi, const Field1D& target);
double fidelity(const Field1D& a, const Field1D& b);

struct RateEstimate {
  double formula = 0.0;            // the estimate itself
  double filter_acceptance = 0.0;  // min(omega_f * t_c, 1)
  double modulator_pass = 0.0;     // t_m / t_u (1 for the pulsed scheme)
  bool acceptance_clamped = false;
};

/// Modulated-idler heralding rate estimate R ~ omega_f * t_c * t_m / t_u.
RateEstimate heralding_rate_modulated(double omega_f, double t_c, double t_m, double t_u);

/// Pulsed-pump variant R ~ omega_f * t_c (equals the modulated rate * t_u/t_m).
RateEstimate heralding_rate_pulsed(double omega_f, double t_c);

/// omega_f <= 0 or omega_d < 0 are treated as "not part of the scenario" and
/// their conditions report Satisfied.
RegimeReport validate_regime(double t_c, double t_m, double t_u, double omega_f,
                             double omega_d);

/// Intensity-weighted second moment width: |f|^2 ~ e^{-t^2/w^2} has
/// width(f) == w. Matches the e^{-t^2/2w^2} amplitude parameter convention.
double amplitude_width(const Field1D& f);

/// Intensity-weighted mean discrete phase gradient d(arg f)/dt.
double phase_slope(const Field1D& f);

}  // namespace heraldshape
