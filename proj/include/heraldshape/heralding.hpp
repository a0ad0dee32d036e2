#pragma once

#include "heraldshape/shaping.hpp"

namespace heraldshape {

/// Normalized conditional signal amplitude plus its pre-normalization weight
/// (proportional to the heralding probability density of this outcome).
struct HeraldedShape {
  Field1D amplitude;   // unit-norm psi(t | outcome)
  double weight = 0.0;
  std::string herald_descriptor;
};

/// Spectral filter in front of the click detector, described in the time
/// domain by the impulse response F(tau) e^{-i omega' tau}.
struct SpectralFilter {
  enum class Kind { SinglePole, Gaussian };

  Kind kind = Kind::SinglePole;
  double bandwidth = 1.0;  // omega_f > 0
  double center = 0.0;     // omega', offset from the carrier

  SpectralFilter(Kind k, double omega_f, double omega_center)
      : kind(k), bandwidth(omega_f), center(omega_center) {
    if (!(bandwidth > 0.0))
      throw std::invalid_argument("SpectralFilter: bandwidth must be positive");
  }

  bool causal() const { return kind == Kind::SinglePole; }

  /// Envelope F(tau), unit peak. SinglePole: e^{-omega_f tau} for tau >= 0,
  /// zero before. Gaussian: e^{-omega_f^2 tau^2 / 2}.
  double envelope(double tau) const {
    if (kind == Kind::SinglePole)
      return tau >= 0.0 ? std::exp(-bandwidth * tau) : 0.0;
    const double x = bandwidth * tau;
    return std::exp(-0.5 * x * x);
  }
};

/// Frequency outcome distribution gamma(w) = e^{-w^2/w_d^2} / (sqrt(pi) w_d);
/// uncertainty 0 means ideal (delta-distributed) resolution.
struct DetectorSpectralResponse {
  double uncertainty = 0.0;

  explicit DetectorSpectralResponse(double omega_d) : uncertainty(omega_d) {
    if (uncertainty < 0.0)
      throw std::invalid_argument("DetectorSpectralResponse: uncertainty must be >= 0");
  }
};

/// Heralded-signal density matrix rho(t, t'); both axes on the signal grid.
struct SignalDensityMatrix {
  Field2D matrix;  // trace-normalized: sum rho_kk * dt == 1

  double trace() const;
  /// Max |rho(t,t') - conj(rho(t',t))| over all elements.
  double hermiticity_defect() const;
  /// Eigenvalues of the (Hermitized) matrix, ascending.
  Eigen::VectorXd eigenvalues() const;
  /// Throws NumericsError unless Hermitian (1e-9), trace 1 (1e-9) and
  /// PSD (min eigenvalue >= -1e-8 * max).
  void validate() const;
};

/// Options for the frequency quadrature behind heralded_density_matrix.
struct FrequencyQuadrature {
  int nodes = 101;          // odd, >= 33
  double span_sigmas = 4.0; // integrate over center +/- span_sigmas * omega_d
};

/// psi(t|w') from an ideal frequency-resolved idler detection:
///   psi(t|w')  proportional to  integral dt' M(t, t') e^{+i w' t'}
/// where M is the (modulated) joint field.
HeraldedShape herald_frequency_resolved(const Field2D& modulated, double omega);

/// Time-resolved control case: slice at a fixed idler detection time.
HeraldedShape herald_time_resolved(const Field2D& modulated, double t_idler);

/// Spectral-filter + time-resolved click model:
///   psi(t|t_click) proportional to
///   integral dtau F(t_click - tau) e^{-i w'(t_click - tau)} M(t, tau).
HeraldedShape herald_filtered(const Field2D& modulated, const SpectralFilter& filter,
                              double t_click);

/// Detector with frequency uncertainty w_d: incoherent average of the
/// unnormalized frequency-resolved projections,
///   rho(t,t'|w0') = integral dw' gamma(w'-w0') psi(t|w') psi*(t'|w'),
/// trace-normalized after accumulation.
SignalDensityMatrix heralded_density_matrix(const Field2D& modulated, double omega0,
                                            const DetectorSpectralResponse& detector,
                                            const FrequencyQuadrature& quad = {});

/// Heralding of a classical mixture: each component is modulated and heralded
/// separately; projectors combine with weight * component heralding weight.
SignalDensityMatrix herald_mixture(const ClassicalMixture& mixture, const Modulator& mod,
                                   double omega);

}  // namespace heraldshape
