#pragma once

#include "heraldshape/states.hpp"

namespace heraldshape {

/// Idler-arm temporal modulator: complex transmission A(t'), |A| <= 1,
/// nonzero only within a finite window.
struct Modulator {
  Field1D transmission;
  /// Width convention: the Gaussian 1/e parameter t_m for gaussian_modulator,
  /// otherwise the smallest window containing 99.9% of the |A|^2 energy.
  double support_width = 0.0;
  std::string label;

  /// [t_first, t_last] of samples with |A| above threshold.
  std::pair<double, double> support(double threshold = 1e-12) const;
};

struct ModulatedState {
  Field2D field;          // A(t') Psi(t, t'), not renormalized
  double transmitted_fraction = 0.0;  // norm^2 out / norm^2 in
};

/// A(t) = e^{-t^2 / 2 t_m^2}, truncated to zero where A < e^{-8} (|t| > 4 t_m).
Modulator gaussian_modulator(double t_m, const TimeGrid& grid);

/// Constant complex amplitude inside [t_on, t_off], zero outside.
Modulator rect_modulator(double t_on, double t_off, Complex amplitude,
                         const TimeGrid& grid);

/// Arbitrary sampled transmission; rejects any sample with |A| > 1.
Modulator tabulated_modulator(const Field1D& values, std::string label = "tabulated");

/// Idler modulation Psi(t,t') -> A(t') Psi(t,t'); pointwise along the idler
/// axis only. Returns the unnormalized field and the transmitted fraction
/// T in [0, 1].
ModulatedState apply_modulator(const JointAmplitude& state, const Modulator& mod);

/// Same transform on an already-modulated (unnormalized) field.
ModulatedState apply_modulator(const Field2D& field, const Modulator& mod);

}  // namespace heraldshape
