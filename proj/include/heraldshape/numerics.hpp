#pragma once

#include "heraldshape/grid.hpp"

namespace heraldshape {

// Sign conventions, fixed once for the whole library:
//   * fourier_kernel_project uses the kernel e^{+i w t} (frequency-resolved
//     heralding projection).
//   * dft uses e^{-i w t} with the physicist's density normalization:
//       F_m = dt * sum_k f_k e^{-i w_m t_k},  w_m = (m - n/2) * 2*pi/(n*dt),
//     so Parseval reads  sum |F_m|^2 * dw / (2*pi) = sum |f_k|^2 * dt.
// All frequencies are angular (rad per time unit).

/// Trapezoidal approximation of the integral of f over its grid.
Complex integrate_1d(const Field1D& f);

/// Trapezoidal approximation of  integral f(t) e^{+i w t} dt.
/// With w == 0 this is bit-identical to integrate_1d.
Complex fourier_kernel_project(const Field1D& f, double omega);

/// Discrete linear convolution scaled by dt; output grid spans the full support.
Field1D convolve_1d(const Field1D& f, const Field1D& g);

struct Spectrum {
  Eigen::VectorXd omegas;  // (m - n/2) * domega
  VectorXcd values;
};

/// Direct DFT in the convention above.
Spectrum dft(const Field1D& f);

/// Frequency-domain norm^2 in the chosen convention: sum |F|^2 * dw / (2*pi).
double spectral_norm2(const Spectrum& s, const TimeGrid& grid);

/// Grid centered on `center` with half-width >= half_span and step <= max_dt.
TimeGrid auto_grid(double half_span, double max_dt, double center = 0.0);

}  // namespace heraldshape
