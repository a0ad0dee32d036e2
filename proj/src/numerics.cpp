#include "heraldshape/numerics.hpp"

namespace heraldshape {

namespace {

// Shared kernel-weighted trapezoid loop. integrate_1d goes through here with
// omega = 0, which multiplies every sample by exactly (1, 0), so the two
// entry points are bit-identical as required.
Complex trapezoid_project(const Field1D& f, double omega) {
  if (!f.finite()) throw NumericsError("non-finite field");
  const Index n = f.grid.n;
  const double dt = f.grid.dt;
  Complex acc(0.0, 0.0);
  for (Index k = 0; k < n; ++k) {
    double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
    Complex kernel = std::exp(Complex(0.0, omega * f.grid.t(k)));
    acc += w * f.values(k) * kernel;
  }
  return acc * dt;
}

}  // namespace

Complex integrate_1d(const Field1D& f) { return trapezoid_project(f, 0.0); }

Complex fourier_kernel_project(const Field1D& f, double omega) {
  if (std::abs(omega) > f.grid.nyquist())
    throw std::invalid_argument("frequency exceeds grid resolution");
  return trapezoid_project(f, omega);
}

Field1D convolve_1d(const Field1D& f, const Field1D& g) {
  if (!f.finite() || !g.finite()) throw NumericsError("non-finite field");
  const double dt = f.grid.dt;
  if (std::abs(dt - g.grid.dt) > 1e-12 * dt)
    throw std::invalid_argument("convolve_1d: mismatched dt");
  const Index nf = f.grid.n, ng = g.grid.n;
  const Index n = nf + ng - 1;
  VectorXcd out = VectorXcd::Zero(n);
  for (Index j = 0; j < nf; ++j) {
    const Complex fj = f.values(j);
    if (fj == Complex(0.0, 0.0)) continue;
    for (Index k = 0; k < ng; ++k) out(j + k) += fj * g.values(k);
  }
  out *= dt;
  return Field1D(TimeGrid(f.grid.t_start + g.grid.t_start, dt, n), std::move(out));
}

Spectrum dft(const Field1D& f) {
  if (!f.finite()) throw NumericsError("non-finite field");
  const Index n = f.grid.n;
  const double dw = f.grid.domega();
  Spectrum s;
  s.omegas.resize(n);
  s.values.resize(n);
  for (Index m = 0; m < n; ++m) {
    double omega = (static_cast<double>(m) - static_cast<double>(n / 2)) * dw;
    Complex acc(0.0, 0.0);
    for (Index k = 0; k < n; ++k)
      acc += f.values(k) * std::exp(Complex(0.0, -omega * f.grid.t(k)));
    s.omegas(m) = omega;
    s.values(m) = acc * f.grid.dt;
  }
  return s;
}

double spectral_norm2(const Spectrum& s, const TimeGrid& grid) {
  return s.values.squaredNorm() * grid.domega() / (2.0 * M_PI);
}

TimeGrid auto_grid(double half_span, double max_dt, double center) {
  if (!(half_span > 0.0) || !(max_dt > 0.0))
    throw std::invalid_argument("auto_grid: spans must be positive");
  Index n = static_cast<Index>(std::ceil(2.0 * half_span / max_dt)) + 1;
  if (n < 8) n = 8;
  const double dt = 2.0 * half_span / static_cast<double>(n - 1);
  return TimeGrid(center - half_span, dt, n);
}

}  // namespace heraldshape
