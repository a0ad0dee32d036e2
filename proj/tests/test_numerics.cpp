#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "heraldshape/numerics.hpp"

using namespace heraldshape;

namespace {

Field1D sample(const TimeGrid& g, const std::function<Complex(double)>& fn) {
  VectorXcd v(g.n);
  for (Index k = 0; k < g.n; ++k) v(k) = fn(g.t(k));
  return Field1D(g, std::move(v));
}

const double kSqrtPi = std::sqrt(M_PI);
const double kSqrt2Pi = std::sqrt(2.0 * M_PI);

}  // namespace

TEST_CASE("integrate_1d: zero integrand") {
  TimeGrid g(-3.0, 0.1, 61);
  CHECK(integrate_1d(sample(g, [](double) { return Complex(0.0); })) == Complex(0.0));
}

TEST_CASE("integrate_1d: Gaussian against the analytic integral") {
  TimeGrid g(-8.0, 16.0 / 511.0, 512);
  Complex v = integrate_1d(sample(g, [](double t) { return std::exp(-t * t); }));
  CHECK(std::abs(v - kSqrtPi) < 1e-10);
}

TEST_CASE("integrate_1d: unit rectangle") {
  TimeGrid g(0.0, 1.0 / 100.0, 101);
  Complex v = integrate_1d(sample(g, [](double) { return Complex(1.0); }));
  CHECK(std::abs(v - 1.0) < 1e-12);
}

TEST_CASE("integrate_1d: rejects non-finite fields") {
  TimeGrid g(0.0, 0.1, 16);
  Field1D f = sample(g, [](double) { return Complex(1.0); });
  f.values(3) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(integrate_1d(f), NumericsError);
}

TEST_CASE("fourier_kernel_project: Gaussian transforms") {
  TimeGrid g(-10.0, 20.0 / 1023.0, 1024);
  Field1D f = sample(g, [](double t) { return std::exp(-0.5 * t * t); });
  CHECK(std::abs(fourier_kernel_project(f, 0.0) - kSqrt2Pi) < 1e-10);
  // Analytic transform of e^{-t^2/2} at omega = 1: sqrt(2 pi) e^{-1/2}.
  CHECK(std::abs(fourier_kernel_project(f, 1.0) - kSqrt2Pi * std::exp(-0.5)) < 1e-9);
}

TEST_CASE("fourier_kernel_project: zero field, any frequency") {
  TimeGrid g(-1.0, 0.01, 256);
  Field1D f = sample(g, [](double) { return Complex(0.0); });
  CHECK(fourier_kernel_project(f, 17.0) == Complex(0.0));
}

TEST_CASE("fourier_kernel_project: rejects beyond-Nyquist frequencies") {
  TimeGrid g(-1.0, 0.1, 32);
  Field1D f = sample(g, [](double) { return Complex(1.0); });
  CHECK_THROWS_AS(fourier_kernel_project(f, 1.1 * g.nyquist()), std::invalid_argument);
}

TEST_CASE("fourier_kernel_project at 0 is bit-identical to integrate_1d") {
  TimeGrid g(-5.0, 0.037, 311);
  Field1D f = sample(g, [](double t) { return Complex(std::sin(3.0 * t), std::cos(t)); });
  Complex a = integrate_1d(f);
  Complex b = fourier_kernel_project(f, 0.0);
  CHECK(a.real() == b.real());
  CHECK(a.imag() == b.imag());
}

TEST_CASE("convolve_1d: delta-like impulse is the identity") {
  TimeGrid g(-2.0, 0.05, 81);
  Field1D f = sample(g, [](double t) { return std::exp(-t * t) * Complex(1.0, 0.5); });
  TimeGrid gd(0.0, 0.05, 8);
  VectorXcd d = VectorXcd::Zero(8);
  d(0) = 1.0 / 0.05;
  Field1D impulse(gd, d);
  Field1D out = convolve_1d(f, impulse);
  for (Index k = 0; k < g.n; ++k) CHECK(std::abs(out.values(k) - f.values(k)) < 1e-12);
}

TEST_CASE("convolve_1d: Gaussian widths add in quadrature") {
  const double a = 0.7, b = 1.3;
  TimeGrid g(-10.0, 20.0 / 800.0, 801);
  auto unit_gauss = [&](double w) {
    return sample(g, [w](double t) {
      return std::exp(-t * t / (2.0 * w * w)) / (w * kSqrt2Pi);
    });
  };
  Field1D out = convolve_1d(unit_gauss(a), unit_gauss(b));
  const double c = std::hypot(a, b);
  for (Index k = 0; k < out.grid.n; ++k) {
    const double t = out.grid.t(k);
    const double expected = std::exp(-t * t / (2.0 * c * c)) / (c * kSqrt2Pi);
    CHECK(std::abs(out.values(k).real() - expected) < 1e-6);
    CHECK(std::abs(out.values(k).imag()) < 1e-12);
  }
}

TEST_CASE("convolve_1d: zero field and mismatched dt") {
  TimeGrid g(-1.0, 0.1, 32);
  Field1D f = sample(g, [](double t) { return Complex(t); });
  Field1D z = sample(g, [](double) { return Complex(0.0); });
  Field1D out = convolve_1d(f, z);
  CHECK(out.values.cwiseAbs().maxCoeff() == 0.0);
  TimeGrid g2(-1.0, 0.2, 16);
  CHECK_THROWS_AS(convolve_1d(f, sample(g2, [](double) { return Complex(1.0); })),
                  std::invalid_argument);
}

TEST_CASE("quadrature is second order: halving dt shrinks error by >= 4x") {
  // sin(t) on [0,1] has nonzero boundary derivatives, so the trapezoid error
  // follows the h^2 Euler-Maclaurin term; its h^4 term has the same sign, so
  // the error ratio approaches 4 from above.
  const double exact = 1.0 - std::cos(1.0);
  auto error_at = [&](Index n) {
    TimeGrid g(0.0, 1.0 / static_cast<double>(n - 1), n);
    return std::abs(integrate_1d(sample(g, [](double t) { return std::sin(t); })) - exact);
  };
  const double e1 = error_at(129);
  const double e2 = error_at(257);
  CHECK(e1 / e2 >= 4.0);
}

TEST_CASE("Parseval holds in the documented DFT convention") {
  TimeGrid g(-4.0, 8.0 / 255.0, 256);
  Field1D f = sample(g, [](double t) {
    return Complex(std::exp(-t * t), 0.3 * std::sin(2.0 * t));
  });
  Spectrum s = dft(f);
  const double time_norm = f.norm2();
  const double freq_norm = spectral_norm2(s, g);
  CHECK(std::abs(time_norm - freq_norm) < 1e-10 * time_norm);
}

TEST_CASE("auto_grid meets span and resolution requests") {
  TimeGrid g = auto_grid(5.0, 0.03);
  CHECK(g.t_start <= -5.0 + 1e-12);
  CHECK(g.t_end() >= 5.0 - 1e-12);
  CHECK(g.dt <= 0.03 + 1e-15);
  CHECK(g.n >= 8);
}

TEST_CASE("TimeGrid rejects degenerate parameters") {
  CHECK_THROWS_AS(TimeGrid(0.0, -0.1, 32), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(0.0, 0.1, 4), std::invalid_argument);
}
