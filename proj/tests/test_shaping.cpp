#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heraldshape/numerics.hpp"
#include "heraldshape/shaping.hpp"
#include "test_helpers.hpp"

using namespace heraldshape;
using testing::gaussian_field;
using testing::sample;

namespace {

TimeGrid symmetric_grid(double half, Index n) {
  return TimeGrid(-half, 2.0 * half / static_cast<double>(n - 1), n);
}

}  // namespace

TEST_CASE("gaussian_modulator: samples and truncation") {
  TimeGrid g = symmetric_grid(9.0, 901);
  Modulator m = gaussian_modulator(2.0, g);
  Index k0 = g.index_of(0.0);
  CHECK(m.transmission.values(k0).real() == doctest::Approx(1.0).epsilon(1e-12));
  Index km = g.index_of(2.0);
  CHECK(std::abs(m.transmission.values(km) - std::exp(-0.5)) < 1e-12);
  CHECK(m.transmission.values.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
  CHECK(m.support_width == 2.0);
  // tail beyond 4 t_m is hard-zeroed
  CHECK(std::abs(m.transmission.values(0)) == 0.0);
}

TEST_CASE("gaussian_modulator: unresolved width rejected") {
  TimeGrid g = symmetric_grid(8.0, 32);
  CHECK_THROWS_WITH_AS(gaussian_modulator(0.5, g), "modulation unresolved",
                       std::invalid_argument);
}

TEST_CASE("rect_modulator: pass-through, zero and phase-only variants") {
  TimeGrid g = symmetric_grid(2.0, 101);
  Modulator all = rect_modulator(-3.0, 3.0, Complex(1.0, 0.0), g);
  CHECK(all.transmission.values.cwiseAbs().minCoeff() == doctest::Approx(1.0));

  Modulator off = rect_modulator(-1.0, 1.0, Complex(0.0, 0.0), g);
  CHECK(off.transmission.values.cwiseAbs().maxCoeff() == 0.0);

  Modulator phase = rect_modulator(-1.0, 1.0, Complex(0.0, 1.0), g);
  Index k0 = g.index_of(0.0);
  CHECK(std::abs(phase.transmission.values(k0)) == doctest::Approx(1.0));

  CHECK_THROWS_WITH_AS(rect_modulator(-1.0, 1.0, Complex(1.2, 0.0), g),
                       "transmission exceeds unity", std::invalid_argument);
}

TEST_CASE("tabulated_modulator: rising exponential and modulus guard") {
  const double tau = 1.0;
  TimeGrid g = symmetric_grid(6.0, 601);
  Field1D rising = sample(g, [&](double t) {
    if (t < -5.0 * tau || t > 0.0) return Complex(0.0);
    return Complex(std::exp(t / (2.0 * tau)), 0.0);  // peak 1 at t = 0
  });
  Modulator m = tabulated_modulator(rising, "rising-exp");
  CHECK(m.support_width > 2.0);
  CHECK(m.support_width <= 5.0 * tau + g.dt);

  Field1D all_ones = sample(g, [](double) { return Complex(1.0); });
  Modulator flat = tabulated_modulator(all_ones);
  CHECK(flat.support_width == doctest::Approx(g.span()));

  Field1D bad = all_ones;
  bad.values(7) = Complex(1.5, 0.0);
  CHECK_THROWS_AS(tabulated_modulator(bad), std::invalid_argument);
}

TEST_CASE("apply_modulator: pass-through and zero modulators") {
  TimeGrid g = symmetric_grid(6.0, 241);
  JointAmplitude psi = make_gaussian_joint(GaussianBiphotonParams(0.3, 2.0), g, g);

  Modulator all = rect_modulator(-7.0, 7.0, Complex(1.0, 0.0), g);
  ModulatedState kept = apply_modulator(psi, all);
  CHECK(kept.transmitted_fraction == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((kept.field.values - psi.amplitude.values).cwiseAbs().maxCoeff() == 0.0);

  Modulator off = rect_modulator(-1.0, 1.0, Complex(0.0, 0.0), g);
  ModulatedState blocked = apply_modulator(psi, off);
  CHECK(blocked.transmitted_fraction == 0.0);
  CHECK(blocked.field.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("apply_modulator: transmitted fraction matches the marginal integral") {
  const double t_c = 0.1, t_u = 10.0, t_m = 1.0;
  TimeGrid g = symmetric_grid(40.0, 1601);
  JointAmplitude psi = make_gaussian_joint(GaussianBiphotonParams(t_c, t_u), g, g);
  Modulator mod = gaussian_modulator(t_m, g);
  ModulatedState out = apply_modulator(psi, mod);

  // 1-D oracle: T = integral |A(t')|^2 p_i(t') dt' with the idler marginal.
  VectorXcd marginal(g.n);
  for (Index k = 0; k < g.n; ++k)
    marginal(k) = psi.amplitude.values.col(k).squaredNorm() * g.dt;
  Field1D weighted(g, marginal.cwiseProduct(
                          mod.transmission.values.array().abs2().matrix().cast<Complex>()));
  const double oracle = integrate_1d(weighted).real();
  CHECK(out.transmitted_fraction == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("apply_modulator: passivity and composition") {
  TimeGrid g = symmetric_grid(6.0, 241);
  JointAmplitude psi = make_gaussian_joint(GaussianBiphotonParams(0.3, 2.0), g, g);
  Modulator a = gaussian_modulator(1.0, g);
  Modulator b = rect_modulator(-0.7, 1.3, Complex(0.3, 0.4), g);

  ModulatedState ab = apply_modulator(apply_modulator(psi, a).field, b);
  CHECK(ab.transmitted_fraction <= 1.0 + 1e-12);

  Field1D product(g, a.transmission.values.cwiseProduct(b.transmission.values));
  ModulatedState combined = apply_modulator(psi, tabulated_modulator(product));
  CHECK((ab.field.values - combined.field.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("apply_modulator: acts on the idler axis only") {
  TimeGrid g = symmetric_grid(6.0, 181);
  JointAmplitude psi = make_gaussian_joint(GaussianBiphotonParams(0.4, 2.0), g, g);
  Modulator mod = gaussian_modulator(1.0, g);
  ModulatedState out = apply_modulator(psi, mod);
  // column k of the output is A(t'_k) times column k of the input
  for (Index k : {Index(20), Index(90), Index(160)}) {
    const Complex a = mod.transmission.values(k);
    VectorXcd expected = a * psi.amplitude.values.col(k);
    CHECK((out.field.values.col(k) - expected).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("apply_modulator: grid mismatch rejected") {
  TimeGrid g = symmetric_grid(6.0, 181);
  TimeGrid g2 = symmetric_grid(6.0, 182);
  JointAmplitude psi = make_gaussian_joint(GaussianBiphotonParams(0.4, 2.0), g, g);
  Modulator mod = gaussian_modulator(1.0, g2);
  CHECK_THROWS_AS(apply_modulator(psi, mod), std::invalid_argument);
}
