#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heraldshape/analytic.hpp"
#include "heraldshape/heralding.hpp"
#include "heraldshape/metrics.hpp"
#include "test_helpers.hpp"

using namespace heraldshape;

namespace {

TimeGrid symmetric_grid(double half, Index n) {
  return TimeGrid(-half, 2.0 * half / static_cast<double>(n - 1), n);
}

}  // namespace

TEST_CASE("purity_closed_form: exactly 1 for an ideal detector") {
  for (double t_c : {0.1, 1.0}) {
    for (double t_u : {2.0, 50.0}) {
      CHECK(purity_closed_form(GaussianScenario(t_c, t_u, 1.0, 0.0)) == 1.0);
    }
  }
}

TEST_CASE("purity_closed_form: depends only on dimensionless ratios") {
  const double p1 = purity_closed_form(GaussianScenario(0.2, 8.0, 1.0, 0.7));
  const double p2 = purity_closed_form(GaussianScenario(2.0, 80.0, 10.0, 0.07));
  CHECK(p1 == doctest::Approx(p2).epsilon(1e-12));
}

TEST_CASE("purity_closed_form: hand-computed finite-parameter value") {
  // a = 1/3, b = 10/3, x = 3/2 evaluated by hand in the ratio form.
  CHECK(purity_closed_form(GaussianScenario(1.0, 10.0, 3.0, 0.5)) ==
        doctest::Approx(0.67823).epsilon(1e-3));
}

TEST_CASE("purity_closed_form: strong-correlation limit") {
  for (double x : {0.3, 1.0, 2.5}) {
    const double limit = purity_limit(1.0, x);
    CHECK(limit == doctest::Approx(1.0 / std::sqrt(1.0 + x * x)).epsilon(1e-12));
    const double near = purity_closed_form(GaussianScenario(1e-4, 1e4, 1.0, x));
    CHECK(near == doctest::Approx(limit).epsilon(1e-6));
  }
  CHECK(purity_limit(1.0, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("purity_closed_form: monotone in the detector uncertainty") {
  double prev = 1.1;
  for (double omega_d : {0.0, 0.3, 0.8, 2.0, 5.0}) {
    const double p = purity_closed_form(GaussianScenario(0.3, 10.0, 1.0, omega_d));
    CHECK(p < prev);
    CHECK(p > 0.0);
    CHECK(p <= 1.0);
    prev = p;
  }
}

TEST_CASE("purity_closed_form: extreme windows do not overflow") {
  const double p = purity_closed_form(GaussianScenario(1e-6, 1e9, 1.0, 1.0));
  CHECK(std::isfinite(p));
  CHECK(p == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("GaussianScenario: parameter validation") {
  CHECK_THROWS_AS(GaussianScenario(-1.0, 1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(GaussianScenario(1.0, 1.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(GaussianScenario(1.0, 1.0, 1.0, -0.1), std::invalid_argument);
}

TEST_CASE("gaussian_heralded_width: strong-correlation limit is the modulator") {
  HeraldedShapeModel m = gaussian_heralded_width(GaussianScenario(1e-3, 1e3, 1.0, 0.0));
  CHECK(m.width == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(m.frequency_response == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("gaussian_heralded_width: matches the simulated heralded shape") {
  const double t_c = 0.5, t_u = 5.0, t_m = 1.0;
  TimeGrid g = symmetric_grid(7.0, 512);
  JointAmplitude psi = make_gaussian_joint(GaussianBiphotonParams(t_c, t_u), g, g);
  Field2D modulated = apply_modulator(psi, gaussian_modulator(t_m, g)).field;
  HeraldedShapeModel model = gaussian_heralded_width(GaussianScenario(t_c, t_u, t_m, 0.0));

  HeraldedShape at0 = herald_frequency_resolved(modulated, 0.0);
  CHECK(amplitude_width(at0.amplitude) == doctest::Approx(model.width).epsilon(0.01));

  const double omega = 1.0;
  HeraldedShape at1 = herald_frequency_resolved(modulated, omega);
  CHECK(phase_slope(at1.amplitude) ==
        doctest::Approx(model.frequency_response * omega).epsilon(0.01));
}

TEST_CASE("heralded purity is independent of the detector center frequency") {
  const double t_c = 0.3, t_u = 10.0, t_m = 1.0, omega_d = 0.8;
  TimeGrid g = symmetric_grid(4.5 * (t_m + t_c), 384);
  JointAmplitude psi = make_gaussian_joint(GaussianBiphotonParams(t_c, t_u), g, g);
  Field2D modulated = apply_modulator(psi, gaussian_modulator(t_m, g)).field;

  const double base =
      purity(heralded_density_matrix(modulated, 0.0, DetectorSpectralResponse(omega_d)));
  for (double omega0 : {-2.0 / t_m, 0.7 / t_m, 2.0 / t_m}) {
    const double shifted = purity(heralded_density_matrix(
        modulated, omega0, DetectorSpectralResponse(omega_d)));
    CHECK(std::abs(shifted - base) < 1e-6);
  }
}
