#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <variant>

#include "heraldshape/analytic.hpp"
#include "heraldshape/metrics.hpp"

namespace heraldshape::scenario {

using json = nlohmann::json;

/// Configuration problem (unknown key, missing field, unresolvable grid).
/// CLI exit code 2; HeraldError maps to 3, NumericsError to 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- scenario description ----

struct GaussianStateSpec { double t_c, t_u; };
struct SeparableStateSpec { std::string signal_file, idler_file; };
struct TabulatedStateSpec { std::string file; };
/// Product state with identical Gaussian arms e^{-(t-center)^2/2 width^2}
/// (convenient for building classically correlated mixtures from config).
struct ProductGaussianSpec { double center, width; };
using PureStateSpec =
    std::variant<GaussianStateSpec, SeparableStateSpec, TabulatedStateSpec,
                 ProductGaussianSpec>;

struct MixtureStateSpec {
  std::vector<std::pair<double, PureStateSpec>> components;
};
using StateSpec = std::variant<PureStateSpec, MixtureStateSpec>;

struct NoModulatorSpec {};
struct GaussianModulatorSpec { double t_m; };
struct RectModulatorSpec { double t_on, t_off; Complex amplitude; };
struct TabulatedModulatorSpec { std::string file; };
using ModulatorSpec = std::variant<NoModulatorSpec, GaussianModulatorSpec,
                                   RectModulatorSpec, TabulatedModulatorSpec>;

struct IdealDetectionSpec { double omega; };
struct FilteredDetectionSpec {
  SpectralFilter::Kind kind;
  double omega_f, omega, t_click;
};
struct TimeResolvedDetectionSpec { double t_idler; };
struct DensityDetectionSpec { double omega0, omega_d; int nodes = 101; };
using DetectionSpec = std::variant<IdealDetectionSpec, FilteredDetectionSpec,
                                   TimeResolvedDetectionSpec, DensityDetectionSpec>;

struct AutoGridSpec {};
struct ExplicitGridSpec { double t_start, dt; Index n; };
using GridSpec = std::variant<AutoGridSpec, ExplicitGridSpec>;

struct OutputSpec {
  bool density_matrix = false;
};

struct RateSpec {
  std::optional<double> omega_f;
  bool pulsed = false;
};

struct Scenario {
  StateSpec state;
  ModulatorSpec modulator;
  DetectionSpec detection;
  GridSpec grid;
  OutputSpec outputs;
  RateSpec rate;
};

/// Command-line overrides applied on top of the config file.
struct Overrides {
  std::optional<Index> grid_n;
  std::optional<double> grid_half_span;
  int threads = 1;
};

Scenario parse_scenario(const json& config);
Scenario load_scenario(const std::string& path);
json scenario_to_json(const Scenario& s);

// ---- evaluation ----

struct Evaluation {
  TimeGrid grid_s, grid_i;
  double transmitted_fraction = 1.0;
  std::optional<HeraldedShape> shape;
  std::optional<SignalDensityMatrix> density;
  std::optional<double> purity_value;
  std::optional<double> closed_form_purity;
  std::optional<double> fidelity_to_modulator;
  std::optional<RegimeReport> regime;
};

/// Run the full pipeline for one scenario.
Evaluation evaluate(const Scenario& s, const Overrides& o = {});

// ---- CLI commands; each returns a process exit code ----

int run_shape(const Scenario& s, const Overrides& o, const std::string& out_dir);
int run_rate(const Scenario& s, const Overrides& o, const std::string& out_dir);
int run_validate(const Scenario& s, const Overrides& o, const std::string& out_dir);
int run_purity_map(const json& config, const Overrides& o, const std::string& out_dir);
int run_sweep(const json& config, const Overrides& o, const std::string& out_dir);

/// Map an in-flight exception to the CLI exit-code contract; prints to stderr.
int exit_code_for_current_exception();

}  // namespace heraldshape::scenario
