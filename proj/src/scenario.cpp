#include "heraldshape/scenario.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "heraldshape/io.hpp"
#include "heraldshape/numerics.hpp"
#include "heraldshape/version.hpp"

namespace heraldshape::scenario {

namespace {

constexpr Index kMaxAutoN = 8192;
constexpr size_t kMaxSweepPoints = 10000;

// ---- json helpers ----

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const char* where) {
  if (!obj.is_object())
    throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) { known = true; break; }
    if (!known)
      throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
  }
}

const json& require(const json& obj, const char* key, const char* where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ConfigError(std::string(where) + ": missing required key '" + key + "'");
  return *it;
}

double get_num(const json& obj, const char* key, const char* where) {
  const json& v = require(obj, key, where);
  if (!v.is_number())
    throw ConfigError(std::string(where) + ": '" + key + "' must be a number");
  return v.get<double>();
}

double get_num_or(const json& obj, const char* key, double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number())
    throw ConfigError(std::string("'") + key + "' must be a number");
  return it->get<double>();
}

std::string get_str(const json& obj, const char* key, const char* where) {
  const json& v = require(obj, key, where);
  if (!v.is_string())
    throw ConfigError(std::string(where) + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

// ---- parsing ----

PureStateSpec parse_pure_state(const json& obj, const char* where) {
  const std::string type = get_str(obj, "type", where);
  if (type == "gaussian") {
    check_keys(obj, {"type", "t_c", "t_u"}, where);
    return GaussianStateSpec{get_num(obj, "t_c", where), get_num(obj, "t_u", where)};
  }
  if (type == "separable") {
    check_keys(obj, {"type", "signal_file", "idler_file"}, where);
    return SeparableStateSpec{get_str(obj, "signal_file", where),
                              get_str(obj, "idler_file", where)};
  }
  if (type == "tabulated") {
    check_keys(obj, {"type", "file"}, where);
    return TabulatedStateSpec{get_str(obj, "file", where)};
  }
  if (type == "product_gaussian") {
    check_keys(obj, {"type", "center", "width"}, where);
    return ProductGaussianSpec{get_num(obj, "center", where),
                               get_num(obj, "width", where)};
  }
  throw ConfigError(std::string(where) + ": unknown state type '" + type + "'");
}

StateSpec parse_state(const json& obj) {
  if (obj.is_object() && obj.value("type", "") == "mixture") {
    check_keys(obj, {"type", "components"}, "state");
    const json& comps = require(obj, "components", "state");
    if (!comps.is_array() || comps.empty())
      throw ConfigError("state.components must be a non-empty array");
    MixtureStateSpec mix;
    for (const json& c : comps) {
      check_keys(c, {"weight", "state"}, "state.components[]");
      mix.components.emplace_back(get_num(c, "weight", "state.components[]"),
                                  parse_pure_state(require(c, "state", "mixture"),
                                                   "state.components[].state"));
    }
    return mix;
  }
  return parse_pure_state(obj, "state");
}

ModulatorSpec parse_modulator(const json& obj) {
  const std::string type = get_str(obj, "type", "modulator");
  if (type == "none") {
    check_keys(obj, {"type"}, "modulator");
    return NoModulatorSpec{};
  }
  if (type == "gaussian") {
    check_keys(obj, {"type", "t_m"}, "modulator");
    return GaussianModulatorSpec{get_num(obj, "t_m", "modulator")};
  }
  if (type == "rect") {
    check_keys(obj, {"type", "t_on", "t_off", "amp_re", "amp_im"}, "modulator");
    return RectModulatorSpec{get_num(obj, "t_on", "modulator"),
                             get_num(obj, "t_off", "modulator"),
                             Complex(get_num_or(obj, "amp_re", 1.0),
                                     get_num_or(obj, "amp_im", 0.0))};
  }
  if (type == "tabulated") {
    check_keys(obj, {"type", "file"}, "modulator");
    return TabulatedModulatorSpec{get_str(obj, "file", "modulator")};
  }
  throw ConfigError("modulator: unknown type '" + type + "'");
}

DetectionSpec parse_detection(const json& obj) {
  const std::string type = get_str(obj, "type", "detection");
  if (type == "ideal") {
    check_keys(obj, {"type", "omega"}, "detection");
    return IdealDetectionSpec{get_num_or(obj, "omega", 0.0)};
  }
  if (type == "filtered") {
    check_keys(obj, {"type", "kind", "omega_f", "omega", "t_click"}, "detection");
    const std::string kind = obj.value("kind", "single_pole");
    SpectralFilter::Kind k;
    if (kind == "single_pole") k = SpectralFilter::Kind::SinglePole;
    else if (kind == "gaussian") k = SpectralFilter::Kind::Gaussian;
    else throw ConfigError("detection.kind must be 'single_pole' or 'gaussian'");
    return FilteredDetectionSpec{k, get_num(obj, "omega_f", "detection"),
                                 get_num_or(obj, "omega", 0.0),
                                 get_num(obj, "t_click", "detection")};
  }
  if (type == "time_resolved") {
    check_keys(obj, {"type", "t_idler"}, "detection");
    return TimeResolvedDetectionSpec{get_num(obj, "t_idler", "detection")};
  }
  if (type == "density") {
    check_keys(obj, {"type", "omega0", "omega_d", "nodes"}, "detection");
    DensityDetectionSpec d{get_num_or(obj, "omega0", 0.0),
                           get_num(obj, "omega_d", "detection")};
    d.nodes = static_cast<int>(get_num_or(obj, "nodes", 101));
    return d;
  }
  throw ConfigError("detection: unknown type '" + type + "'");
}

GridSpec parse_grid(const json& obj) {
  const std::string type = get_str(obj, "type", "grid");
  if (type == "auto") {
    check_keys(obj, {"type"}, "grid");
    return AutoGridSpec{};
  }
  if (type == "explicit") {
    check_keys(obj, {"type", "t_start", "dt", "n"}, "grid");
    return ExplicitGridSpec{get_num(obj, "t_start", "grid"), get_num(obj, "dt", "grid"),
                            static_cast<Index>(get_num(obj, "n", "grid"))};
  }
  throw ConfigError("grid: unknown type '" + type + "'");
}

json pure_state_to_json(const PureStateSpec& s) {
  json j;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianStateSpec>) {
          j = {{"type", "gaussian"}, {"t_c", v.t_c}, {"t_u", v.t_u}};
        } else if constexpr (std::is_same_v<T, SeparableStateSpec>) {
          j = {{"type", "separable"},
               {"signal_file", v.signal_file},
               {"idler_file", v.idler_file}};
        } else if constexpr (std::is_same_v<T, TabulatedStateSpec>) {
          j = {{"type", "tabulated"}, {"file", v.file}};
        } else {
          j = {{"type", "product_gaussian"}, {"center", v.center}, {"width", v.width}};
        }
      },
      s);
  return j;
}

}  // namespace

Scenario parse_scenario(const json& config) {
  check_keys(config,
             {"state", "modulator", "detection", "grid", "outputs", "rate",
              "purity_map", "sweep"},
             "config");
  Scenario s;
  s.state = parse_state(require(config, "state", "config"));
  s.modulator = config.contains("modulator")
                    ? parse_modulator(config.at("modulator"))
                    : ModulatorSpec{NoModulatorSpec{}};
  s.detection = config.contains("detection")
                    ? parse_detection(config.at("detection"))
                    : DetectionSpec{IdealDetectionSpec{0.0}};
  s.grid = config.contains("grid") ? parse_grid(config.at("grid"))
                                   : GridSpec{AutoGridSpec{}};
  if (config.contains("outputs")) {
    const json& out = config.at("outputs");
    check_keys(out, {"density_matrix"}, "outputs");
    s.outputs.density_matrix = out.value("density_matrix", false);
  }
  if (config.contains("rate")) {
    const json& r = config.at("rate");
    check_keys(r, {"omega_f", "pulsed"}, "rate");
    if (r.contains("omega_f")) s.rate.omega_f = get_num(r, "omega_f", "rate");
    s.rate.pulsed = r.value("pulsed", false);
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json config;
  try {
    config = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_scenario(config);
}

json scenario_to_json(const Scenario& s) {
  json j;
  if (const auto* mix = std::get_if<MixtureStateSpec>(&s.state)) {
    json comps = json::array();
    for (const auto& [w, c] : mix->components)
      comps.push_back({{"weight", w}, {"state", pure_state_to_json(c)}});
    j["state"] = {{"type", "mixture"}, {"components", comps}};
  } else {
    j["state"] = pure_state_to_json(std::get<PureStateSpec>(s.state));
  }
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, NoModulatorSpec>) {
          j["modulator"] = {{"type", "none"}};
        } else if constexpr (std::is_same_v<T, GaussianModulatorSpec>) {
          j["modulator"] = {{"type", "gaussian"}, {"t_m", m.t_m}};
        } else if constexpr (std::is_same_v<T, RectModulatorSpec>) {
          j["modulator"] = {{"type", "rect"},
                            {"t_on", m.t_on},
                            {"t_off", m.t_off},
                            {"amp_re", m.amplitude.real()},
                            {"amp_im", m.amplitude.imag()}};
        } else {
          j["modulator"] = {{"type", "tabulated"}, {"file", m.file}};
        }
      },
      s.modulator);
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, IdealDetectionSpec>) {
          j["detection"] = {{"type", "ideal"}, {"omega", d.omega}};
        } else if constexpr (std::is_same_v<T, FilteredDetectionSpec>) {
          j["detection"] = {{"type", "filtered"},
                            {"kind", d.kind == SpectralFilter::Kind::SinglePole
                                         ? "single_pole"
                                         : "gaussian"},
                            {"omega_f", d.omega_f},
                            {"omega", d.omega},
                            {"t_click", d.t_click}};
        } else if constexpr (std::is_same_v<T, TimeResolvedDetectionSpec>) {
          j["detection"] = {{"type", "time_resolved"}, {"t_idler", d.t_idler}};
        } else {
          j["detection"] = {{"type", "density"},
                            {"omega0", d.omega0},
                            {"omega_d", d.omega_d},
                            {"nodes", d.nodes}};
        }
      },
      s.detection);
  if (const auto* g = std::get_if<ExplicitGridSpec>(&s.grid))
    j["grid"] = {{"type", "explicit"}, {"t_start", g->t_start}, {"dt", g->dt}, {"n", g->n}};
  else
    j["grid"] = {{"type", "auto"}};
  j["outputs"] = {{"density_matrix", s.outputs.density_matrix}};
  json r;
  if (s.rate.omega_f) r["omega_f"] = *s.rate.omega_f;
  r["pulsed"] = s.rate.pulsed;
  j["rate"] = r;
  return j;
}

// ---- building ----

namespace {

struct Built {
  TimeGrid grid_s{0.0, 1.0, 8}, grid_i{0.0, 1.0, 8};
  std::optional<JointAmplitude> pure;
  std::optional<ClassicalMixture> mixture;
  std::optional<Modulator> modulator;
  std::optional<GaussianStateSpec> gaussian_params;
};

double modulator_extent(const ModulatorSpec& m, double fallback) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianModulatorSpec>) return 4.5 * v.t_m;
        else if constexpr (std::is_same_v<T, RectModulatorSpec>)
          return std::max(std::abs(v.t_on), std::abs(v.t_off));
        else return fallback;
      },
      m);
}

double modulator_min_feature(const ModulatorSpec& m, double fallback) {
  if (const auto* g = std::get_if<GaussianModulatorSpec>(&m)) return g->t_m;
  return fallback;
}

TimeGrid resolve_auto_grid(const Scenario& s, const Overrides& o, double narrow,
                           double state_extent) {
  double half = std::min(state_extent, modulator_extent(s.modulator, state_extent) +
                                           4.0 * narrow);
  if (const auto* tr = std::get_if<TimeResolvedDetectionSpec>(&s.detection))
    half = std::max(half, std::abs(tr->t_idler) + 4.0 * narrow);
  half = std::max(half, 4.0 * std::min({narrow * 8.0, state_extent}));
  if (o.grid_half_span) half = *o.grid_half_span;

  // dt at half the narrowest feature; trapezoid sums of Gaussians are
  // spectrally accurate there. Relax toward one sample per feature before
  // giving up on the node budget.
  double max_dt = std::min(narrow / 2.0, modulator_min_feature(s.modulator, half) / 3.0);
  if (o.grid_n) {
    const Index n = *o.grid_n;
    if (n < 8) throw ConfigError("--grid-n must be >= 8");
    const double dt = 2.0 * half / static_cast<double>(n - 1);
    if (dt > narrow)
      throw ConfigError("grid cannot resolve the correlation time at this --grid-n");
    return TimeGrid(-half, dt, n);
  }
  TimeGrid g = auto_grid(half, max_dt);
  if (g.n > kMaxAutoN) {
    g = auto_grid(half, narrow);
    if (g.n > kMaxAutoN)
      throw ConfigError(
          "auto grid would exceed the node budget; narrow the span or supply an "
          "explicit grid");
  }
  return g;
}

Field1D sampled_gaussian(const TimeGrid& grid, double center, double width) {
  VectorXcd v(grid.n);
  for (Index k = 0; k < grid.n; ++k) {
    const double d = grid.t(k) - center;
    v(k) = std::exp(-d * d / (2.0 * width * width));
  }
  return Field1D(grid, std::move(v));
}

JointAmplitude build_pure_on_grid(const PureStateSpec& spec, const TimeGrid& gs,
                                  const TimeGrid& gi) {
  return std::visit(
      [&](const auto& v) -> JointAmplitude {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianStateSpec>) {
          return make_gaussian_joint(GaussianBiphotonParams(v.t_c, v.t_u), gs, gi);
        } else if constexpr (std::is_same_v<T, ProductGaussianSpec>) {
          if (!(v.width > 0.0)) throw ConfigError("product_gaussian: width must be > 0");
          return make_separable(sampled_gaussian(gs, v.center, v.width),
                                sampled_gaussian(gi, v.center, v.width));
        } else if constexpr (std::is_same_v<T, SeparableStateSpec>) {
          return make_separable(io::load_field1d(v.signal_file),
                                io::load_field1d(v.idler_file));
        } else {
          return make_tabulated(io::load_field2d(v.file));
        }
      },
      spec);
}

bool state_is_file_based(const PureStateSpec& spec) {
  return std::holds_alternative<SeparableStateSpec>(spec) ||
         std::holds_alternative<TabulatedStateSpec>(spec);
}

Modulator build_modulator(const ModulatorSpec& spec, const TimeGrid& gi) {
  return std::visit(
      [&](const auto& v) -> Modulator {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianModulatorSpec>) {
          return gaussian_modulator(v.t_m, gi);
        } else if constexpr (std::is_same_v<T, RectModulatorSpec>) {
          return rect_modulator(v.t_on, v.t_off, v.amplitude, gi);
        } else if constexpr (std::is_same_v<T, TabulatedModulatorSpec>) {
          Modulator m = tabulated_modulator(io::load_field1d(v.file));
          if (!m.transmission.grid.compatible(gi))
            throw ConfigError("tabulated modulator grid does not match the idler grid");
          return m;
        } else {
          // Pass-through stand-in so mixture heralding has a modulator object.
          return rect_modulator(gi.t_start - gi.dt, gi.t_end() + gi.dt,
                                Complex(1.0, 0.0), gi);
        }
      },
      spec);
}

Built build(const Scenario& s, const Overrides& o) {
  Built b;

  const MixtureStateSpec* mix = std::get_if<MixtureStateSpec>(&s.state);
  const PureStateSpec* pure = std::get_if<PureStateSpec>(&s.state);

  // Grid resolution. File-based states carry their own grids.
  if (pure && state_is_file_based(*pure)) {
    if (!std::holds_alternative<AutoGridSpec>(s.grid))
      throw ConfigError("file-based states carry their own grid; use grid type 'auto'");
    JointAmplitude state = build_pure_on_grid(*pure, TimeGrid(0, 1, 8), TimeGrid(0, 1, 8));
    b.grid_s = state.amplitude.grid_s;
    b.grid_i = state.amplitude.grid_i;
    b.pure = std::move(state);
  } else {
    double narrow = 0.0, extent = 0.0;
    if (pure) {
      if (const auto* g = std::get_if<GaussianStateSpec>(pure)) {
        b.gaussian_params = *g;
        narrow = g->t_c;
        extent = 4.0 * g->t_u;
      } else {
        const auto& pg = std::get<ProductGaussianSpec>(*pure);
        if (!(pg.width > 0.0)) throw ConfigError("product_gaussian: width must be > 0");
        narrow = pg.width;
        extent = std::abs(pg.center) + 4.0 * pg.width;
      }
    } else {
      narrow = std::numeric_limits<double>::infinity();
      extent = 0.0;
      for (const auto& [w, c] : mix->components) {
        if (const auto* g = std::get_if<GaussianStateSpec>(&c)) {
          narrow = std::min(narrow, g->t_c);
          extent = std::max(extent, 4.0 * g->t_u);
        } else if (const auto* pg = std::get_if<ProductGaussianSpec>(&c)) {
          if (!(pg->width > 0.0))
            throw ConfigError("product_gaussian: width must be > 0");
          narrow = std::min(narrow, pg->width);
          extent = std::max(extent, std::abs(pg->center) + 4.0 * pg->width);
        } else {
          throw ConfigError("mixture components must be analytic state types");
        }
      }
    }

    if (const auto* g = std::get_if<ExplicitGridSpec>(&s.grid)) {
      if (g->dt > narrow) throw ConfigError("correlation time unresolved by explicit grid");
      b.grid_s = b.grid_i = TimeGrid(g->t_start, g->dt, g->n);
    } else {
      b.grid_s = b.grid_i = resolve_auto_grid(s, o, narrow, extent);
    }

    if (pure) {
      b.pure = build_pure_on_grid(*pure, b.grid_s, b.grid_i);
    } else {
      ClassicalMixture m;
      for (const auto& [w, c] : mix->components)
        m.components.emplace_back(w, build_pure_on_grid(c, b.grid_s, b.grid_i));
      m.validate();
      b.mixture = std::move(m);
    }
  }

  if (!std::holds_alternative<NoModulatorSpec>(s.modulator) || b.mixture)
    b.modulator = build_modulator(s.modulator, b.grid_i);
  return b;
}

Field1D modulator_target(const Modulator& mod, const TimeGrid& gs, double omega) {
  VectorXcd v(gs.n);
  for (Index k = 0; k < gs.n; ++k)
    v(k) = mod.transmission.values(k) * std::exp(Complex(0.0, omega * gs.t(k)));
  return Field1D(gs, std::move(v));
}

}  // namespace

Evaluation evaluate(const Scenario& s, const Overrides& o) {
  Built b = build(s, o);
  Evaluation ev;
  ev.grid_s = b.grid_s;
  ev.grid_i = b.grid_i;

  if (b.mixture) {
    const auto* ideal = std::get_if<IdealDetectionSpec>(&s.detection);
    if (!ideal)
      throw ConfigError("mixture states support only 'ideal' detection");
    ev.density = herald_mixture(*b.mixture, *b.modulator, ideal->omega);
    ev.purity_value = purity(*ev.density);
    return ev;
  }

  Field2D field = b.pure->amplitude;
  if (b.modulator) {
    ModulatedState modded = apply_modulator(field, *b.modulator);
    field = std::move(modded.field);
    ev.transmitted_fraction = modded.transmitted_fraction;
  }

  double probe_omega = 0.0;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, IdealDetectionSpec>) {
          probe_omega = d.omega;
          ev.shape = herald_frequency_resolved(field, d.omega);
        } else if constexpr (std::is_same_v<T, FilteredDetectionSpec>) {
          probe_omega = d.omega;
          SpectralFilter filter(d.kind, d.omega_f, d.omega);
          ev.shape = herald_filtered(field, filter, d.t_click);
        } else if constexpr (std::is_same_v<T, TimeResolvedDetectionSpec>) {
          ev.shape = herald_time_resolved(field, d.t_idler);
        } else {
          DetectorSpectralResponse det(d.omega_d);
          FrequencyQuadrature quad;
          quad.nodes = d.nodes;
          ev.density = heralded_density_matrix(field, d.omega0, det, quad);
          ev.purity_value = purity(*ev.density);
          if (b.gaussian_params) {
            if (const auto* gm = std::get_if<GaussianModulatorSpec>(&s.modulator))
              ev.closed_form_purity = purity_closed_form(GaussianScenario(
                  b.gaussian_params->t_c, b.gaussian_params->t_u, gm->t_m, d.omega_d));
          }
        }
      },
      s.detection);

  if (ev.shape && b.modulator && b.modulator->transmission.grid.compatible(b.grid_s)) {
    Field1D target = modulator_target(*b.modulator, b.grid_s, probe_omega);
    if (target.norm2() > 0.0)
      ev.fidelity_to_modulator = fidelity(*ev.shape, target);
  }

  if (b.gaussian_params) {
    double t_m = b.modulator ? b.modulator->support_width : 0.0;
    if (t_m > 0.0) {
      double omega_f = 0.0, omega_d = 0.0;
      if (const auto* f = std::get_if<FilteredDetectionSpec>(&s.detection))
        omega_f = f->omega_f;
      if (const auto* d = std::get_if<DensityDetectionSpec>(&s.detection))
        omega_d = d->omega_d;
      ev.regime = validate_regime(b.gaussian_params->t_c, t_m, b.gaussian_params->t_u,
                                  omega_f, omega_d);
    }
  }
  return ev;
}

// ---- command helpers ----

namespace {

json regime_to_json(const RegimeReport& r) {
  return {{"ratio_cm", r.ratio_cm},
          {"ratio_mu", r.ratio_mu},
          {"ratio_mf", r.ratio_mf},
          {"ratio_md", r.ratio_md},
          {"correlation", to_string(r.correlation)},
          {"window", to_string(r.window)},
          {"filter", to_string(r.filter)},
          {"detector", to_string(r.detector)},
          {"filter_acceptance_clamped", r.filter_acceptance_clamped},
          {"thresholds",
           {{"satisfied", RegimeReport::kSatisfied}, {"marginal", RegimeReport::kMarginal}}}};
}

json grid_to_json(const TimeGrid& g) {
  return {{"t_start", g.t_start}, {"dt", g.dt}, {"n", g.n}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << text;
}

std::filesystem::path ensure_out_dir(const std::string& out_dir) {
  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

json manifest_for(const Scenario& s, const Evaluation& ev) {
  json m;
  m["version"] = kVersion;
  m["scenario"] = scenario_to_json(s);
  m["grid_signal"] = grid_to_json(ev.grid_s);
  m["grid_idler"] = grid_to_json(ev.grid_i);
  json results;
  results["transmitted_fraction"] = ev.transmitted_fraction;
  if (ev.shape) {
    results["weight"] = ev.shape->weight;
    results["herald"] = ev.shape->herald_descriptor;
    results["norm2"] = ev.shape->amplitude.norm2();
  }
  if (ev.purity_value) results["purity"] = *ev.purity_value;
  if (ev.closed_form_purity) results["purity_closed_form"] = *ev.closed_form_purity;
  if (ev.fidelity_to_modulator)
    results["fidelity_to_modulator"] = *ev.fidelity_to_modulator;
  m["results"] = results;
  if (ev.regime) m["regime"] = regime_to_json(*ev.regime);
  return m;
}

// Deterministic worker pool: point i is handled by worker i % threads and
// results land in a preallocated slot, so output order never depends on
// scheduling.
void parallel_for(size_t total, int threads, const std::function<void(size_t)>& fn) {
  if (threads <= 1 || total <= 1) {
    for (size_t i = 0; i < total; ++i) fn(i);
    return;
  }
  const int nw = std::min<int>(threads, static_cast<int>(total));
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (int w = 0; w < nw; ++w)
    pool.emplace_back([&, w] {
      for (size_t i = static_cast<size_t>(w); i < total; i += static_cast<size_t>(nw))
        fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

int run_shape(const Scenario& s, const Overrides& o, const std::string& out_dir) {
  Evaluation ev = evaluate(s, o);
  const auto dir = ensure_out_dir(out_dir);

  std::ostringstream csv;
  if (ev.shape) {
    csv << "t,re,im,abs2\n";
    const Field1D& f = ev.shape->amplitude;
    for (Index k = 0; k < f.grid.n; ++k)
      csv << io::format_double(f.grid.t(k)) << ',' << io::format_double(f.values(k).real())
          << ',' << io::format_double(f.values(k).imag()) << ','
          << io::format_double(std::norm(f.values(k))) << '\n';
  } else {
    // Density-matrix detection: emit the temporal intensity rho(t, t).
    csv << "t,rho_tt\n";
    const Field2D& m = ev.density->matrix;
    for (Index k = 0; k < m.grid_s.n; ++k)
      csv << io::format_double(m.grid_s.t(k)) << ','
          << io::format_double(m.values(k, k).real()) << '\n';
  }
  write_text(dir / "shape.csv", csv.str());

  if (ev.density && s.outputs.density_matrix)
    io::save_field2d(ev.density->matrix, dir / "density_matrix.2d");

  write_text(dir / "manifest.json", manifest_for(s, ev).dump(2) + "\n");
  std::cout << "wrote " << (dir / "shape.csv").string() << '\n';
  return 0;
}

int run_rate(const Scenario& s, const Overrides& o, const std::string& out_dir) {
  const auto* pure = std::get_if<PureStateSpec>(&s.state);
  const GaussianStateSpec* g = pure ? std::get_if<GaussianStateSpec>(pure) : nullptr;
  if (!g) throw ConfigError("rate: requires a gaussian state");
  const auto* gm = std::get_if<GaussianModulatorSpec>(&s.modulator);
  if (!gm && !s.rate.pulsed)
    throw ConfigError("rate: requires a gaussian modulator (or rate.pulsed=true)");

  double omega_f = 0.0;
  if (s.rate.omega_f) omega_f = *s.rate.omega_f;
  else if (const auto* f = std::get_if<FilteredDetectionSpec>(&s.detection))
    omega_f = f->omega_f;
  else
    throw ConfigError("rate: omega_f missing (set rate.omega_f or filtered detection)");

  RateEstimate est = s.rate.pulsed
                         ? heralding_rate_pulsed(omega_f, g->t_c)
                         : heralding_rate_modulated(omega_f, g->t_c, gm->t_m, g->t_u);

  json report;
  report["version"] = kVersion;
  report["scenario"] = scenario_to_json(s);
  report["formula_rate"] = est.formula;
  report["filter_acceptance"] = est.filter_acceptance;
  report["modulator_pass"] = est.modulator_pass;
  report["acceptance_clamped"] = est.acceptance_clamped;

  if (!s.rate.pulsed) {
    RegimeReport regime = validate_regime(g->t_c, gm->t_m, g->t_u, omega_f, 0.0);
    report["regime"] = regime_to_json(regime);
    if (regime.any_violated())
      std::cerr << "warning: operating-regime condition violated; the rate formula "
                   "is an in-regime estimate\n";
    // Cross-check against the actually simulated modulator transmission. The
    // shape auto-grid truncates the idler marginal to the modulated window,
    // which would inflate the transmitted fraction, so this runs on an
    // explicit grid covering the whole state when the node budget allows it.
    const double half = 4.0 * g->t_u;
    const Index n_full = static_cast<Index>(std::ceil(2.0 * half / g->t_c)) + 2;
    if (n_full <= kMaxAutoN) {
      Scenario sim = s;
      sim.detection = IdealDetectionSpec{0.0};
      sim.grid = ExplicitGridSpec{-half, 2.0 * half / static_cast<double>(n_full - 1),
                                  n_full};
      Evaluation ev = evaluate(sim, o);
      const double simulated = ev.transmitted_fraction * est.filter_acceptance;
      report["simulated_transmitted_fraction"] = ev.transmitted_fraction;
      report["simulated_rate"] = simulated;
      report["formula_over_simulated"] = simulated > 0.0 ? est.formula / simulated : 0.0;
    }
  }

  const auto dir = ensure_out_dir(out_dir);
  write_text(dir / "rate.json", report.dump(2) + "\n");
  std::cout << "formula rate: " << io::format_double(est.formula) << '\n';
  if (report.contains("simulated_rate"))
    std::cout << "simulated transmitted fraction x filter acceptance: "
              << io::format_double(report["simulated_rate"].get<double>()) << '\n';
  return 0;
}

int run_validate(const Scenario& s, const Overrides& o, const std::string& out_dir) {
  (void)o;
  const auto* pure = std::get_if<PureStateSpec>(&s.state);
  const GaussianStateSpec* g = pure ? std::get_if<GaussianStateSpec>(pure) : nullptr;
  if (!g) throw ConfigError("validate: requires a gaussian state");
  double t_m = 0.0;
  if (const auto* gm = std::get_if<GaussianModulatorSpec>(&s.modulator)) t_m = gm->t_m;
  else if (const auto* rm = std::get_if<RectModulatorSpec>(&s.modulator))
    t_m = rm->t_off - rm->t_on;
  else
    throw ConfigError("validate: requires a gaussian or rect modulator");

  double omega_f = 0.0, omega_d = 0.0;
  if (const auto* f = std::get_if<FilteredDetectionSpec>(&s.detection)) omega_f = f->omega_f;
  if (const auto* d = std::get_if<DensityDetectionSpec>(&s.detection)) omega_d = d->omega_d;
  if (s.rate.omega_f) omega_f = *s.rate.omega_f;

  RegimeReport r = validate_regime(g->t_c, t_m, g->t_u, omega_f, omega_d);
  std::cout << "t_c/t_m   = " << io::format_double(r.ratio_cm) << "  ["
            << to_string(r.correlation) << "]\n";
  std::cout << "t_m<t_u   = " << (r.window == Verdict::Satisfied ? "yes" : "no") << "  ["
            << to_string(r.window) << "]\n";
  std::cout << "t_m*w_f   = " << io::format_double(r.ratio_mf) << "  ["
            << to_string(r.filter) << "]\n";
  std::cout << "t_m*w_d   = " << io::format_double(r.ratio_md) << "  ["
            << to_string(r.detector) << "]\n";
  if (r.filter_acceptance_clamped)
    std::cout << "note: omega_f*t_c > 1; filter acceptance clamped to 1\n";

  json report;
  report["version"] = kVersion;
  report["scenario"] = scenario_to_json(s);
  report["regime"] = regime_to_json(r);
  const auto dir = ensure_out_dir(out_dir);
  write_text(dir / "regime.json", report.dump(2) + "\n");
  return r.any_violated() ? 1 : 0;
}

namespace {

std::vector<double> get_axis(const json& obj, const char* key, const char* where) {
  const json& v = require(obj, key, where);
  if (!v.is_array() || v.empty())
    throw ConfigError(std::string(where) + ": '" + key + "' must be a non-empty array");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number())
      throw ConfigError(std::string(where) + ": '" + key + "' entries must be numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

int run_purity_map(const json& config, const Overrides& o, const std::string& out_dir) {
  parse_scenario(config);  // full validation of the surrounding scenario keys
  if (!config.contains("purity_map"))
    throw ConfigError("purity-map: config needs a 'purity_map' section");
  const json& pm = config.at("purity_map");
  check_keys(pm, {"t_c", "t_u", "t_m", "omega_d", "n", "nodes", "omega0"}, "purity_map");
  const auto tcs = get_axis(pm, "t_c", "purity_map");
  const auto tus = get_axis(pm, "t_u", "purity_map");
  const auto tms = get_axis(pm, "t_m", "purity_map");
  const auto wds = get_axis(pm, "omega_d", "purity_map");
  const Index n = o.grid_n.value_or(static_cast<Index>(get_num_or(pm, "n", 512)));
  const int nodes = static_cast<int>(get_num_or(pm, "nodes", 101));
  const double omega0 = get_num_or(pm, "omega0", 0.0);

  const size_t total = tcs.size() * tus.size() * tms.size() * wds.size();
  if (total > kMaxSweepPoints)
    throw ConfigError("purity-map: sweep exceeds 10^4 points");

  struct Row { double tc, tu, tm, wd; };
  std::vector<Row> points;
  points.reserve(total);
  for (double tc : tcs)
    for (double tu : tus)
      for (double tm : tms)
        for (double wd : wds) points.push_back({tc, tu, tm, wd});

  std::vector<std::string> rows(total);
  std::vector<double> deltas(total, -1.0);
  parallel_for(total, o.threads, [&](size_t i) {
    const Row& p = points[i];
    std::ostringstream row;
    row << io::format_double(p.tc) << ',' << io::format_double(p.tu) << ','
        << io::format_double(p.tm) << ',' << io::format_double(p.wd) << ',';
    try {
      const double closed = purity_closed_form(GaussianScenario(p.tc, p.tu, p.tm, p.wd));
      // Span follows the modulated support; the modulator window confines the
      // idler integral so t_u never has to fit on the grid.
      const double half = o.grid_half_span.value_or(4.5 * (p.tm + p.tc));
      const double dt = 2.0 * half / static_cast<double>(n - 1);
      if (dt > p.tc) throw ConfigError("correlation time unresolved at this n");
      TimeGrid grid(-half, dt, n);
      JointAmplitude state =
          make_gaussian_joint(GaussianBiphotonParams(p.tc, p.tu), grid, grid);
      Modulator mod = gaussian_modulator(p.tm, grid);
      ModulatedState modded = apply_modulator(state, mod);
      FrequencyQuadrature quad;
      quad.nodes = nodes;
      SignalDensityMatrix rho = heralded_density_matrix(
          modded.field, omega0, DetectorSpectralResponse(p.wd), quad);
      const double numeric = purity(rho);
      const double delta = std::abs(numeric - closed);
      deltas[i] = delta;
      row << io::format_double(numeric) << ',' << io::format_double(closed) << ','
          << io::format_double(delta) << ",ok";
    } catch (const std::exception& e) {
      std::string what = e.what();
      for (char& c : what)
        if (c == ',' || c == '\n') c = ';';
      row << ",,," << "error: " << what;
    }
    rows[i] = row.str();
  });

  double max_delta = 0.0;
  size_t ok = 0;
  for (double d : deltas)
    if (d >= 0.0) { max_delta = std::max(max_delta, d); ++ok; }

  std::ostringstream csv;
  csv << "t_c,t_u,t_m,omega_d,purity_numeric,purity_closed_form,abs_delta,status\n";
  for (const auto& r : rows) csv << r << '\n';
  csv << "# points_ok," << ok << '\n';
  csv << "# max_abs_delta," << io::format_double(max_delta) << '\n';

  const auto dir = ensure_out_dir(out_dir);
  write_text(dir / "purity_map.csv", csv.str());
  std::cout << "purity map: " << ok << '/' << total
            << " points, max |numeric - closed| = " << io::format_double(max_delta)
            << '\n';
  return 0;
}

int run_sweep(const json& config, const Overrides& o, const std::string& out_dir) {
  if (!config.contains("sweep"))
    throw ConfigError("sweep: config needs a 'sweep' section");
  const json& sw = config.at("sweep");
  check_keys(sw, {"axes"}, "sweep");
  const json& axes = require(sw, "axes", "sweep");
  if (!axes.is_array() || axes.empty())
    throw ConfigError("sweep.axes must be a non-empty array");

  struct Axis { std::string path; std::vector<double> values; };
  std::vector<Axis> ax;
  size_t total = 1;
  for (const json& a : axes) {
    check_keys(a, {"path", "values"}, "sweep.axes[]");
    Axis axis{get_str(a, "path", "sweep.axes[]"), get_axis(a, "values", "sweep.axes[]")};
    total *= axis.values.size();
    ax.push_back(std::move(axis));
  }
  if (total > kMaxSweepPoints) throw ConfigError("sweep exceeds 10^4 points");

  json base = config;
  base.erase("sweep");
  parse_scenario(base);

  auto patch = [](json& j, const std::string& dotted, double value) {
    json* cur = &j;
    size_t pos = 0;
    while (true) {
      size_t dot = dotted.find('.', pos);
      std::string key = dotted.substr(pos, dot == std::string::npos ? dot : dot - pos);
      if (dot == std::string::npos) { (*cur)[key] = value; return; }
      cur = &(*cur)[key];
      pos = dot + 1;
    }
  };

  std::vector<std::string> rows(total);
  parallel_for(total, o.threads, [&](size_t i) {
    std::vector<double> coords(ax.size());
    size_t rem = i;
    for (size_t a = ax.size(); a-- > 0;) {
      coords[a] = ax[a].values[rem % ax[a].values.size()];
      rem /= ax[a].values.size();
    }
    std::ostringstream row;
    for (double c : coords) row << io::format_double(c) << ',';
    try {
      json point = base;
      for (size_t a = 0; a < ax.size(); ++a) patch(point, ax[a].path, coords[a]);
      Scenario s = parse_scenario(point);
      Evaluation ev = evaluate(s, o);
      row << io::format_double(ev.transmitted_fraction) << ',';
      row << (ev.shape ? io::format_double(ev.shape->weight) : "") << ',';
      row << (ev.fidelity_to_modulator ? io::format_double(*ev.fidelity_to_modulator)
                                       : "")
          << ',';
      row << (ev.purity_value ? io::format_double(*ev.purity_value) : "") << ',';
      row << (ev.closed_form_purity ? io::format_double(*ev.closed_form_purity) : "")
          << ",ok";
    } catch (const std::exception& e) {
      std::string what = e.what();
      for (char& c : what)
        if (c == ',' || c == '\n') c = ';';
      row << ",,,,,error: " << what;
    }
    rows[i] = row.str();
  });

  std::ostringstream csv;
  for (const auto& a : ax) csv << a.path << ',';
  csv << "transmitted_fraction,weight,fidelity_to_modulator,purity,purity_closed_form,"
         "status\n";
  for (const auto& r : rows) csv << r << '\n';

  const auto dir = ensure_out_dir(out_dir);
  write_text(dir / "sweep.csv", csv.str());
  std::cout << "sweep: " << total << " points -> " << (dir / "sweep.csv").string()
            << '\n';
  return 0;
}

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const HeraldError& e) {
    std::cerr << "herald error: " << e.what() << '\n';
    return 3;
  } catch (const NumericsError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace heraldshape::scenario
