#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>

#include "heraldshape/scenario.hpp"
#include "heraldshape/version.hpp"

namespace hs = heraldshape::scenario;

namespace {

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hs::ConfigError("cannot open config file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw hs::ConfigError(std::string("config parse error: ") + e.what());
  }
}

std::string default_out_dir() {
  if (const char* env = std::getenv("HERALDSHAPE_OUT_DIR")) return env;
  return ".";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heraldshape: heralded temporal shaping of entangled photon pairs"};
  app.set_version_flag("--version", heraldshape::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = default_out_dir();
  hs::Overrides overrides;
  long long grid_n = 0;
  double grid_span = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "Scenario config file (JSON)")->required();
    cmd->add_option("--out-dir", out_dir, "Output directory");
    cmd->add_option("--grid-n", grid_n, "Override grid point count");
    cmd->add_option("--grid-span", grid_span, "Override grid half-span");
    cmd->add_option("--threads", overrides.threads, "Worker threads for sweeps");
  };

  CLI::App* shape = app.add_subcommand("shape", "Compute a heralded temporal shape");
  CLI::App* purity_map =
      app.add_subcommand("purity-map", "Numerical vs closed-form purity map");
  CLI::App* rate = app.add_subcommand("rate", "Heralding-rate estimate and cross-check");
  CLI::App* validate = app.add_subcommand("validate", "Operating-regime validation");
  CLI::App* sweep = app.add_subcommand("sweep", "Generic Cartesian parameter sweep");
  for (CLI::App* cmd : {shape, purity_map, rate, validate, sweep}) add_common(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (grid_n > 0) overrides.grid_n = static_cast<heraldshape::Index>(grid_n);
  if (grid_span > 0.0) overrides.grid_half_span = grid_span;

  try {
    nlohmann::json config = load_config(config_path);
    if (shape->parsed())
      return hs::run_shape(hs::parse_scenario(config), overrides, out_dir);
    if (purity_map->parsed()) return hs::run_purity_map(config, overrides, out_dir);
    if (rate->parsed())
      return hs::run_rate(hs::parse_scenario(config), overrides, out_dir);
    if (validate->parsed())
      return hs::run_validate(hs::parse_scenario(config), overrides, out_dir);
    if (sweep->parsed()) return hs::run_sweep(config, overrides, out_dir);
  } catch (...) {
    return hs::exit_code_for_current_exception();
  }
  return 2;
}
