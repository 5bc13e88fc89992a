// Command-line front end: fixq_cli <experiment> [--config file] [--key value ...]

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fixq/errors.hpp"
#include "fixq/run_config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fixed-interaction quantum computer experiments"};
  std::string experiment;
  std::string config_path;
  app.add_option("experiment", experiment,
                 "qft-fidelity | decouple-demo | phase-gate | schrodinger | trotter-study")
      ->required();
  app.add_option("--config", config_path, "flat key = value file; flags override it");

  std::map<std::string, std::optional<std::string>> flags;
  for (const auto& key : fixq::RunConfig::known_keys()) flags[key];
  for (auto& [key, slot] : flags) app.add_option("--" + key, slot);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    std::map<std::string, std::string> values;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw fixq::ConfigError("config", "invalid: config (cannot open " + config_path + ")");
      values = fixq::read_config_text(in);
    }
    for (const auto& [key, slot] : flags) {
      if (slot) values[key] = *slot;
    }
    if (!values.count("output")) {
      if (const char* dir = std::getenv("FIXQ_OUTPUT_DIR")) values["output"] = dir;
    }
    const auto config = fixq::RunConfig::from_map(experiment, values);
    fixq::run(config, std::cout);
  } catch (const fixq::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
