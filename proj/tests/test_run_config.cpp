#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixq/errors.hpp"
#include "fixq/run_config.hpp"

using namespace fixq;

namespace {

std::string run_to_string(const std::string& experiment, const std::map<std::string, std::string>& values) {
  std::ostringstream os;
  run(RunConfig::from_map(experiment, values), os);
  return os.str();
}

std::string error_key(const std::string& experiment, const std::map<std::string, std::string>& values) {
  try {
    RunConfig::from_map(experiment, values);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

// Value following `label ` on its own line.
double scalar(const std::string& text, const std::string& label) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(label + " ", 0) == 0) return std::stod(line.substr(label.size() + 1));
  }
  FAIL("no line " << label);
  return 0;
}

// Every field of the CSV block after the header must parse as a finite number.
void check_numeric_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line) && line.find(',') != std::string::npos) {
    std::istringstream fields(line);
    std::string f;
    while (std::getline(fields, f, ',')) {
      if (f == "oracle" || f == "unit-yukawa" || f == "general-diagonal") continue;
      CHECK(std::isfinite(std::stod(f)));
    }
    ++rows;
  }
  CHECK(rows > 0);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("config parsing") {
  auto c = RunConfig::from_map("qft-fidelity", {{"l", "3"}, {"mode", "unit-yukawa"}, {"seeds", "3"}, {"seed", "7"}});
  CHECK(c.l == 3);
  CHECK(c.mode == QftMode::UnitYukawa);
  CHECK(c.seed_list() == std::vector<std::uint64_t>{7, 8, 9});

  CHECK(error_key("qft-fidelity", {}) == "l");
  CHECK(error_key("qft-fidelity", {{"l", "3"}, {"colour", "red"}}) == "colour");
  CHECK(error_key("qft-fidelity", {{"l", "x"}}) == "l");
  CHECK(error_key("qft-fidelity", {{"l", "3"}, {"mode", "fast"}}) == "mode");
  CHECK(error_key("qft-fidelity", {{"l", "3"}, {"lambda", "-1"}}) == "lambda");
  CHECK(error_key("nonsense", {{"l", "3"}}) == "experiment");
  CHECK(error_key("phase-gate", {{"l", "3"}, {"targets", "2:0"}}) == "targets");
  CHECK(error_key("schrodinger", {{"l", "8"}, {"potential", "cubic"}}) == "potential");
  try {
    RunConfig::from_map("qft-fidelity", {});
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()) == "missing: l");
  }

  std::istringstream text("# comment\nl = 4\n  mode=oracle  # trailing\n\nseeds = 2\n");
  auto values = read_config_text(text);
  CHECK(values.at("l") == "4");
  CHECK(values.at("mode") == "oracle");
  CHECK(values.at("seeds") == "2");
  std::istringstream bad("l 4\n");
  CHECK_THROWS_AS(read_config_text(bad), ConfigError);
  std::istringstream unknown("speed = 4\n");
  CHECK_THROWS_AS(read_config_text(unknown), ConfigError);
}

TEST_CASE("coupling and potential from config") {
  auto c = RunConfig::from_map("qft-fidelity", {{"l", "3"}});
  CHECK(c.coupling().is_canonical());
  auto b = RunConfig::from_map("qft-fidelity", {{"l", "3"}, {"form", "B"}, {"rho1", "0.3"}, {"rho2", "0.9"},
                                                {"rho3", "0.1"}, {"rho4", "0.5"}, {"decay", "yukawa"}, {"rho0", "1"}});
  CHECK(b.coupling().pair_coefficient(0, 1) == doctest::Approx(std::exp(-1.0)));
  CHECK(b.coupling().form().kind == PairForm::Kind::FormB);
  CHECK(error_key("qft-fidelity", {{"l", "3"}, {"form", "B"}, {"rho1", "1"}, {"rho2", "1"}, {"rho3", "1"},
                                   {"rho4", "1"}}) == "rho1");
  auto h = RunConfig::from_map("schrodinger", {{"l", "8"}, {"potential", "harmonic"}, {"omega", "2"}});
  CHECK(h.make_potential()(1.0) == doctest::Approx(2.0));
}

TEST_CASE("experiments write finite tables") {
  auto qft = run_to_string("qft-fidelity", {{"l", "3"}, {"mode", "oracle"}});
  CHECK(scalar(qft, "mean_fidelity") >= 1 - 1e-9);
  CHECK(qft.find("# seeds 1\n") != std::string::npos);
  check_numeric_table(qft.substr(qft.find("l,mode")));

  auto sch = run_to_string("schrodinger", {{"potential", "free"}, {"l", "8"}, {"t", "1"}, {"dt", "0.015625"}});
  CHECK(scalar(sch, "width_relative_error") <= 0.01);

  auto demo = run_to_string("decouple-demo", {{"l", "4"}, {"j", "3"}, {"k", "1"}, {"lambda", "2000"}, {"seeds", "40"}});
  CHECK(demo.find("# seeds 1 2 3") != std::string::npos);
  check_numeric_table(demo.substr(demo.find("basis,")));

  auto gate = run_to_string("phase-gate", {{"l", "3"}, {"targets", "2:0:0.5,1:0:-0.4"}, {"lambda", "4000"}, {"seeds", "8"}});
  check_numeric_table(gate.substr(gate.find("j,k,")));
  CHECK(scalar(gate, "max_abs_error") < 0.05);

  auto study = run_to_string("trotter-study", {{"l", "8"}, {"potential", "free"}});
  check_numeric_table(study.substr(study.find("delta_t,")));
}

TEST_CASE("runs are reproducible byte for byte") {
  const std::map<std::string, std::string> values{{"l", "3"}, {"mode", "unit-yukawa"}, {"lambda", "600"}, {"seeds", "4"}};
  CHECK(run_to_string("qft-fidelity", values) == run_to_string("qft-fidelity", values));

  const auto dir = std::filesystem::temp_directory_path() / "fixq_run_config_test";
  std::filesystem::remove_all(dir);
  auto with_output = [&](const std::string& sub) {
    auto v = std::map<std::string, std::string>{{"l", "6"}, {"potential", "harmonic"}, {"q0", "2"}, {"every", "8"},
                                                {"dt", "0.03125"}, {"output", (dir / sub).string()}};
    std::ostringstream os;
    run(RunConfig::from_map("schrodinger", v), os);
  };
  with_output("a");
  with_output("b");
  for (const char* name : {"wavefunction_t0.csv", "wavefunction_final.csv", "observables.csv"}) {
    const auto a = slurp(dir / "a" / name);
    CHECK(!a.empty());
    CHECK(a == slurp(dir / "b" / name));
  }
  std::filesystem::remove_all(dir);
}
