#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fixq/interaction.hpp"
#include "fixq/qft_protocol.hpp"
#include "fixq/schrodinger.hpp"

namespace fixq {

enum class Experiment { QftFidelity, DecoupleDemo, PhaseGate, Schrodinger, TrotterStudy };

/// Fully resolved experiment parameters.
struct RunConfig {
  Experiment experiment = Experiment::QftFidelity;
  int l = 0;

  // transform / pulses
  QftMode mode = QftMode::OracleCompensated;
  Direction direction = Direction::Inverse;
  double lambda = 5000.0;
  std::uint64_t seed = 1;
  int seeds = 1;
  int separated_j = -1;
  int separated_k = -1;
  double duration = 1.0;
  std::vector<CrossTarget> targets;  // phase-gate pairs over register qubits

  // coupling
  std::string form = "A";
  double rho = 1.0;
  double rho1 = 1.0, rho2 = 0.0, rho3 = 0.0, rho4 = 1.0;
  std::string decay = "yukawa2";
  double rho0 = 3.141592653589793;
  double screening = 1.0;
  double alpha = 0.0;

  // wave packet
  QftBackendMode backend = QftBackendMode::Reference;
  std::string potential = "free";
  double mass = 1.0;
  double omega = 1.0;
  double force = 0.0;
  double sigma = 1.0;
  double q0 = 0.0;
  double p0 = 0.0;
  double dt = 1.0 / 64.0;
  double t = 1.0;
  KineticConvention convention = KineticConvention::Centered;
  int halvings = 2;
  int every = 0;  // observables every n steps; 0 = start and end only

  std::string output;  // directory; empty writes tables to the stream

  std::vector<std::uint64_t> seed_list() const;
  CouplingModel coupling() const;
  Potential make_potential() const;

  /// Keys accepted in config files and as --flags.
  static const std::vector<std::string>& known_keys();
  /// Throws ConfigError naming the offending key ("missing: l", ...).
  static RunConfig from_map(const std::string& experiment, const std::map<std::string, std::string>& values);
};

/// Flat `key = value` lines, `#` comments. Throws ConfigError on
/// malformed lines or unknown keys.
std::map<std::string, std::string> read_config_text(std::istream& in);

/// Runs the experiment. Tables go to files under config.output when set,
/// otherwise to `out`. Seeds and a one-line summary always go to `out`.
void run(const RunConfig& config, std::ostream& out);

}  // namespace fixq
