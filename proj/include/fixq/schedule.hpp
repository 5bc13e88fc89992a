#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fixq/interaction.hpp"
#include "fixq/statevector.hpp"

namespace fixq {

/// Below this product of pulse rate and window length the random pulse
/// train does not average the interactions it is meant to suppress.
inline constexpr double kMinPulsesPerWindow = 50.0;

struct PulseEvent {
  double time;
  int qubit;
  OneQubitGate gate;
};

/// Instantaneous one-qubit gates over the always-on background interaction.
///
/// Events are kept sorted by time. Events sharing a timestamp execute in the
/// order they were added, which lets builders express "restore, then
/// compensate" at a window boundary without inventing offsets.
class PulseSchedule {
 public:
  PulseSchedule(CouplingModel background, double total_time);

  const CouplingModel& background() const { return background_; }
  int num_qubits() const { return background_.num_qubits(); }
  double total_time() const { return total_time_; }
  const std::vector<PulseEvent>& events() const;
  /// Phase phi0 of the overall factor e^{-i phi0}; collects the constant
  /// parts of compensations, which no one-qubit pulse can produce.
  double global_phase() const { return global_phase_; }

  void add(double time, int qubit, const OneQubitGate& gate);
  void add_global_phase(double phase) { global_phase_ += phase; }
  /// Applies the linear part of poly as PhaseShift gates at `time` and its
  /// constant as global phase, so the net factor is e^{-i poly(x)}.
  /// Quadratic terms are rejected.
  void add_linear_phase(double time, const PhasePolynomial& poly);
  /// Appends `other` after this schedule's end; total times add.
  void append(const PulseSchedule& other);
  /// Stretches total_time (events untouched).
  void extend_to(double total_time);

  std::size_t count(int qubit, OneQubitGate::Kind kind) const;

 private:
  CouplingModel background_;
  double total_time_;
  // appended in insertion order, stable-sorted by time on first read
  mutable std::vector<PulseEvent> events_;
  mutable bool sorted_ = true;
  double global_phase_ = 0.0;
};

/// Window (start, start + length) during which qubits j and k receive the
/// same pulse instants. In the transform construction j and k are
/// Hadamard-order indices, j > k.
struct SyncInterval {
  int j;
  int k;
  double start;
  double length;
  double end() const { return start + length; }
};

/// Deterministic generator for stream `stream` of run `seed`.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);

/// Poisson arrivals of the given rate inside the open window (t_start, t_end).
std::vector<double> sample_poisson_pulses(double rate, double t_start, double t_end, std::mt19937_64& rng);
std::vector<double> sample_poisson_pulses(double rate, double t_start, double t_end, std::uint64_t seed);

/// Random NOT trains on every qubit except j and k over [0, duration]; each
/// train ends with an extra NOT when its count is odd so all bits return.
PulseSchedule build_decoupling_schedule(const CouplingModel& model, int j, int k, double rate,
                                        double duration, std::uint64_t seed);

/// Sum of all pair interactions with the bits in `randomized` replaced by
/// their time average 1/2. `excluded_pair` (if j != k) is left out.
PhasePolynomial averaged_hamiltonian(const CouplingModel& model, const std::vector<bool>& randomized,
                                     std::pair<int, int> excluded_pair = {0, 0});

/// Negative of the phase the spectators deposit during a decoupling run of
/// the given duration: linear in x_j, x_k plus a constant.
PhasePolynomial compensation_for_decoupling(const CouplingModel& model, int j, int k, double duration);

/// Pulse program whose ideal net action is exp(-i c x_j x_k), up to
/// stochastic decoupling error. c = 0 yields an empty schedule.
PulseSchedule signed_pair_phase_schedule(const CouplingModel& model, int j, int k, double c, double rate,
                                         std::uint64_t seed);

/// Packs one synchronization window per requested pair (j > k, Hadamard
/// indices) between consecutive Hadamard instants. Each window goes into the
/// half-gap holding (t_j + t_k)/2; windows sharing a half are laid out
/// disjointly with equal slack around them.
std::vector<SyncInterval> build_sync_intervals(const std::vector<double>& hadamard_times,
                                               const std::map<std::pair<int, int>, double>& required_lengths);

/// Checks non-overlap and t_k < start < end < t_j for every window.
void validate_sync_intervals(const std::vector<double>& hadamard_times, const std::vector<SyncInterval>& intervals);

/// Exact evolution: diagonal background between events, gates at events.
StateVector simulate(StateVector state, const PulseSchedule& schedule);

/// For schedules built from NOT and PhaseShift gates only: where each basis
/// input ends up and the total (unwrapped) phase phi with amplitude e^{-i phi}.
struct BasisPath {
  std::uint64_t output;
  double phase;
};
std::vector<BasisPath> basis_phases(const PulseSchedule& schedule);

/// One line per event: `time qubit gate [param...]`, times at 17 digits.
std::string export_schedule(const PulseSchedule& schedule);

}  // namespace fixq
