#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fixq/interaction.hpp"
#include "fixq/schedule.hpp"
#include "fixq/statevector.hpp"

namespace fixq {

enum class Direction { Forward, Inverse };

/// UnitYukawa: Hadamards one time unit apart over the canonical coupling,
///   diagonal leftovers removed by random-pulse pair phase gates.
/// GeneralDiagonal: every qubit decoupled by random pulses except inside
///   synchronization windows, which produce the cross phases.
/// OracleCompensated: the UnitYukawa array with the leftovers removed by
///   exact diagonal operators; fully deterministic.
enum class QftMode { UnitYukawa, GeneralDiagonal, OracleCompensated };

const char* to_string(Direction d);
const char* to_string(QftMode m);

/// A plan executes as a sequence of stages: pulse schedules, or ideal
/// diagonal operators e^{-i poly(x)} over the register bits.
using Stage = std::variant<PulseSchedule, PhasePolynomial>;

/// Phase target c on a'_j b_k, with j > k in Hadamard order.
struct CrossTarget {
  int j;
  int k;
  double c;
};

/// Transform as a timed program. Hadamard number j acts at hadamard_times[j]
/// on qubit l-1-j, so the input bit a_{l-1-j} enters first as a'_j and the
/// output bit b_j is left on qubit l-1-j: outputs come out bit-reversed.
struct QftPlan {
  int l = 0;
  Direction direction = Direction::Inverse;
  QftMode mode = QftMode::OracleCompensated;
  std::vector<double> hadamard_times;
  std::vector<SyncInterval> sync_intervals;
  /// Over register qubits. Applied as ideal operators in OracleCompensated
  /// mode; realized inside the pulse program otherwise.
  PhasePolynomial pre_compensation;
  PhasePolynomial post_compensation;
  std::vector<Stage> stages;
  /// Approximate plans: targets kept after thresholding.
  bool truncated = false;
  double threshold = 0.0;
  std::vector<CrossTarget> cross_targets;
  /// Layout time not carried by pulse stages (ideal windows take no time).
  double span = 0.0;

  /// Physical time of the program: pulse stages plus span.
  double duration() const;
};

/// Qubit holding a'_j and, after Hadamard j, b_j.
inline int wire_of(int l, int hadamard_index) { return l - 1 - hadamard_index; }

/// Exact transform |a> -> N^{-1/2} sum_b e^{-/+ 2 pi i a b / N} |b>
/// (minus for Forward), computed by radix-2 FFT.
StateVector ideal_qft(StateVector state, Direction direction);

/// Accumulated phase of the Hadamard array over the canonical coupling for
/// input a, output b, summed term by term.
double phase_oracle(int l, std::uint64_t a, std::uint64_t b);

/// A over a'-bits and B over b-bits (bit j = Hadamard index j).
std::pair<PhasePolynomial, PhasePolynomial> diagonal_summands(int l);

/// Reindexes a polynomial over Hadamard-order bits onto register qubits.
PhasePolynomial to_register_order(const PhasePolynomial& poly);

/// Concatenated signed pair phase runs realizing e^{-i targets(x)} over
/// register qubits. Affine parts of `targets` become phase gates at the end.
PulseSchedule quadratic_phase_gate(const PhasePolynomial& targets, const CouplingModel& model, double rate,
                                   std::uint64_t seed);

enum class Realization { Stochastic, Ideal };

/// Hadamards at hadamard_times plus cross phases c a'_j b_k produced inside
/// the given synchronization windows. Window lengths must equal
/// |c| / |pair quadratic rate|. Ideal realization replaces each window by the
/// exact diagonal operator it approximates.
std::vector<Stage> cross_phase_gate(const CouplingModel& model, const std::vector<double>& hadamard_times,
                                    const std::vector<CrossTarget>& targets,
                                    const std::vector<SyncInterval>& intervals, double rate, std::uint64_t seed,
                                    Realization realization = Realization::Stochastic);

/// Window lengths for the targets, Hadamard spacing with 10% slack, and
/// packed windows. Returns (hadamard_times, intervals).
std::pair<std::vector<double>, std::vector<SyncInterval>> layout_cross_targets(
    const CouplingModel& model, const std::vector<CrossTarget>& targets);

/// rate and seed are ignored in OracleCompensated mode.
QftPlan build_qft_plan(int l, Direction direction, QftMode mode, const CouplingModel& model, double rate,
                       std::uint64_t seed);

/// Deterministic plan that keeps only cross phases with |c| >= threshold
/// (threshold 0 keeps all).
QftPlan approximate_qft_plan(int l, Direction direction, double threshold);

/// Runs every stage. Output is in register order (bit-reversed b).
StateVector apply_plan(StateVector state, const QftPlan& plan);

/// Plan output mapped back to natural index order, ready to compare with
/// ideal_qft.
StateVector run_plan_natural_order(const StateVector& input, const QftPlan& plan);

/// Mean and minimum of fidelity against ideal_qft over all basis inputs.
struct FidelityStats {
  double mean;
  double min;
};
FidelityStats basis_fidelity(const QftPlan& plan);

/// Retained cross targets touching each Hadamard index.
std::vector<int> targets_per_qubit(const QftPlan& plan);

std::string plan_summary(const QftPlan& plan);

}  // namespace fixq
