#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "fixq/phase_polynomial.hpp"

namespace fixq {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 24;
inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kUnitaryTolerance = 1e-12;

/// Instantaneous single-qubit gate. Matrices act on (|0>, |1>) in row-major
/// order: {u00, u01, u10, u11}.
class OneQubitGate {
 public:
  enum class Kind { Hadamard, Not, PhaseShift, ArbitraryU };
  using Matrix = std::array<Complex, 4>;

  static OneQubitGate hadamard();
  static OneQubitGate not_gate();
  /// diag(1, e^{i theta}).
  static OneQubitGate phase_shift(double theta);
  /// Throws DomainError unless U U^dagger = I within kUnitaryTolerance.
  static OneQubitGate arbitrary(const Matrix& u);

  Kind kind() const { return kind_; }
  double theta() const { return theta_; }
  const Matrix& matrix() const { return matrix_; }
  bool is_diagonal() const { return kind_ == Kind::PhaseShift; }

 private:
  OneQubitGate(Kind kind, double theta, const Matrix& m) : kind_(kind), theta_(theta), matrix_(m) {}

  Kind kind_;
  double theta_;
  Matrix matrix_;
};

/// Pure state of an l-qubit register. Basis index a = sum_j a_j 2^j, so
/// qubit j is bit j of the index.
class StateVector {
 public:
  /// |0...0> on l qubits; SizeError unless 1 <= l <= kMaxQubits.
  explicit StateVector(int num_qubits);
  /// Takes ownership of amplitudes; length must be 2^num_qubits.
  StateVector(int num_qubits, std::vector<Complex> amplitudes);

  static StateVector basis(int num_qubits, std::uint64_t index);

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> mutable_amplitudes() { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const;

 private:
  int num_qubits_;
  std::vector<Complex> amps_;
};

StateVector new_register(int num_qubits);

StateVector apply_gate(StateVector state, int qubit, const OneQubitGate& gate);

/// Multiplies amp_a by exp(-i duration phase(a)). Exact; no time stepping.
StateVector evolve_diagonal(StateVector state, const PhasePolynomial& phase, double duration);

/// Table of phase(a) for every basis index.
std::vector<double> diagonal_table(const PhasePolynomial& phase, int num_qubits);

Complex inner_product(const StateVector& a, const StateVector& b);
double fidelity(const StateVector& a, const StateVector& b);
/// min over phi of ||a - e^{i phi} b||.
double global_phase_aligned_distance(const StateVector& a, const StateVector& b);
/// Plain ||a - b||.
double distance(const StateVector& a, const StateVector& b);

/// Reverses the order of the l index bits.
std::uint64_t reverse_bits(std::uint64_t value, int num_bits);
/// Permutes amplitudes so that amp'[reverse_bits(a)] = amp[a].
StateVector bit_reversed(StateVector state);

}  // namespace fixq
