#include "fixq/statevector.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fixq/errors.hpp"

namespace fixq {

namespace {

void check_qubit_count(int l) {
  if (l < 1 || l > kMaxQubits) {
    throw SizeError("register size " + std::to_string(l) + " outside [1, " +
                    std::to_string(kMaxQubits) + "]");
  }
}

void check_same_size(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw SizeError("dimension mismatch: " + std::to_string(a.num_qubits()) + " vs " +
                    std::to_string(b.num_qubits()) + " qubits");
  }
}

}  // namespace

OneQubitGate OneQubitGate::hadamard() {
  const double s = 1.0 / std::numbers::sqrt2;
  return {Kind::Hadamard, 0.0, {Complex{s}, Complex{s}, Complex{s}, Complex{-s}}};
}

OneQubitGate OneQubitGate::not_gate() {
  return {Kind::Not, 0.0, {Complex{0}, Complex{1}, Complex{1}, Complex{0}}};
}

OneQubitGate OneQubitGate::phase_shift(double theta) {
  return {Kind::PhaseShift, theta, {Complex{1}, Complex{0}, Complex{0}, std::polar(1.0, theta)}};
}

OneQubitGate OneQubitGate::arbitrary(const Matrix& u) {
  // (U U^dagger)_{rc} = sum_m u_{rm} conj(u_{cm})
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      Complex s = u[2 * r] * std::conj(u[2 * c]) + u[2 * r + 1] * std::conj(u[2 * c + 1]);
      const Complex expected = r == c ? Complex{1} : Complex{0};
      if (std::abs(s - expected) > kUnitaryTolerance) {
        throw DomainError("one-qubit gate is not unitary");
      }
    }
  }
  return {Kind::ArbitraryU, 0.0, u};
}

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  check_qubit_count(num_qubits);
  amps_.assign(std::size_t{1} << num_qubits, Complex{0});
  amps_[0] = 1.0;
}

StateVector::StateVector(int num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
  check_qubit_count(num_qubits);
  if (amps_.size() != (std::size_t{1} << num_qubits)) {
    throw SizeError("amplitude count " + std::to_string(amps_.size()) + " is not 2^" +
                    std::to_string(num_qubits));
  }
}

StateVector StateVector::basis(int num_qubits, std::uint64_t index) {
  StateVector s(num_qubits);
  if (index >= s.dimension()) throw DomainError("basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

double StateVector::norm_squared() const {
  double n = 0.0;
  for (const auto& a : amps_) n += std::norm(a);
  return n;
}

StateVector new_register(int num_qubits) { return StateVector(num_qubits); }

StateVector apply_gate(StateVector state, int qubit, const OneQubitGate& gate) {
  if (qubit < 0 || qubit >= state.num_qubits()) {
    throw DomainError("qubit " + std::to_string(qubit) + " out of range");
  }
  auto amps = state.mutable_amplitudes();
  const std::size_t stride = std::size_t{1} << qubit;
  const auto& u = gate.matrix();
  for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Complex a0 = amps[i];
      const Complex a1 = amps[i + stride];
      amps[i] = u[0] * a0 + u[1] * a1;
      amps[i + stride] = u[2] * a0 + u[3] * a1;
    }
  }
  return state;
}

std::vector<double> diagonal_table(const PhasePolynomial& phase, int num_qubits) {
  if (phase.num_bits() > num_qubits) {
    throw SizeError("phase polynomial has more bits than the register");
  }
  const std::size_t n = std::size_t{1} << num_qubits;
  std::vector<double> table(n);
  for (std::size_t a = 0; a < n; ++a) table[a] = phase.evaluate(a);
  return table;
}

StateVector evolve_diagonal(StateVector state, const PhasePolynomial& phase, double duration) {
  if (!(duration >= 0.0)) throw DomainError("evolve_diagonal: negative duration");
  if (duration == 0.0) return state;
  const auto table = diagonal_table(phase, state.num_qubits());
  auto amps = state.mutable_amplitudes();
  for (std::size_t a = 0; a < amps.size(); ++a) amps[a] *= std::polar(1.0, -duration * table[a]);
  return state;
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  check_same_size(a, b);
  Complex s{0};
  for (std::size_t i = 0; i < a.dimension(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner_product(a, b)); }

double global_phase_aligned_distance(const StateVector& a, const StateVector& b) {
  // Rotate b onto a and measure directly; sqrt(2 - 2|<a|b>|) loses half the
  // digits near zero.
  const Complex overlap = inner_product(b, a);
  const Complex align = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) s += std::norm(a[i] - align * b[i]);
  return std::sqrt(s);
}

double distance(const StateVector& a, const StateVector& b) {
  check_same_size(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

std::uint64_t reverse_bits(std::uint64_t value, int num_bits) {
  std::uint64_t out = 0;
  for (int j = 0; j < num_bits; ++j) {
    if ((value >> j) & 1U) out |= std::uint64_t{1} << (num_bits - 1 - j);
  }
  return out;
}

StateVector bit_reversed(StateVector state) {
  const int l = state.num_qubits();
  std::vector<Complex> out(state.dimension());
  for (std::size_t a = 0; a < out.size(); ++a) out[reverse_bits(a, l)] = state[a];
  return StateVector(l, std::move(out));
}

}  // namespace fixq
