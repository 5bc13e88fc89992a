#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fixq/errors.hpp"
#include "fixq/interaction.hpp"
#include "fixq/statevector.hpp"
#include "oracles.hpp"

using namespace fixq;
using std::numbers::pi;

namespace {

StateVector random_register(int l, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return StateVector(l, oracle::random_state(l, rng));
}

PhasePolynomial random_poly(int l, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  PhasePolynomial p(l);
  p.add_constant(u(rng));
  for (int j = 0; j < l; ++j) {
    p.add_linear(j, u(rng));
    for (int k = 0; k < j; ++k) p.add_quadratic(j, k, u(rng));
  }
  return p;
}

double max_entry_diff(const StateVector& a, const StateVector& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.dimension(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("new_register starts in the all-zero basis state") {
  auto one = new_register(1);
  CHECK(one.dimension() == 2);
  CHECK(one[0] == Complex(1.0));
  CHECK(one[1] == Complex(0.0));
  auto two = new_register(2);
  CHECK(two.dimension() == 4);
  CHECK(two[0] == Complex(1.0));
  for (int i = 1; i < 4; ++i) CHECK(two[i] == Complex(0.0));
  CHECK_THROWS_AS(new_register(25), SizeError);
  CHECK_THROWS_AS(new_register(0), SizeError);
  CHECK_THROWS_AS(StateVector(2, std::vector<Complex>(3)), SizeError);
}

TEST_CASE("single qubit gates") {
  auto h = apply_gate(new_register(1), 0, OneQubitGate::hadamard());
  CHECK(std::abs(h[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(h[1] - 1.0 / std::sqrt(2.0)) < 1e-15);

  auto flipped = apply_gate(StateVector::basis(2, 1), 1, OneQubitGate::not_gate());
  CHECK(std::abs(flipped[3] - 1.0) < 1e-15);
  CHECK(std::abs(flipped.norm_squared() - 1.0) < 1e-15);

  auto minus = apply_gate(h, 0, OneQubitGate::phase_shift(pi));
  CHECK(std::abs(minus[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(minus[1] + 1.0 / std::sqrt(2.0)) < 1e-15);

  CHECK_THROWS_AS(apply_gate(new_register(2), 2, OneQubitGate::not_gate()), DomainError);
  CHECK_THROWS_AS(apply_gate(new_register(2), -1, OneQubitGate::not_gate()), DomainError);
  CHECK_THROWS_AS(OneQubitGate::arbitrary({1.0, 1.0, 0.0, 1.0}), DomainError);
}

TEST_CASE("apply_gate matches the dense Kronecker product") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 2 * pi);
  const double a = u(rng), b = u(rng), c = u(rng);
  // a generic SU(2) element
  OneQubitGate::Matrix m{std::polar(std::cos(a), b), std::polar(std::sin(a), c),
                         -std::polar(std::sin(a), -c), std::polar(std::cos(a), -b)};
  auto gate = OneQubitGate::arbitrary(m);
  for (int q = 0; q < 4; ++q) {
    auto s = random_register(4, 100 + q);
    std::vector<Complex> v(s.amplitudes().begin(), s.amplitudes().end());
    auto expect = oracle::apply(oracle::embed(4, q, m), v);
    auto got = apply_gate(s, q, gate);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(got[i] - expect[i]) < 1e-13);
  }
}

TEST_CASE("evolve_diagonal") {
  PhasePolynomial p(2);
  p.add_quadratic(1, 0, pi);
  auto s = evolve_diagonal(StateVector::basis(2, 3), p, 1.0);
  CHECK(std::abs(s[3] + 1.0) < 1e-15);

  std::mt19937_64 rng(5);
  auto r = random_register(3, 6);
  auto arb = random_poly(3, rng);
  CHECK(max_entry_diff(evolve_diagonal(r, arb, 0.0), r) == 0.0);
  CHECK_THROWS_AS(evolve_diagonal(r, arb, -0.1), DomainError);

  // random coupling model, per-basis loop
  std::uniform_real_distribution<double> u(0.1, 2.0);
  CouplingModel model(3, PairForm::form_b(u(rng), u(rng), u(rng), u(rng) + 3.0), DecayLaw::yukawa_natural(u(rng), u(rng)));
  auto phi = model.hamiltonian_polynomial();
  auto out = evolve_diagonal(r, phi, 0.7);
  for (std::uint64_t a = 0; a < 8; ++a) {
    double e = phi.constant();
    for (int j = 0; j < 3; ++j) {
      e += phi.linear(j) * oracle::bit(a, j);
      for (int k = 0; k < j; ++k) e += phi.quadratic(j, k) * oracle::bit(a, j) * oracle::bit(a, k);
    }
    CHECK(std::abs(out[a] - r[a] * std::polar(1.0, -0.7 * e)) < 1e-12);
  }
}

TEST_CASE("fidelity and distances") {
  auto zero = new_register(1);
  auto one = StateVector::basis(1, 1);
  auto plus = apply_gate(zero, 0, OneQubitGate::hadamard());
  CHECK(fidelity(plus, plus) == doctest::Approx(1.0));
  CHECK(fidelity(zero, one) == 0.0);
  CHECK(fidelity(plus, zero) == doctest::Approx(0.5));
  CHECK_THROWS_AS(fidelity(zero, new_register(2)), SizeError);

  auto r = random_register(3, 2);
  auto rotated = r;
  for (auto& z : rotated.mutable_amplitudes()) z *= std::polar(1.0, pi / 3);
  CHECK(global_phase_aligned_distance(r, r) < 1e-7);
  CHECK(global_phase_aligned_distance(r, rotated) < 1e-7);
  CHECK(distance(r, rotated) > 0.5);
  CHECK(global_phase_aligned_distance(zero, one) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("bit reversal") {
  CHECK(reverse_bits(0b001, 3) == 0b100);
  CHECK(reverse_bits(0b110, 3) == 0b011);
  CHECK(reverse_bits(5, 4) == 10);
  auto s = bit_reversed(StateVector::basis(3, 1));
  CHECK(std::abs(s[4] - 1.0) < 1e-15);
}

TEST_CASE("property: norm conservation, NOT twice, diagonal commutation, duration linearity") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const int l = 1 + trial % 6;
    auto s = random_register(l, 1000 + trial);
    std::uniform_int_distribution<int> pick(0, l - 1);
    const int q = pick(rng);

    auto h = apply_gate(s, q, OneQubitGate::hadamard());
    CHECK(std::abs(h.norm_squared() - 1.0) < kNormTolerance);
    auto p = apply_gate(s, q, OneQubitGate::phase_shift(1.234));
    CHECK(std::abs(p.norm_squared() - 1.0) < kNormTolerance);

    auto nn = apply_gate(apply_gate(s, q, OneQubitGate::not_gate()), q, OneQubitGate::not_gate());
    CHECK(max_entry_diff(nn, s) < 1e-12);

    auto f1 = random_poly(l, rng);
    auto f2 = random_poly(l, rng);
    std::uniform_real_distribution<double> ud(0.0, 2.0);
    const double t1 = ud(rng), t2 = ud(rng);
    auto seq = evolve_diagonal(evolve_diagonal(s, f1, t1), f2, t2);
    CHECK(std::abs(seq.norm_squared() - 1.0) < kNormTolerance);
    auto joint = evolve_diagonal(s, f1 * t1 + f2 * t2, 1.0);
    CHECK(max_entry_diff(seq, joint) < 1e-12);

    auto split = evolve_diagonal(evolve_diagonal(s, f1, t2), f1, t1);
    CHECK(max_entry_diff(split, evolve_diagonal(s, f1, t1 + t2)) < 1e-12);
  }
}
