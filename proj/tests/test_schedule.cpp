#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fixq/errors.hpp"
#include "fixq/interaction.hpp"
#include "fixq/schedule.hpp"
#include "measure.hpp"
#include "oracles.hpp"

using namespace fixq;
using std::numbers::pi;

namespace {

StateVector random_register(int l, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return StateVector(l, oracle::random_state(l, rng));
}

PulseSchedule random_schedule(const CouplingModel& m, double total, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> t(0.0, total);
  std::uniform_int_distribution<int> q(0, m.num_qubits() - 1);
  std::uniform_int_distribution<int> kind(0, 3);
  PulseSchedule s(m, total);
  const double c = std::cos(0.3), sn = std::sin(0.3);
  for (int i = 0; i < 40; ++i) {
    switch (kind(rng)) {
      case 0: s.add(t(rng), q(rng), OneQubitGate::hadamard()); break;
      case 1: s.add(t(rng), q(rng), OneQubitGate::not_gate()); break;
      case 2: s.add(t(rng), q(rng), OneQubitGate::phase_shift(t(rng))); break;
      default: s.add(t(rng), q(rng), OneQubitGate::arbitrary({c, Complex(0, sn), Complex(0, sn), c}));
    }
  }
  return s;
}

}  // namespace

TEST_CASE("Poisson pulse sampling") {
  double total = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto times = sample_poisson_pulses(100.0, 0.0, 1.0, seed);
    total += static_cast<double>(times.size());
    CHECK(std::is_sorted(times.begin(), times.end()));
    CHECK(std::adjacent_find(times.begin(), times.end()) == times.end());
    if (!times.empty()) {
      CHECK(times.front() > 0.0);
      CHECK(times.back() < 1.0);
    }
  }
  const double mean = total / 200;
  CHECK(mean >= 85);
  CHECK(mean <= 115);
  CHECK(sample_poisson_pulses(100.0, 0.0, 0.0, 4).empty());
  CHECK(sample_poisson_pulses(100.0, 2.0, 3.0, 9) == sample_poisson_pulses(100.0, 2.0, 3.0, 9));
  CHECK(sample_poisson_pulses(100.0, 2.0, 3.0, 9) != sample_poisson_pulses(100.0, 2.0, 3.0, 10));
  CHECK_THROWS_AS(sample_poisson_pulses(0.0, 0.0, 1.0, 1), DomainError);
  CHECK_THROWS_AS(sample_poisson_pulses(-5.0, 0.0, 1.0, 1), DomainError);
}

TEST_CASE("decoupling schedules") {
  auto two = build_decoupling_schedule(CouplingModel::canonical(2), 1, 0, 500, 1.0, 3);
  CHECK(two.events().empty());

  auto m = CouplingModel::canonical(5);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto s = build_decoupling_schedule(m, 3, 1, 300, 1.0, seed);
    for (int p = 0; p < 5; ++p) {
      const auto nots = s.count(p, OneQubitGate::Kind::Not);
      if (p == 3 || p == 1) CHECK(nots == 0);
      else {
        CHECK(nots % 2 == 0);
        CHECK(nots > 100);
      }
    }
    // bit restoration on every basis input
    for (std::uint64_t a = 0; a < 32; a += 5) {
      auto out = simulate(StateVector::basis(5, a), s);
      CHECK(std::norm(out[a]) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(build_decoupling_schedule(m, 3, 1, 40, 1.0, 1), DomainError);
  CHECK_THROWS_AS(build_decoupling_schedule(m, 2, 2, 400, 1.0, 1), DomainError);
}

TEST_CASE("decoupling phases match the spectator averages") {
  auto m = CouplingModel::canonical(4);
  auto r = measure::measure_decoupling(m, 3, 1, 2000, 1.0, 100);
  CHECK(r.bits_restored);
  CHECK(r.max_relative_error < 0.02);
}

TEST_CASE("property: spectator averaging error shrinks with the pulse rate") {
  auto m = CouplingModel::canonical(4);
  auto err = [&](double rate) {
    auto r = measure::measure_decoupling(m, 3, 1, rate, 1.0, 100);
    double e = 0;
    for (std::size_t a = 0; a < r.predicted.size(); ++a) e += std::abs(r.mean_phase[a] - r.predicted[a]);
    return e;
  };
  const double e500 = err(500), e8000 = err(8000);
  CHECK(e8000 <= e500);
}

TEST_CASE("compensation for decoupling") {
  auto c2 = compensation_for_decoupling(CouplingModel::canonical(2), 1, 0, 1.0);
  CHECK(c2.pruned().quadratic().empty());
  CHECK(c2.constant() == 0.0);
  CHECK(c2.linear(0) == 0.0);
  CHECK(c2.linear(1) == 0.0);

  CouplingModel uniform(3, PairForm::form_a(1.0), DecayLaw::power_law(1.0, 0.0));
  auto c3 = compensation_for_decoupling(uniform, 2, 0, 1.0);
  CHECK(c3.linear(2) == doctest::Approx(-0.5));
  CHECK(c3.linear(0) == doctest::Approx(-0.5));
  CHECK(c3.linear(1) == 0.0);
  CHECK(c3.constant() == 0.0);
  CHECK(c3.pruned().quadratic().empty());

  // (3,2) separated on the canonical four-qubit line, written out by hand:
  // spectators 0 and 1, pair distances r give pi / (2^r r).
  auto d = [](int r) { return pi / (std::ldexp(1.0, r) * r); };
  auto c4 = compensation_for_decoupling(CouplingModel::canonical(4), 3, 2, 1.0);
  CHECK(c4.linear(3) == doctest::Approx(-0.5 * (d(3) + d(2))));
  CHECK(c4.linear(2) == doctest::Approx(-0.5 * (d(2) + d(1))));
  CHECK(c4.constant() == doctest::Approx(-0.25 * d(1)));
  CHECK(c4.linear(0) == 0.0);
  CHECK(c4.linear(1) == 0.0);
  CHECK(c4.pruned().quadratic().empty());
}

TEST_CASE("signed pair phase schedules") {
  auto m2 = CouplingModel::canonical(2);
  auto empty = signed_pair_phase_schedule(m2, 1, 0, 0.0, 500, 1);
  CHECK(empty.events().empty());
  CHECK(empty.total_time() == 0.0);

  PhasePolynomial target(2);
  target.add_quadratic(1, 0, pi / 4);
  for (int i = 0; i < 4; ++i) {
    auto s = random_register(2, 50 + i);
    auto got = simulate(s, signed_pair_phase_schedule(m2, 1, 0, pi / 4, 500, 1));
    CHECK(fidelity(got, evolve_diagonal(s, target, 1.0)) > 1 - 1e-10);
  }

  // negative target on a four-qubit line with spectators
  auto m4 = CouplingModel::canonical(4);
  PhasePolynomial neg(4);
  neg.add_quadratic(3, 1, -pi / 4);
  double mean = 0;
  const int seeds = 50;
  for (int seed = 1; seed <= seeds; ++seed) {
    auto s = random_register(4, 900 + seed);
    auto sched = signed_pair_phase_schedule(m4, 3, 1, -pi / 4, 5000, static_cast<std::uint64_t>(seed));
    auto got = simulate(s, sched);
    mean += global_phase_aligned_distance(got, evolve_diagonal(s, neg, 1.0)) / seeds;
  }
  CHECK(mean <= 0.02);

  CouplingModel zero(3, PairForm::form_a(1.0), DecayLaw::from_table({{{1, 0}, 1.0}}));
  CHECK_THROWS_AS(signed_pair_phase_schedule(zero, 2, 0, 0.5, 500, 1), DomainError);
}

TEST_CASE("signed pair phases are exact on basis paths up to averaging") {
  // Exact path phases, global phase included; only spectator noise is left
  // and it averages out over seeds.
  auto m = CouplingModel::canonical(3);
  for (double c : {0.7, -1.1}) {
    double worst = 0;
    std::vector<double> mean(8, 0.0);
    const int seeds = 60;
    for (int seed = 1; seed <= seeds; ++seed) {
      auto sched = signed_pair_phase_schedule(m, 2, 0, c, 4000, static_cast<std::uint64_t>(seed));
      auto paths = basis_phases(sched);
      for (std::uint64_t a = 0; a < 8; ++a) {
        CHECK(paths[a].output == a);
        mean[a] += paths[a].phase / seeds;
      }
    }
    for (std::uint64_t a = 0; a < 8; ++a) {
      const double want = c * oracle::bit(a, 2) * oracle::bit(a, 0);
      worst = std::max(worst, std::abs(oracle::wrap(mean[a] - want)));
    }
    CHECK(worst < 0.02);
  }
}

TEST_CASE("sync interval packing") {
  auto one = build_sync_intervals({0.0, 1.0}, {{{1, 0}, 0.3}});
  REQUIRE(one.size() == 1);
  CHECK(one[0].start > 0.0);
  CHECK(one[0].end() < 1.0);

  const int l = 5;
  std::vector<double> times;
  for (int i = 0; i < l; ++i) times.push_back(3.0 * i);
  std::map<std::pair<int, int>, double> lengths;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.05, 0.4);
  for (int j = 1; j < l; ++j) {
    for (int k = 0; k < j; ++k) lengths[{j, k}] = u(rng);
  }
  auto iv = build_sync_intervals(times, lengths);
  REQUIRE(iv.size() == 10);
  for (std::size_t a = 0; a < iv.size(); ++a) {
    CHECK(iv[a].start > times[iv[a].k]);
    CHECK(iv[a].end() < times[iv[a].j]);
    CHECK(iv[a].length == lengths[{iv[a].j, iv[a].k}]);
    // same half as the midpoint of the two Hadamard instants
    const double mid = 0.5 * (times[iv[a].j] + times[iv[a].k]);
    const double half = 1.5;
    const double lo = std::floor(mid / half - 1e-9) * half;
    CHECK(iv[a].start >= lo - 1e-12);
    CHECK(iv[a].end() <= lo + half + 1e-12);
    for (std::size_t b = 0; b < iv.size(); ++b) {
      if (a == b) continue;
      const bool overlap = std::max(iv[a].start, iv[b].start) < std::min(iv[a].end(), iv[b].end());
      CHECK_FALSE(overlap);
    }
  }

  CHECK_THROWS_AS(build_sync_intervals({0.0, 1.0}, {{{1, 0}, 0.6}}), InfeasibleError);
  CHECK_THROWS_AS(build_sync_intervals({0.0, 1.0, 2.0}, {{{1, 0}, 0.3}, {{2, 1}, 0.3}, {{2, 0}, 0.5}}),
                  InfeasibleError);
  CHECK_THROWS_AS(build_sync_intervals({0.0, 0.0}, {{{1, 0}, 0.1}}), DomainError);
  CHECK_THROWS_AS(validate_sync_intervals({0.0, 1.0}, {{1, 0, 0.5, 0.6}}), DomainError);
}

TEST_CASE("simulate") {
  auto m = CouplingModel::canonical(3);
  auto s = random_register(3, 2);
  auto empty = PulseSchedule(m, 1.7);
  auto got = simulate(s, empty);
  auto want = evolve_diagonal(s, m.hamiltonian_polynomial(), 1.7);
  for (std::size_t a = 0; a < 8; ++a) CHECK(std::abs(got[a] - want[a]) < 1e-12);

  CouplingModel pair(2, PairForm::form_a(1.0), DecayLaw::power_law(0.8, 0.0));
  const double total = 2.0;
  PulseSchedule one_not(pair, total);
  one_not.add(total / 2, 0, OneQubitGate::not_gate());
  auto out = simulate(StateVector::basis(2, 3), one_not);
  CHECK(std::abs(out[2] - std::polar(1.0, -0.8 * total / 2)) < 1e-14);
  auto paths = basis_phases(one_not);
  CHECK(paths[3].output == 2);
  CHECK(paths[3].phase == doctest::Approx(0.8 * total / 2));

  CHECK_THROWS_AS(simulate(new_register(2), empty), SizeError);
}

TEST_CASE("property: simulation is invariant under segmentation") {
  auto m = CouplingModel(4, PairForm::form_b(0.2, -0.4, 0.9, 1.3), DecayLaw::yukawa_natural(1.5, 0.8));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const double total = 3.0;
    auto whole = random_schedule(m, total, seed);
    PulseSchedule first(m, total / 2), second(m, total / 2);
    for (const auto& e : whole.events()) {
      if (e.time < total / 2) first.add(e.time, e.qubit, e.gate);
      else second.add(e.time - total / 2, e.qubit, e.gate);
    }
    auto s = random_register(4, seed);
    auto a = simulate(simulate(s, first), second);
    auto b = simulate(s, whole);
    for (std::size_t i = 0; i < 16; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
    CHECK(std::abs(b.norm_squared() - 1.0) < 1e-10);

    PulseSchedule joined = first;
    joined.append(second);
    CHECK(export_schedule(joined) == export_schedule(whole));
  }
}

TEST_CASE("property: basis paths agree with full simulation") {
  auto m = CouplingModel::canonical(5);
  auto sched = signed_pair_phase_schedule(m, 4, 1, -0.9, 600, 12);
  auto paths = basis_phases(sched);
  for (std::uint64_t a = 0; a < 32; ++a) {
    auto out = simulate(StateVector::basis(5, a), sched);
    CHECK(paths[a].output == a);
    CHECK(std::abs(out[a] - std::polar(1.0, -paths[a].phase)) < 1e-9);
  }
}

TEST_CASE("determinism and export format") {
  auto m = CouplingModel::canonical(4);
  auto a = signed_pair_phase_schedule(m, 3, 0, 0.4, 3000, 42);
  auto b = signed_pair_phase_schedule(m, 3, 0, 0.4, 3000, 42);
  auto c = signed_pair_phase_schedule(m, 3, 0, 0.4, 3000, 43);
  CHECK(export_schedule(a) == export_schedule(b));
  CHECK(export_schedule(a) != export_schedule(c));
  auto s = random_register(4, 1);
  auto sa = simulate(s, a), sb = simulate(s, b);
  for (std::size_t i = 0; i < 16; ++i) CHECK(sa[i] == sb[i]);

  PulseSchedule small(m, 1.0);
  small.add(0.5, 2, OneQubitGate::phase_shift(0.25));
  small.add(0.25, 1, OneQubitGate::hadamard());
  small.add(0.25, 0, OneQubitGate::not_gate());
  CHECK(export_schedule(small) == "0.25 1 H\n0.25 0 NOT\n0.5 2 P 0.25\n");

  std::istringstream in(export_schedule(a));
  std::string line;
  double last = -1;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    double t;
    int q;
    std::string g;
    REQUIRE(static_cast<bool>(ls >> t >> q >> g));
    CHECK(t >= last);
    last = t;
    CHECK((g == "NOT" || g == "P"));
  }
  CHECK_THROWS_AS(small.add(1.5, 0, OneQubitGate::not_gate()), DomainError);
}
