#include "fixq/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>

#include "fixq/errors.hpp"

namespace fixq {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* gate_name(OneQubitGate::Kind k) {
  switch (k) {
    case OneQubitGate::Kind::Hadamard: return "H";
    case OneQubitGate::Kind::Not: return "NOT";
    case OneQubitGate::Kind::PhaseShift: return "P";
    case OneQubitGate::Kind::ArbitraryU: return "U";
  }
  return "?";
}

}  // namespace

PulseSchedule::PulseSchedule(CouplingModel background, double total_time)
    : background_(std::move(background)), total_time_(total_time) {
  if (!(total_time >= 0.0) || !std::isfinite(total_time)) {
    throw DomainError("schedule total time must be finite and >= 0");
  }
}

void PulseSchedule::add(double time, int qubit, const OneQubitGate& gate) {
  if (!std::isfinite(time) || time < 0.0 || time > total_time_) {
    throw DomainError("pulse time " + fmt17(time) + " outside [0, " + fmt17(total_time_) + "]");
  }
  if (qubit < 0 || qubit >= num_qubits()) {
    throw DomainError("pulse qubit " + std::to_string(qubit) + " out of range");
  }
  if (!events_.empty() && time < events_.back().time) sorted_ = false;
  events_.push_back(PulseEvent{time, qubit, gate});
}

const std::vector<PulseEvent>& PulseSchedule::events() const {
  // const readers may share a schedule across threads
  static std::mutex settle_mutex;
  std::lock_guard<std::mutex> lock(settle_mutex);
  if (!sorted_) {
    std::stable_sort(events_.begin(), events_.end(),
                     [](const PulseEvent& a, const PulseEvent& b) { return a.time < b.time; });
    sorted_ = true;
  }
  return events_;
}

void PulseSchedule::add_linear_phase(double time, const PhasePolynomial& poly) {
  if (!poly.quadratic().empty()) {
    for (const auto& [key, c] : poly.quadratic()) {
      if (c != 0.0) throw DomainError("linear phase: polynomial has quadratic terms");
    }
  }
  for (int q = 0; q < poly.num_bits(); ++q) {
    const double c = poly.linear(q);
    // e^{-i c x} = diag(1, e^{-i c})
    if (c != 0.0) add(time, q, OneQubitGate::phase_shift(-c));
  }
  global_phase_ += poly.constant();
}

void PulseSchedule::append(const PulseSchedule& other) {
  if (other.num_qubits() != num_qubits()) throw SizeError("append: qubit counts differ");
  const double offset = total_time_;
  total_time_ += other.total_time_;
  events();  // settle our order before the tail goes on
  events_.reserve(events_.size() + other.events_.size());
  for (const auto& e : other.events()) events_.push_back(PulseEvent{e.time + offset, e.qubit, e.gate});
  global_phase_ += other.global_phase_;
}

void PulseSchedule::extend_to(double total_time) {
  if (total_time < total_time_) throw DomainError("extend_to: cannot shrink a schedule");
  total_time_ = total_time;
}

std::size_t PulseSchedule::count(int qubit, OneQubitGate::Kind kind) const {
  const auto& ev = events();
  return static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(), [&](const PulseEvent& e) {
    return e.qubit == qubit && e.gate.kind() == kind;
  }));
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

std::vector<double> sample_poisson_pulses(double rate, double t_start, double t_end, std::mt19937_64& rng) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("poisson rate must be positive");
  std::vector<double> times;
  if (!(t_end > t_start)) return times;
  std::exponential_distribution<double> gap(rate);
  double t = t_start;
  while (true) {
    t += gap(rng);
    if (t >= t_end) break;
    if (t > t_start && (times.empty() || t > times.back())) times.push_back(t);
  }
  return times;
}

std::vector<double> sample_poisson_pulses(double rate, double t_start, double t_end, std::uint64_t seed) {
  auto rng = make_rng(seed, 0);
  return sample_poisson_pulses(rate, t_start, t_end, rng);
}

namespace {

void check_separated(const CouplingModel& model, int j, int k) {
  const int l = model.num_qubits();
  if (j < 0 || k < 0 || j >= l || k >= l) throw DomainError("separated qubit out of range");
  if (j == k) throw DomainError("separated qubits must differ");
}

// Random NOT trains on the spectators, parity restored at `duration`.
void add_spectator_pulses(PulseSchedule& s, int j, int k, double rate, double duration, std::uint64_t seed) {
  for (int p = 0; p < s.num_qubits(); ++p) {
    if (p == j || p == k) continue;
    auto rng = make_rng(seed, static_cast<std::uint64_t>(p));
    const auto times = sample_poisson_pulses(rate, 0.0, duration, rng);
    for (double t : times) s.add(t, p, OneQubitGate::not_gate());
    if (times.size() % 2 == 1) s.add(duration, p, OneQubitGate::not_gate());
  }
}

}  // namespace

PulseSchedule build_decoupling_schedule(const CouplingModel& model, int j, int k, double rate, double duration,
                                        std::uint64_t seed) {
  check_separated(model, j, k);
  if (!(rate > 0.0)) throw DomainError("decoupling rate must be positive");
  if (!(duration >= 0.0)) throw DomainError("decoupling duration must be >= 0");
  if (duration > 0.0 && rate * duration < kMinPulsesPerWindow) {
    throw DomainError("decoupling rate too low: rate * duration = " + fmt17(rate * duration) + " < " +
                      fmt17(kMinPulsesPerWindow));
  }
  PulseSchedule s(model, duration);
  add_spectator_pulses(s, j, k, rate, duration, seed);
  return s;
}

PhasePolynomial averaged_hamiltonian(const CouplingModel& model, const std::vector<bool>& randomized,
                                     std::pair<int, int> excluded_pair) {
  const int l = model.num_qubits();
  if (static_cast<int>(randomized.size()) != l) throw SizeError("averaged_hamiltonian: mask size");
  const int ex_hi = std::max(excluded_pair.first, excluded_pair.second);
  const int ex_lo = std::min(excluded_pair.first, excluded_pair.second);
  PhasePolynomial total(l);
  for (int p = 1; p < l; ++p) {
    for (int q = 0; q < p; ++q) {
      if (ex_hi != ex_lo && p == ex_hi && q == ex_lo) continue;
      PhasePolynomial pair = model.pair_polynomial(p, q);
      if (randomized[static_cast<std::size_t>(p)]) pair = pair.substituted(p, 0.5);
      if (randomized[static_cast<std::size_t>(q)]) pair = pair.substituted(q, 0.5);
      total += pair;
    }
  }
  return total;
}

PhasePolynomial compensation_for_decoupling(const CouplingModel& model, int j, int k, double duration) {
  check_separated(model, j, k);
  std::vector<bool> spectators(static_cast<std::size_t>(model.num_qubits()), true);
  spectators[static_cast<std::size_t>(j)] = false;
  spectators[static_cast<std::size_t>(k)] = false;
  return averaged_hamiltonian(model, spectators, {j, k}) * -duration;
}

PulseSchedule signed_pair_phase_schedule(const CouplingModel& model, int j, int k, double c, double rate,
                                         std::uint64_t seed) {
  check_separated(model, j, k);
  const double rate_jk = model.pair_quadratic_rate(j, k);
  if (std::abs(rate_jk) < 1e-300) throw DomainError("pair (" + std::to_string(j) + "," + std::to_string(k) +
                                                    ") has zero coupling");
  if (c == 0.0) return PulseSchedule(model, 0.0);

  const double duration = std::abs(c) / std::abs(rate_jk);
  if (!(rate > 0.0) || rate * duration < kMinPulsesPerWindow) {
    throw DomainError("pair phase: rate * duration = " + fmt17(rate * duration) + " < " +
                      fmt17(kMinPulsesPerWindow));
  }
  // Holding j inverted during the run turns r x_j x_k into r x_k - r x_j x_k.
  const bool invert = (c > 0) != (rate_jk > 0);

  PulseSchedule s(model, duration);
  if (invert) s.add(0.0, j, OneQubitGate::not_gate());
  add_spectator_pulses(s, j, k, rate, duration, seed);
  if (invert) s.add(duration, j, OneQubitGate::not_gate());

  std::vector<bool> spectators(static_cast<std::size_t>(model.num_qubits()), true);
  spectators[static_cast<std::size_t>(j)] = false;
  spectators[static_cast<std::size_t>(k)] = false;
  PhasePolynomial expected = averaged_hamiltonian(model, spectators) * duration;
  if (invert) expected = expected.complemented(j);

  PhasePolynomial target(model.num_qubits());
  target.add_quadratic(j, k, c);
  PhasePolynomial correction = (target - expected).affine_part();
  s.add_linear_phase(duration, correction);
  return s;
}

std::vector<SyncInterval> build_sync_intervals(const std::vector<double>& hadamard_times,
                                               const std::map<std::pair<int, int>, double>& required_lengths) {
  const int l = static_cast<int>(hadamard_times.size());
  for (int i = 1; i < l; ++i) {
    if (!(hadamard_times[static_cast<std::size_t>(i)] > hadamard_times[static_cast<std::size_t>(i - 1)])) {
      throw DomainError("hadamard times must be strictly increasing");
    }
  }
  // Half-gap boundaries: t_0, mid_0, t_1, mid_1, ..., t_{l-1}.
  std::vector<double> bounds;
  for (int i = 0; i < l; ++i) {
    bounds.push_back(hadamard_times[static_cast<std::size_t>(i)]);
    if (i + 1 < l) {
      bounds.push_back(0.5 * (hadamard_times[static_cast<std::size_t>(i)] +
                              hadamard_times[static_cast<std::size_t>(i + 1)]));
    }
  }
  const int halves = static_cast<int>(bounds.size()) - 1;
  std::vector<std::vector<std::pair<std::pair<int, int>, double>>> members(static_cast<std::size_t>(std::max(halves, 0)));

  for (const auto& [key, length] : required_lengths) {
    const auto [j, k] = key;
    if (!(j > k) || k < 0 || j >= l) {
      throw DomainError("sync pair (" + std::to_string(j) + "," + std::to_string(k) + ") invalid");
    }
    if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("sync length must be positive");
    const double mid = 0.5 * (hadamard_times[static_cast<std::size_t>(j)] + hadamard_times[static_cast<std::size_t>(k)]);
    const double eps = 1e-12 * std::max(1.0, std::abs(mid));
    // a boundary point belongs to the half on its left
    int h = 0;
    while (h < halves - 1 && mid > bounds[static_cast<std::size_t>(h + 1)] + eps) ++h;
    members[static_cast<std::size_t>(h)].push_back({key, length});
  }

  std::vector<SyncInterval> out;
  for (int h = 0; h < halves; ++h) {
    auto& group = members[static_cast<std::size_t>(h)];
    if (group.empty()) continue;
    const double lo = bounds[static_cast<std::size_t>(h)];
    const double width = bounds[static_cast<std::size_t>(h + 1)] - lo;
    double used = 0.0;
    for (const auto& m : group) used += m.second;
    if (!(used < width)) {
      throw InfeasibleError("sync windows need " + fmt17(used) + " but the half-gap holds " + fmt17(width));
    }
    const double gap = (width - used) / static_cast<double>(group.size() + 1);
    double cursor = lo + gap;
    for (const auto& [key, length] : group) {
      out.push_back(SyncInterval{key.first, key.second, cursor, length});
      cursor += length + gap;
    }
  }
  std::sort(out.begin(), out.end(), [](const SyncInterval& a, const SyncInterval& b) { return a.start < b.start; });
  validate_sync_intervals(hadamard_times, out);
  return out;
}

void validate_sync_intervals(const std::vector<double>& hadamard_times, const std::vector<SyncInterval>& intervals) {
  const int l = static_cast<int>(hadamard_times.size());
  for (const auto& w : intervals) {
    if (!(w.j > w.k) || w.k < 0 || w.j >= l) throw DomainError("sync interval has invalid pair");
    if (!(w.length > 0.0)) throw DomainError("sync interval has nonpositive length");
    const double tk = hadamard_times[static_cast<std::size_t>(w.k)];
    const double tj = hadamard_times[static_cast<std::size_t>(w.j)];
    if (!(w.start > tk && w.end() < tj)) {
      throw DomainError("sync interval (" + std::to_string(w.j) + "," + std::to_string(w.k) +
                        ") not strictly between its Hadamard instants");
    }
  }
  for (std::size_t a = 0; a < intervals.size(); ++a) {
    for (std::size_t b = a + 1; b < intervals.size(); ++b) {
      const auto& x = intervals[a];
      const auto& y = intervals[b];
      if (x.start < y.end() && y.start < x.end()) throw DomainError("sync intervals overlap");
    }
  }
}

StateVector simulate(StateVector state, const PulseSchedule& schedule) {
  if (state.num_qubits() != schedule.num_qubits()) {
    throw SizeError("simulate: state has " + std::to_string(state.num_qubits()) + " qubits, schedule " +
                    std::to_string(schedule.num_qubits()));
  }
  const auto energy = diagonal_table(schedule.background().hamiltonian_polynomial(), state.num_qubits());
  auto amps = state.mutable_amplitudes();
  const std::size_t n = amps.size();
  // Phases accumulate as angles and are folded into the amplitudes only when
  // a non-diagonal, non-permuting gate arrives.
  std::vector<double> angle(n, 0.0);
  auto flush = [&] {
    for (std::size_t a = 0; a < n; ++a) {
      if (angle[a] != 0.0) amps[a] *= std::polar(1.0, angle[a]);
      angle[a] = 0.0;
    }
  };
  auto advance = [&](double dt) {
    if (dt <= 0.0) return;
    for (std::size_t a = 0; a < n; ++a) angle[a] -= energy[a] * dt;
  };

  double now = 0.0;
  for (const auto& e : schedule.events()) {
    advance(e.time - now);
    now = e.time;
    const std::size_t mask = std::size_t{1} << e.qubit;
    switch (e.gate.kind()) {
      case OneQubitGate::Kind::Not:
        for (std::size_t a = 0; a < n; ++a) {
          if (!(a & mask)) {
            std::swap(amps[a], amps[a | mask]);
            std::swap(angle[a], angle[a | mask]);
          }
        }
        break;
      case OneQubitGate::Kind::PhaseShift:
        for (std::size_t a = 0; a < n; ++a) {
          if (a & mask) angle[a] += e.gate.theta();
        }
        break;
      default:
        flush();
        state = apply_gate(std::move(state), e.qubit, e.gate);
        amps = state.mutable_amplitudes();
        break;
    }
  }
  advance(schedule.total_time() - now);
  for (std::size_t a = 0; a < n; ++a) angle[a] -= schedule.global_phase();
  flush();
  return state;
}

std::vector<BasisPath> basis_phases(const PulseSchedule& schedule) {
  const int l = schedule.num_qubits();
  const auto energy = diagonal_table(schedule.background().hamiltonian_polynomial(), l);
  const std::size_t n = std::size_t{1} << l;
  std::vector<BasisPath> out(n);
  for (std::size_t a = 0; a < n; ++a) {
    std::uint64_t x = a;
    double phase = 0.0;
    double now = 0.0;
    for (const auto& e : schedule.events()) {
      phase += energy[x] * (e.time - now);
      now = e.time;
      switch (e.gate.kind()) {
        case OneQubitGate::Kind::Not:
          x ^= std::uint64_t{1} << e.qubit;
          break;
        case OneQubitGate::Kind::PhaseShift:
          if ((x >> e.qubit) & 1U) phase -= e.gate.theta();
          break;
        default:
          throw DomainError("basis_phases: schedule contains a non-permuting gate");
      }
    }
    phase += energy[x] * (schedule.total_time() - now) + schedule.global_phase();
    out[a] = BasisPath{x, phase};
  }
  return out;
}

std::string export_schedule(const PulseSchedule& schedule) {
  std::ostringstream os;
  for (const auto& e : schedule.events()) {
    os << fmt17(e.time) << ' ' << e.qubit << ' ' << gate_name(e.gate.kind());
    if (e.gate.kind() == OneQubitGate::Kind::PhaseShift) {
      os << ' ' << fmt17(e.gate.theta());
    } else if (e.gate.kind() == OneQubitGate::Kind::ArbitraryU) {
      for (const auto& z : e.gate.matrix()) os << ' ' << fmt17(z.real()) << ' ' << fmt17(z.imag());
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace fixq
