#include "fixq/qft_protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

#include "fixq/errors.hpp"

namespace fixq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSlack = 1.1;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool bit(std::uint64_t v, int j) { return (v >> j) & 1U; }

// pi / (2^r r), the canonical pair coefficient at distance r
double canonical_rate(int r) { return kPi / (std::exp2(r) * r); }

void check_size(int l) {
  if (l < 1 || l > kMaxQubits) throw SizeError("transform size " + std::to_string(l) + " out of range");
}

// Hadamards only, over the background, one time unit apart.
PulseSchedule hadamard_array(const CouplingModel& model, int l) {
  PulseSchedule s(model, static_cast<double>(l - 1));
  for (int j = 0; j < l; ++j) s.add(static_cast<double>(j), wire_of(l, j), OneQubitGate::hadamard());
  return s;
}

// NOT on every wire turns the forward array into the inverse one up to
// this output phase: e^{-2 pi i (N-1-a) b / N} = e^{2 pi i a b / N} e^{2 pi i b / N}.
PhasePolynomial inverse_output_phase(int l) {
  PhasePolynomial p(l);
  const double n = std::exp2(l);
  for (int j = 0; j < l; ++j) p.add_linear(wire_of(l, j), 2.0 * kPi * std::exp2(j) / n);
  return p;
}

PulseSchedule flip_all(const CouplingModel& model) {
  PulseSchedule s(model, 0.0);
  for (int q = 0; q < model.num_qubits(); ++q) s.add(0.0, q, OneQubitGate::not_gate());
  return s;
}

std::vector<CrossTarget> full_cross_targets(int l, Direction direction) {
  const double sign = direction == Direction::Forward ? 1.0 : -1.0;
  std::vector<CrossTarget> out;
  for (int j = 1; j < l; ++j) {
    for (int k = 0; k < j; ++k) out.push_back({j, k, sign * kPi / std::exp2(j - k)});
  }
  return out;
}

double window_length(const CouplingModel& model, int l, const CrossTarget& t) {
  const double r = model.pair_quadratic_rate(wire_of(l, t.j), wire_of(l, t.k));
  if (std::abs(r) < 1e-300) {
    throw DomainError("pair (" + std::to_string(t.j) + "," + std::to_string(t.k) + ") has zero coupling");
  }
  return std::abs(t.c) / std::abs(r);
}

// One qubit's NOT train, built segment by segment up to checkpoints.
struct PulseTrain {
  int qubit;
  double cursor = 0.0;
  int parity = 0;
  std::uint64_t segments = 0;
};

class TrainBuilder {
 public:
  TrainBuilder(PulseSchedule& schedule, double rate, std::uint64_t seed) : s_(schedule), rate_(rate), seed_(seed) {
    for (int q = 0; q < schedule.num_qubits(); ++q) trains_.push_back(PulseTrain{q});
  }

  PulseTrain& train(int q) { return trains_[static_cast<std::size_t>(q)]; }

  // Free pulses up to `until`; required < 0 leaves the parity unconstrained.
  void segment(int q, double until, int required) {
    auto& tr = train(q);
    const std::uint64_t stream = (static_cast<std::uint64_t>(q) << 32) | tr.segments++;
    auto rng = make_rng(seed_, stream);
    std::vector<double> times = sample_poisson_pulses(rate_, tr.cursor, until, rng);
    // Condition the draw on its parity by resampling.
    for (int attempt = 0; required >= 0 && (tr.parity + times.size()) % 2 != static_cast<std::size_t>(required) &&
                          attempt < 256;
         ++attempt) {
      times = sample_poisson_pulses(rate_, tr.cursor, until, rng);
    }
    if (required >= 0 && (tr.parity + times.size()) % 2 != static_cast<std::size_t>(required)) {
      // segment too short to hold a pulse of the needed parity
      if (!times.empty()) {
        times.pop_back();
      } else {
        times.push_back(0.5 * (tr.cursor + until));
      }
    }
    for (double t : times) s_.add(t, q, OneQubitGate::not_gate());
    tr.parity = static_cast<int>((tr.parity + times.size()) % 2);
    tr.cursor = until;
  }

  // Identical pulses on both qubits over (start, end).
  void shared(int u, int v, double start, double end, std::uint64_t window_index) {
    auto rng = make_rng(seed_, (std::uint64_t{1} << 62) | window_index);
    const auto times = sample_poisson_pulses(rate_, start, end, rng);
    for (double t : times) {
      s_.add(t, u, OneQubitGate::not_gate());
      s_.add(t, v, OneQubitGate::not_gate());
    }
    for (int q : {u, v}) {
      auto& tr = train(q);
      tr.parity = static_cast<int>((tr.parity + times.size()) % 2);
      tr.cursor = end;
    }
  }

 private:
  PulseSchedule& s_;
  double rate_;
  std::uint64_t seed_;
  std::vector<PulseTrain> trains_;
};

}  // namespace

const char* to_string(Direction d) { return d == Direction::Forward ? "forward" : "inverse"; }

const char* to_string(QftMode m) {
  switch (m) {
    case QftMode::UnitYukawa: return "unit-yukawa";
    case QftMode::GeneralDiagonal: return "general-diagonal";
    case QftMode::OracleCompensated: return "oracle";
  }
  return "?";
}

double QftPlan::duration() const {
  double t = span;
  for (const auto& st : stages) {
    if (const auto* s = std::get_if<PulseSchedule>(&st)) t += s->total_time();
  }
  return t;
}

StateVector ideal_qft(StateVector state, Direction direction) {
  const int l = state.num_qubits();
  const std::size_t n = state.dimension();
  auto a = state.mutable_amplitudes();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = reverse_bits(i, l);
    if (i < r) std::swap(a[i], a[r]);
  }
  const double sign = direction == Direction::Forward ? -1.0 : 1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * kPi / static_cast<double>(len);
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t m = 0; m < len / 2; ++m) {
        const Complex w = std::polar(1.0, ang * static_cast<double>(m));
        const Complex u = a[start + m];
        const Complex v = a[start + m + len / 2] * w;
        a[start + m] = u + v;
        a[start + m + len / 2] = u - v;
      }
    }
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& z : a) z *= scale;
  return state;
}

double phase_oracle(int l, std::uint64_t a, std::uint64_t b) {
  auto ap = [&](int j) { return bit(a, l - 1 - j) ? 1.0 : 0.0; };
  auto bb = [&](int j) { return bit(b, j) ? 1.0 : 0.0; };
  double phase = 0.0;
  for (int j = 0; j < l; ++j) {
    phase += kPi * ap(j) * bb(j);
    for (int k = 0; k < j; ++k) {
      const int r = j - k;
      const double denom = std::exp2(r) * r;
      phase += kPi * ap(j) * ap(k) * k / denom;
      phase += kPi * ap(j) * bb(k) * r / denom;
      phase += kPi * bb(j) * bb(k) * (l - j - 1) / denom;
    }
  }
  return phase;
}

std::pair<PhasePolynomial, PhasePolynomial> diagonal_summands(int l) {
  PhasePolynomial a(l), b(l);
  for (int j = 1; j < l; ++j) {
    for (int k = 0; k < j; ++k) {
      const double rate = canonical_rate(j - k);
      a.add_quadratic(j, k, rate * k);
      b.add_quadratic(j, k, rate * (l - j - 1));
    }
  }
  return {a, b};
}

PhasePolynomial to_register_order(const PhasePolynomial& poly) {
  const int l = poly.num_bits();
  PhasePolynomial out(l);
  out.add_constant(poly.constant());
  for (int j = 0; j < l; ++j) out.add_linear(wire_of(l, j), poly.linear(j));
  for (const auto& [key, c] : poly.quadratic()) out.add_quadratic(wire_of(l, key.first), wire_of(l, key.second), c);
  return out;
}

PulseSchedule quadratic_phase_gate(const PhasePolynomial& targets, const CouplingModel& model, double rate,
                                   std::uint64_t seed) {
  if (targets.num_bits() > model.num_qubits()) throw SizeError("phase targets exceed register size");
  PulseSchedule out(model, 0.0);
  std::uint64_t run = 0;
  for (const auto& [key, c] : targets.quadratic()) {
    if (c == 0.0) continue;
    const std::uint64_t run_seed = make_rng(seed, run++)();
    out.append(signed_pair_phase_schedule(model, key.first, key.second, c, rate, run_seed));
  }
  PhasePolynomial affine(model.num_qubits());
  affine += targets.affine_part();
  out.add_linear_phase(out.total_time(), affine);
  return out;
}

std::pair<std::vector<double>, std::vector<SyncInterval>> layout_cross_targets(
    const CouplingModel& model, const std::vector<CrossTarget>& targets) {
  const int l = model.num_qubits();
  // Uniform spacing puts pair (j,k) in half-gap j+k-1.
  std::vector<double> half_load(static_cast<std::size_t>(std::max(2 * (l - 1), 1)), 0.0);
  std::map<std::pair<int, int>, double> lengths;
  for (const auto& t : targets) {
    if (!(t.j > t.k) || t.k < 0 || t.j >= l) throw DomainError("cross target has invalid pair");
    if (t.c == 0.0) continue;
    const double len = window_length(model, l, t);
    lengths[{t.j, t.k}] += len;
    half_load[static_cast<std::size_t>(t.j + t.k - 1)] += len;
  }
  const double widest = *std::max_element(half_load.begin(), half_load.end());
  const double spacing = widest > 0.0 ? 2.0 * kSlack * widest : 1.0;
  std::vector<double> times;
  for (int j = 0; j < l; ++j) times.push_back(spacing * j);
  return {times, build_sync_intervals(times, lengths)};
}

namespace {

struct CrossProgram {
  std::vector<Stage> stages;
  PhasePolynomial pre;   // installed before the first Hadamard
  PhasePolynomial post;  // installed after the last one
};

CrossProgram cross_phase_program(const CouplingModel& model, const std::vector<double>& hadamard_times,
                                 const std::vector<CrossTarget>& targets, const std::vector<SyncInterval>& intervals,
                                 double rate, std::uint64_t seed, Realization realization) {
  const int l = model.num_qubits();
  if (static_cast<int>(hadamard_times.size()) != l) throw SizeError("need one Hadamard instant per qubit");
  validate_sync_intervals(hadamard_times, intervals);

  // Pair each nonzero target with its window.
  struct Window {
    SyncInterval span;
    CrossTarget target;
  };
  std::vector<Window> windows;
  for (const auto& t : targets) {
    if (t.c == 0.0) continue;
    auto it = std::find_if(intervals.begin(), intervals.end(),
                           [&](const SyncInterval& w) { return w.j == t.j && w.k == t.k; });
    if (it == intervals.end()) {
      throw DomainError("no sync interval for target (" + std::to_string(t.j) + "," + std::to_string(t.k) + ")");
    }
    const double len = window_length(model, l, t);
    if (std::abs(it->length - len) > 1e-9 * std::max(1.0, len)) {
      throw DomainError("sync interval length " + fmt17(it->length) + " does not produce target phase (needs " +
                        fmt17(len) + ")");
    }
    windows.push_back({*it, t});
  }
  std::sort(windows.begin(), windows.end(), [](const Window& a, const Window& b) { return a.span.start < b.span.start; });

  const double total = hadamard_times.back();
  if (hadamard_times.front() < 0.0) throw DomainError("hadamard instants must be >= 0");

  if (realization == Realization::Ideal) {
    // Time-ordered Hadamards and exact cross phases.
    std::vector<std::pair<double, Stage>> timed;
    for (int j = 0; j < l; ++j) {
      PulseSchedule h(model, 0.0);
      h.add(0.0, wire_of(l, j), OneQubitGate::hadamard());
      timed.emplace_back(hadamard_times[static_cast<std::size_t>(j)], std::move(h));
    }
    for (const auto& w : windows) {
      PhasePolynomial p(l);
      p.add_quadratic(wire_of(l, w.target.j), wire_of(l, w.target.k), w.target.c);
      timed.emplace_back(w.span.start, std::move(p));
    }
    std::stable_sort(timed.begin(), timed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    CrossProgram out{{}, PhasePolynomial(l), PhasePolynomial(l)};
    for (auto& [t, st] : timed) out.stages.push_back(std::move(st));
    return out;
  }

  for (const auto& w : windows) {
    if (!(rate > 0.0) || rate * w.span.length < kMinPulsesPerWindow) {
      throw DomainError("sync window (" + std::to_string(w.span.j) + "," + std::to_string(w.span.k) +
                        ") too short for the pulse rate: rate * length = " + fmt17(rate * w.span.length));
    }
  }

  // Expected phase: outside its own window every pair sees two independently
  // flipped bits and contributes P(1/2, 1/2); inside, the bits flip together.
  PhasePolynomial pre(l), post(l);
  double constant = 0.0;
  for (int p = 1; p < l; ++p) {
    for (int q = 0; q < p; ++q) {
      const PhasePolynomial pair = model.pair_polynomial(p, q);
      constant += pair.substituted(p, 0.5).substituted(q, 0.5).constant() * total;
    }
  }
  for (const auto& w : windows) {
    const int u = wire_of(l, w.target.j);  // still holds a'_j
    const int v = wire_of(l, w.target.k);  // already holds b_k
    const PhasePolynomial full = model.pair_polynomial(u, v);
    // same polynomial on two bits: bit 1 = u, bit 0 = v
    PhasePolynomial local(2);
    local.add_constant(full.constant());
    local.add_linear(1, full.linear(u));
    local.add_linear(0, full.linear(v));
    local.add_quadratic(1, 0, full.quadratic(u, v));
    const bool anti = (w.target.c > 0) != (model.pair_quadratic_rate(u, v) > 0);
    if (anti) local = local.complemented(0);
    const PhasePolynomial avg = (local + local.complemented(1).complemented(0)) * (0.5 * w.span.length);
    // the independent-flip share already counted above is replaced here
    const PhasePolynomial outside = local.substituted(1, 0.5).substituted(0, 0.5);
    constant += avg.constant() - outside.constant() * w.span.length;
    pre.add_linear(u, avg.linear(1));
    post.add_linear(v, avg.linear(0));
  }

  PulseSchedule s(model, total);
  s.add_linear_phase(0.0, -pre);
  s.add_global_phase(-constant);

  TrainBuilder trains(s, rate, seed);
  struct Checkpoint {
    double time;
    int hadamard;  // -1 for window starts
    std::size_t window;
  };
  std::vector<Checkpoint> checkpoints;
  for (int j = 0; j < l; ++j) checkpoints.push_back({hadamard_times[static_cast<std::size_t>(j)], j, 0});
  for (std::size_t w = 0; w < windows.size(); ++w) checkpoints.push_back({windows[w].span.start, -1, w});
  std::stable_sort(checkpoints.begin(), checkpoints.end(),
                   [](const Checkpoint& a, const Checkpoint& b) { return a.time < b.time; });

  for (const auto& cp : checkpoints) {
    if (cp.hadamard >= 0) {
      const int u = wire_of(l, cp.hadamard);
      trains.segment(u, cp.time, 0);  // the Hadamard must see the true bit
      s.add(cp.time, u, OneQubitGate::hadamard());
      continue;
    }
    const auto& w = windows[cp.window];
    const int u = wire_of(l, w.target.j);
    const int v = wire_of(l, w.target.k);
    const bool anti = (w.target.c > 0) != (model.pair_quadratic_rate(u, v) > 0);
    trains.segment(v, cp.time, -1);
    trains.segment(u, cp.time, trains.train(v).parity ^ (anti ? 1 : 0));
    trains.shared(u, v, w.span.start, w.span.end(), cp.window);
  }
  for (int q = 0; q < l; ++q) trains.segment(q, total, 0);

  s.add_linear_phase(total, -post);
  CrossProgram out{{}, -pre, -post};
  out.stages.emplace_back(std::move(s));
  return out;
}

}  // namespace

std::vector<Stage> cross_phase_gate(const CouplingModel& model, const std::vector<double>& hadamard_times,
                                    const std::vector<CrossTarget>& targets,
                                    const std::vector<SyncInterval>& intervals, double rate, std::uint64_t seed,
                                    Realization realization) {
  return cross_phase_program(model, hadamard_times, targets, intervals, rate, seed, realization).stages;
}

QftPlan build_qft_plan(int l, Direction direction, QftMode mode, const CouplingModel& model, double rate,
                       std::uint64_t seed) {
  check_size(l);
  if (model.num_qubits() != l) throw SizeError("coupling model size differs from transform size");
  if ((mode == QftMode::UnitYukawa || mode == QftMode::OracleCompensated) && !model.is_canonical()) {
    throw DomainError(std::string("mode ") + to_string(mode) + " requires the canonical pi 2^-r / r coupling");
  }

  QftPlan plan;
  plan.l = l;
  plan.direction = direction;
  plan.mode = mode;
  const auto [a_sum, b_sum] = diagonal_summands(l);
  const bool inverse = direction == Direction::Inverse;

  switch (mode) {
    case QftMode::OracleCompensated: {
      plan.pre_compensation = -to_register_order(a_sum);
      plan.post_compensation = -to_register_order(b_sum);
      if (inverse) plan.post_compensation += inverse_output_phase(l);
      for (int j = 0; j < l; ++j) plan.hadamard_times.push_back(j);
      if (inverse) plan.stages.emplace_back(flip_all(model));
      plan.stages.emplace_back(plan.pre_compensation);
      plan.stages.emplace_back(hadamard_array(model, l));
      plan.stages.emplace_back(plan.post_compensation);
      break;
    }
    case QftMode::UnitYukawa: {
      plan.pre_compensation = -to_register_order(a_sum);
      plan.post_compensation = -to_register_order(b_sum);
      if (inverse) plan.post_compensation += inverse_output_phase(l);
      PulseSchedule s = inverse ? flip_all(model) : PulseSchedule(model, 0.0);
      s.append(quadratic_phase_gate(plan.pre_compensation, model, rate, make_rng(seed, 1)()));
      const double array_start = s.total_time();
      for (int j = 0; j < l; ++j) plan.hadamard_times.push_back(array_start + j);
      s.append(hadamard_array(model, l));
      s.append(quadratic_phase_gate(plan.post_compensation, model, rate, make_rng(seed, 2)()));
      plan.stages.emplace_back(std::move(s));
      break;
    }
    case QftMode::GeneralDiagonal: {
      const auto targets = full_cross_targets(l, direction);
      auto [times, intervals] = layout_cross_targets(model, targets);
      plan.hadamard_times = times;
      plan.sync_intervals = intervals;
      plan.cross_targets = targets;
      auto program = cross_phase_program(model, times, targets, intervals, rate, seed, Realization::Stochastic);
      plan.stages = std::move(program.stages);
      plan.pre_compensation = std::move(program.pre);
      plan.post_compensation = std::move(program.post);
      break;
    }
  }
  return plan;
}

QftPlan approximate_qft_plan(int l, Direction direction, double threshold) {
  check_size(l);
  if (!(threshold >= 0.0)) throw DomainError("threshold must be >= 0");
  const CouplingModel model = CouplingModel::canonical(l);
  const auto all = full_cross_targets(l, direction);
  std::vector<CrossTarget> kept;
  for (const auto& t : all) {
    if (std::abs(t.c) >= threshold) kept.push_back(t);
  }
  QftPlan plan;
  plan.l = l;
  plan.direction = direction;
  plan.mode = QftMode::OracleCompensated;
  plan.truncated = kept.size() < all.size();
  plan.threshold = threshold;
  plan.cross_targets = kept;
  plan.pre_compensation = PhasePolynomial(l);
  plan.post_compensation = PhasePolynomial(l);
  auto [times, intervals] = layout_cross_targets(model, kept);
  plan.hadamard_times = times;
  plan.sync_intervals = intervals;
  plan.stages = cross_phase_program(model, times, kept, intervals, 0.0, 0, Realization::Ideal).stages;
  plan.span = times.back();
  return plan;
}

StateVector apply_plan(StateVector state, const QftPlan& plan) {
  if (state.num_qubits() != plan.l) throw SizeError("plan size differs from state size");
  for (const auto& st : plan.stages) {
    if (const auto* s = std::get_if<PulseSchedule>(&st)) {
      state = simulate(std::move(state), *s);
    } else {
      state = evolve_diagonal(std::move(state), std::get<PhasePolynomial>(st), 1.0);
    }
  }
  return state;
}

StateVector run_plan_natural_order(const StateVector& input, const QftPlan& plan) {
  return bit_reversed(apply_plan(input, plan));
}

FidelityStats basis_fidelity(const QftPlan& plan) {
  const std::size_t n = std::size_t{1} << plan.l;
  FidelityStats stats{0.0, 1.0};
  for (std::size_t a = 0; a < n; ++a) {
    const StateVector in = StateVector::basis(plan.l, a);
    const double f = fidelity(run_plan_natural_order(in, plan), ideal_qft(in, plan.direction));
    stats.mean += f;
    stats.min = std::min(stats.min, f);
  }
  stats.mean /= static_cast<double>(n);
  return stats;
}

std::vector<int> targets_per_qubit(const QftPlan& plan) {
  std::vector<int> counts(static_cast<std::size_t>(plan.l), 0);
  for (const auto& t : plan.cross_targets) {
    if (t.c == 0.0) continue;
    ++counts[static_cast<std::size_t>(t.j)];
    ++counts[static_cast<std::size_t>(t.k)];
  }
  return counts;
}

std::string plan_summary(const QftPlan& plan) {
  std::ostringstream os;
  os << "mode " << to_string(plan.mode) << '\n';
  os << "direction " << to_string(plan.direction) << '\n';
  os << "qubits " << plan.l << '\n';
  if (plan.truncated) os << "threshold " << fmt17(plan.threshold) << '\n';
  os << "hadamard_times";
  for (double t : plan.hadamard_times) os << ' ' << fmt17(t);
  os << '\n';
  for (const auto& w : plan.sync_intervals) {
    os << "sync " << w.j << ' ' << w.k << ' ' << fmt17(w.start) << ' ' << fmt17(w.length) << '\n';
  }
  auto dump = [&os](const char* name, const PhasePolynomial& p) {
    os << name << " constant " << fmt17(p.constant()) << '\n';
    for (int q = 0; q < p.num_bits(); ++q) {
      if (p.linear(q) != 0.0) os << name << " linear " << q << ' ' << fmt17(p.linear(q)) << '\n';
    }
    for (const auto& [key, c] : p.quadratic()) {
      if (c != 0.0) os << name << " quadratic " << key.first << ' ' << key.second << ' ' << fmt17(c) << '\n';
    }
  };
  dump("pre", plan.pre_compensation);
  dump("post", plan.post_compensation);
  os << "duration " << fmt17(plan.duration()) << '\n';
  return os.str();
}

}  // namespace fixq
