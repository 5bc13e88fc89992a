#include "fixq/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "fixq/errors.hpp"
#include "fixq/schedule.hpp"

namespace fixq {

namespace {

std::string fmt17(double v) {
  if (!std::isfinite(v)) throw Error("non-finite value in numeric output");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key, "invalid: " + key + " (expected a number, got '" + v + "')");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError(key, "invalid: " + key + " (expected an integer, got '" + v + "')");
  }
}

Experiment parse_experiment(const std::string& name) {
  if (name == "qft-fidelity") return Experiment::QftFidelity;
  if (name == "decouple-demo") return Experiment::DecoupleDemo;
  if (name == "phase-gate") return Experiment::PhaseGate;
  if (name == "schrodinger") return Experiment::Schrodinger;
  if (name == "trotter-study") return Experiment::TrotterStudy;
  throw ConfigError("experiment", "invalid: experiment '" + name + "'");
}

// "j:k:c,j:k:c"
std::vector<CrossTarget> parse_targets(const std::string& v) {
  std::vector<CrossTarget> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::stringstream is(trim(item));
    std::string j, k, c;
    if (!std::getline(is, j, ':') || !std::getline(is, k, ':') || !std::getline(is, c)) {
      throw ConfigError("targets", "invalid: targets (expected j:k:c entries)");
    }
    out.push_back({static_cast<int>(parse_int("targets", j)), static_cast<int>(parse_int("targets", k)),
                   parse_double("targets", c)});
  }
  return out;
}

// Runs f(seed) for each seed on worker threads; results in seed order.
template <class F>
auto sweep(const std::vector<std::uint64_t>& seeds, F f) {
  using R = decltype(f(std::uint64_t{}));
  std::vector<R> results(seeds.size());
  const std::size_t workers = std::max(1U, std::thread::hardware_concurrency());
  for (std::size_t begin = 0; begin < seeds.size(); begin += workers) {
    std::vector<std::future<R>> batch;
    const std::size_t end = std::min(seeds.size(), begin + workers);
    for (std::size_t i = begin; i < end; ++i) batch.push_back(std::async(std::launch::async, f, seeds[i]));
    for (std::size_t i = begin; i < end; ++i) results[i] = batch[i - begin].get();
  }
  return results;
}

class TableSink {
 public:
  TableSink(const RunConfig& config, std::ostream& out) : config_(config), out_(out) {}

  void write(const std::string& name, const std::string& text) {
    if (config_.output.empty()) {
      out_ << text;
      return;
    }
    std::filesystem::create_directories(config_.output);
    const auto path = std::filesystem::path(config_.output) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << text;
    out_ << "wrote " << path.string() << '\n';
  }

 private:
  const RunConfig& config_;
  std::ostream& out_;
};

void print_seeds(const std::vector<std::uint64_t>& seeds, std::ostream& out) {
  out << "# seeds";
  for (auto s : seeds) out << ' ' << s;
  out << '\n';
}

void run_qft_fidelity(const RunConfig& c, std::ostream& out, TableSink& sink) {
  const CouplingModel model = c.mode == QftMode::GeneralDiagonal ? c.coupling() : CouplingModel::canonical(c.l);
  // the oracle mode draws no random numbers; one row is enough
  const auto seeds = c.mode == QftMode::OracleCompensated ? std::vector<std::uint64_t>{c.seed} : c.seed_list();
  print_seeds(seeds, out);
  const auto stats = sweep(seeds, [&](std::uint64_t seed) {
    return basis_fidelity(build_qft_plan(c.l, c.direction, c.mode, model, c.lambda, seed));
  });
  std::ostringstream t;
  t << "l,mode,lambda,seed,mean_fidelity,min_fidelity\n";
  double mean = 0.0;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    t << c.l << ',' << to_string(c.mode) << ',' << fmt17(c.lambda) << ',' << seeds[i] << ','
      << fmt17(stats[i].mean) << ',' << fmt17(stats[i].min) << '\n';
    mean += stats[i].mean;
  }
  sink.write("qft_fidelity.csv", t.str());
  out << "mean_fidelity " << fmt17(mean / static_cast<double>(seeds.size())) << '\n';
}

void run_decouple_demo(const RunConfig& c, std::ostream& out, TableSink& sink) {
  const CouplingModel model = c.coupling();
  const int j = c.separated_j >= 0 ? c.separated_j : c.l - 1;
  const int k = c.separated_k >= 0 ? c.separated_k : std::max(0, c.l - 2);
  print_seeds(c.seed_list(), out);
  const auto runs = sweep(c.seed_list(), [&](std::uint64_t seed) {
    return basis_phases(build_decoupling_schedule(model, j, k, c.lambda, c.duration, seed));
  });
  const PhasePolynomial predicted =
      (-compensation_for_decoupling(model, j, k, c.duration)) + model.pair_polynomial(j, k) * c.duration;
  std::ostringstream t;
  t << "basis,measured_phase,predicted_phase,relative_error\n";
  double worst = 0.0;
  for (std::size_t a = 0; a < (std::size_t{1} << c.l); ++a) {
    double m = 0.0;
    for (const auto& r : runs) m += r[a].phase;
    m /= static_cast<double>(runs.size());
    const double p = predicted.evaluate(a);
    const double rel = p != 0.0 ? std::abs(m - p) / std::abs(p) : std::abs(m);
    worst = std::max(worst, rel);
    t << a << ',' << fmt17(m) << ',' << fmt17(p) << ',' << fmt17(rel) << '\n';
  }
  sink.write("decouple_demo.csv", t.str());
  out << "max_relative_error " << fmt17(worst) << '\n';
}

void run_phase_gate(const RunConfig& c, std::ostream& out, TableSink& sink) {
  const CouplingModel model = c.coupling();
  PhasePolynomial targets(c.l);
  auto list = c.targets;
  if (list.empty()) list.push_back({std::min(1, c.l - 1), 0, std::numbers::pi / 4});
  for (const auto& t : list) targets.add_quadratic(t.j, t.k, t.c);
  print_seeds(c.seed_list(), out);
  const auto runs = sweep(c.seed_list(), [&](std::uint64_t seed) {
    return basis_phases(quadratic_phase_gate(targets, model, c.lambda, seed));
  });
  std::ostringstream t;
  t << "j,k,target,achieved,abs_error\n";
  double worst = 0.0;
  for (const auto& [key, target] : targets.quadratic()) {
    const std::size_t bj = std::size_t{1} << key.first;
    const std::size_t bk = std::size_t{1} << key.second;
    double achieved = 0.0;
    for (const auto& r : runs) achieved += r[bj | bk].phase - r[bj].phase - r[bk].phase + r[0].phase;
    achieved /= static_cast<double>(runs.size());
    worst = std::max(worst, std::abs(achieved - target));
    t << key.first << ',' << key.second << ',' << fmt17(target) << ',' << fmt17(achieved) << ','
      << fmt17(std::abs(achieved - target)) << '\n';
  }
  sink.write("phase_gate.csv", t.str());
  out << "max_abs_error " << fmt17(worst) << '\n';
}

std::string observables_row(double t, const WaveGrid& w, const Potential& v, double m) {
  const Observables o = observables(w);
  std::ostringstream os;
  os << fmt17(t) << ',' << fmt17(o.norm) << ',' << fmt17(o.mean_q) << ',' << fmt17(o.mean_q2) << ','
     << fmt17(o.mean_p) << ',' << fmt17(o.mean_p2) << ',' << fmt17(o.width()) << ',' << fmt17(energy(w, v, m))
     << '\n';
  return os.str();
}

void run_schrodinger(const RunConfig& c, std::ostream& out, TableSink& sink) {
  out << "# seeds none\n";
  const Grid grid(c.l);
  const Potential v = c.make_potential();
  const auto backend = qft_backend_select(c.backend, c.l);
  const TrotterConfig whole{c.dt, c.t, c.convention};
  const std::size_t steps = whole.steps();
  const std::size_t every = c.every > 0 ? static_cast<std::size_t>(c.every) : std::max<std::size_t>(steps, 1);

  WaveGrid w = make_gaussian(grid, c.q0, c.p0, c.sigma);
  std::ostringstream start_csv;
  write_wavefunction_csv(start_csv, w, 0.0);
  std::ostringstream obs;
  obs << "t,norm,mean_q,mean_q2,mean_p,mean_p2,width,energy\n" << observables_row(0.0, w, v, c.mass);
  for (std::size_t i = 1; i <= steps; ++i) {
    w = trotter_step(std::move(w), v, c.mass, c.dt, c.convention, *backend);
    if (i % every == 0 || i == steps) obs << observables_row(static_cast<double>(i) * c.dt, w, v, c.mass);
  }
  std::ostringstream final_csv;
  write_wavefunction_csv(final_csv, w, c.t);
  sink.write("wavefunction_t0.csv", start_csv.str());
  sink.write("wavefunction_final.csv", final_csv.str());
  sink.write("observables.csv", obs.str());

  const Observables o = observables(w);
  out << "final_width " << fmt17(o.width()) << '\n';
  if (v.kind == Potential::Kind::Free) {
    const double tau = c.t / (2.0 * c.mass * c.sigma * c.sigma);
    const double expected = c.sigma * std::sqrt(1.0 + tau * tau);
    out << "analytic_width " << fmt17(expected) << '\n';
    out << "width_relative_error " << fmt17(std::abs(o.width() - expected) / expected) << '\n';
  }
}

void run_trotter_study(const RunConfig& c, std::ostream& out, TableSink& sink) {
  if (c.make_potential().kind != Potential::Kind::Free) {
    throw ConfigError("potential", "invalid: potential (trotter-study compares against the free packet)");
  }
  out << "# seeds none\n";
  const Grid grid(c.l);
  const auto backend = qft_backend_select(c.backend, c.l);
  const WaveGrid exact = analytic_free_gaussian(c.t, c.q0, c.p0, c.sigma, c.mass, grid);
  std::ostringstream t;
  t << "delta_t,l2_error\n";
  double dt = c.dt;
  double previous = 0.0;
  out << "error_ratios";
  for (int h = 0; h <= c.halvings; ++h, dt /= 2.0) {
    const WaveGrid w =
        evolve(make_gaussian(grid, c.q0, c.p0, c.sigma), c.make_potential(), c.mass, {dt, c.t, c.convention}, *backend);
    const double err = l2_error(w, exact);
    t << fmt17(dt) << ',' << fmt17(err) << '\n';
    if (h > 0) out << ' ' << fmt17(previous / err);
    previous = err;
  }
  out << '\n';
  sink.write("trotter_study.csv", t.str());
}

}  // namespace

std::vector<std::uint64_t> RunConfig::seed_list() const {
  std::vector<std::uint64_t> out;
  for (int i = 0; i < seeds; ++i) out.push_back(seed + static_cast<std::uint64_t>(i));
  return out;
}

CouplingModel RunConfig::coupling() const {
  DecayLaw law;
  if (decay == "yukawa2") {
    law = DecayLaw::yukawa_base2(rho0);
  } else if (decay == "yukawa") {
    law = DecayLaw::yukawa_natural(rho0, screening);
  } else if (decay == "power") {
    law = DecayLaw::power_law(rho0, alpha);
  } else {
    throw ConfigError("decay", "invalid: decay '" + decay + "'");
  }
  if (form == "A") return CouplingModel(l, PairForm::form_a(rho), law);
  if (form == "B") {
    try {
      return CouplingModel(l, PairForm::form_b(rho1, rho2, rho3, rho4), law);
    } catch (const DomainError& e) {
      throw ConfigError("rho1", std::string("invalid: rho1 (") + e.what() + ")");
    }
  }
  throw ConfigError("form", "invalid: form '" + form + "'");
}

Potential RunConfig::make_potential() const {
  if (potential == "free") return Potential::free();
  if (potential == "linear") return Potential::linear(force);
  if (potential == "harmonic") return Potential::quadratic(mass, omega);
  throw ConfigError("potential", "invalid: potential '" + potential + "'");
}

const std::vector<std::string>& RunConfig::known_keys() {
  static const std::vector<std::string> keys = {
      "l",      "mode",   "direction", "lambda", "seed",       "seeds",    "j",     "k",       "duration",
      "targets", "form",  "rho",       "rho1",   "rho2",       "rho3",     "rho4",  "decay",   "rho0",
      "b",      "alpha",  "backend",   "potential", "m",       "omega",    "f",     "sigma",   "q0",
      "p0",     "dt",     "t",         "convention", "halvings", "every",  "output"};
  return keys;
}

RunConfig RunConfig::from_map(const std::string& experiment, const std::map<std::string, std::string>& values) {
  const auto& keys = known_keys();
  for (const auto& [key, v] : values) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(key, "unknown: " + key);
  }
  RunConfig c;
  c.experiment = parse_experiment(experiment);
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = values.find(key);
    if (it == values.end()) return std::nullopt;
    return it->second;
  };
  auto num = [&](const std::string& key, double& dst) {
    if (auto v = get(key)) dst = parse_double(key, *v);
  };
  auto integer = [&](const std::string& key, auto& dst) {
    if (auto v = get(key)) dst = static_cast<std::remove_reference_t<decltype(dst)>>(parse_int(key, *v));
  };

  const auto l = get("l");
  if (!l) throw ConfigError("l", "missing: l");
  c.l = static_cast<int>(parse_int("l", *l));
  if (c.l < 1 || c.l > kMaxQubits) throw ConfigError("l", "invalid: l (must be 1.." + std::to_string(kMaxQubits) + ")");

  if (auto v = get("mode")) {
    if (*v == "oracle") c.mode = QftMode::OracleCompensated;
    else if (*v == "unit-yukawa") c.mode = QftMode::UnitYukawa;
    else if (*v == "general-diagonal") c.mode = QftMode::GeneralDiagonal;
    else throw ConfigError("mode", "invalid: mode '" + *v + "'");
  }
  if (auto v = get("direction")) {
    if (*v == "forward") c.direction = Direction::Forward;
    else if (*v == "inverse") c.direction = Direction::Inverse;
    else throw ConfigError("direction", "invalid: direction '" + *v + "'");
  }
  if (auto v = get("backend")) {
    if (*v == "reference") c.backend = QftBackendMode::Reference;
    else if (*v == "pulse-oracle") c.backend = QftBackendMode::PulseOracle;
    else throw ConfigError("backend", "invalid: backend '" + *v + "'");
  }
  if (auto v = get("convention")) {
    if (*v == "centered") c.convention = KineticConvention::Centered;
    else if (*v == "literal") c.convention = KineticConvention::Literal;
    else throw ConfigError("convention", "invalid: convention '" + *v + "'");
  }
  num("lambda", c.lambda);
  integer("seed", c.seed);
  integer("seeds", c.seeds);
  integer("j", c.separated_j);
  integer("k", c.separated_k);
  num("duration", c.duration);
  if (auto v = get("targets")) c.targets = parse_targets(*v);
  if (auto v = get("form")) c.form = *v;
  num("rho", c.rho);
  num("rho1", c.rho1);
  num("rho2", c.rho2);
  num("rho3", c.rho3);
  num("rho4", c.rho4);
  if (auto v = get("decay")) c.decay = *v;
  num("rho0", c.rho0);
  num("b", c.screening);
  num("alpha", c.alpha);
  if (auto v = get("potential")) c.potential = *v;
  num("m", c.mass);
  num("omega", c.omega);
  num("f", c.force);
  num("sigma", c.sigma);
  num("q0", c.q0);
  num("p0", c.p0);
  num("dt", c.dt);
  num("t", c.t);
  integer("halvings", c.halvings);
  integer("every", c.every);
  if (auto v = get("output")) c.output = *v;

  if (!(c.lambda > 0)) throw ConfigError("lambda", "invalid: lambda (must be positive)");
  if (c.seeds < 1) throw ConfigError("seeds", "invalid: seeds (must be >= 1)");
  if (!(c.mass > 0)) throw ConfigError("m", "invalid: m (must be positive)");
  if (!(c.dt > 0)) throw ConfigError("dt", "invalid: dt (must be positive)");
  if (c.halvings < 0) throw ConfigError("halvings", "invalid: halvings (must be >= 0)");
  // surface model / potential problems as config errors now
  if (c.experiment != Experiment::Schrodinger && c.experiment != Experiment::TrotterStudy) c.coupling();
  else c.make_potential();
  return c;
}

std::map<std::string, std::string> read_config_text(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number), "invalid: line " + std::to_string(number) + " (expected key = value)");
    }
    const std::string key = trim(line.substr(0, eq));
    const auto& keys = RunConfig::known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(key, "unknown: " + key);
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

void run(const RunConfig& config, std::ostream& out) {
  TableSink sink(config, out);
  switch (config.experiment) {
    case Experiment::QftFidelity: run_qft_fidelity(config, out, sink); break;
    case Experiment::DecoupleDemo: run_decouple_demo(config, out, sink); break;
    case Experiment::PhaseGate: run_phase_gate(config, out, sink); break;
    case Experiment::Schrodinger: run_schrodinger(config, out, sink); break;
    case Experiment::TrotterStudy: run_trotter_study(config, out, sink); break;
  }
}

}  // namespace fixq
