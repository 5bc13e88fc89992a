#include "fixq/schrodinger.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "fixq/errors.hpp"

namespace fixq {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

StateVector normalized(int l, std::vector<Complex> amps) {
  double n = 0.0;
  for (const auto& z : amps) n += std::norm(z);
  const double s = 1.0 / std::sqrt(n);
  for (auto& z : amps) z *= s;
  return StateVector(l, std::move(amps));
}

void check_packet(const Grid& grid, double q0, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("packet width sigma must be positive");
  if (!(std::abs(q0) + 4.0 * sigma < grid.half_width)) {
    throw DomainError("packet clipped by the box: |q0| + 4 sigma >= A = " + fmt17(grid.half_width));
  }
}

class ReferenceBackend final : public FourierBackend {
 public:
  StateVector forward(StateVector s) const override { return ideal_qft(std::move(s), Direction::Forward); }
  StateVector inverse(StateVector s) const override { return ideal_qft(std::move(s), Direction::Inverse); }
};

class PulseOracleBackend final : public FourierBackend {
 public:
  explicit PulseOracleBackend(int l)
      : forward_(build_qft_plan(l, Direction::Forward, QftMode::OracleCompensated, CouplingModel::canonical(l), 0, 0)),
        inverse_(build_qft_plan(l, Direction::Inverse, QftMode::OracleCompensated, CouplingModel::canonical(l), 0, 0)) {}
  StateVector forward(StateVector s) const override { return run_plan_natural_order(s, forward_); }
  StateVector inverse(StateVector s) const override { return run_plan_natural_order(s, inverse_); }

 private:
  QftPlan forward_;
  QftPlan inverse_;
};

}  // namespace

Grid::Grid(int num_qubits) : l(num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) throw SizeError("grid size out of range");
  n = std::size_t{1} << num_qubits;
  dq = std::sqrt(2.0 * kPi / static_cast<double>(n));
  dp = dq;
  half_width = std::sqrt(kPi * static_cast<double>(n) / 2.0);
}

double Grid::p_centered(std::size_t b) const {
  const auto signed_b = b >= n / 2 ? static_cast<double>(b) - static_cast<double>(n) : static_cast<double>(b);
  return signed_b * dp;
}

Potential Potential::quadratic(double m, double omega) {
  if (!(m > 0.0)) throw DomainError("mass must be positive");
  return {Kind::Quadratic, 0.0, m * omega * omega};
}

double Potential::operator()(double q) const {
  switch (kind) {
    case Kind::Free: return 0.0;
    case Kind::Linear: return -force * q;
    case Kind::Quadratic: return 0.5 * stiffness * q * q;
  }
  return 0.0;
}

std::size_t TrotterConfig::steps() const {
  if (!(delta_t > 0.0)) throw DomainError("trotter delta_t must be positive");
  if (!(total_time >= 0.0)) throw DomainError("trotter total_time must be >= 0");
  const double ratio = total_time / delta_t;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw DomainError("total_time / delta_t = " + fmt17(ratio) + " is not an integer; adjust delta_t");
  }
  return static_cast<std::size_t>(rounded);
}

std::shared_ptr<const FourierBackend> qft_backend_select(QftBackendMode mode, int l) {
  if (mode == QftBackendMode::Reference) return std::make_shared<ReferenceBackend>();
  if (l > kPulseOracleMaxQubits) {
    throw SizeError("pulse-oracle transform limited to " + std::to_string(kPulseOracleMaxQubits) + " qubits");
  }
  return std::make_shared<PulseOracleBackend>(l);
}

WaveGrid make_gaussian(const Grid& grid, double q0, double p0, double sigma) {
  check_packet(grid, q0, sigma);
  std::vector<Complex> amps(grid.n);
  for (std::size_t a = 0; a < grid.n; ++a) {
    const double q = grid.q(a);
    const double x = (q - q0) / sigma;
    amps[a] = std::polar(std::exp(-0.25 * x * x), p0 * q);
  }
  return WaveGrid{grid, normalized(grid.l, std::move(amps))};
}

WaveGrid analytic_free_gaussian(double t, double q0, double p0, double sigma, double m, const Grid& grid) {
  check_packet(grid, q0, sigma);
  if (!(m > 0.0)) throw DomainError("mass must be positive");
  // psi(q,t) = (1 + i tau)^{-1/2} exp(-(q - q0 - p0 t/m)^2 / (4 sigma^2 (1 + i tau)))
  //            * exp(i p0 q - i p0^2 t / (2m)),  tau = t / (2 m sigma^2)
  const Complex spread{1.0, t / (2.0 * m * sigma * sigma)};
  const Complex prefactor = 1.0 / std::sqrt(spread);
  std::vector<Complex> amps(grid.n);
  for (std::size_t a = 0; a < grid.n; ++a) {
    const double q = grid.q(a);
    const double shift = q - q0 - p0 * t / m;
    const Complex envelope = std::exp(-shift * shift / (4.0 * sigma * sigma * spread));
    amps[a] = prefactor * envelope * std::polar(1.0, p0 * q - p0 * p0 * t / (2.0 * m));
  }
  return WaveGrid{grid, normalized(grid.l, std::move(amps))};
}

std::vector<double> kinetic_phase(const Grid& grid, double m, double delta_t, KineticConvention convention) {
  if (!(m > 0.0)) throw DomainError("mass must be positive");
  std::vector<double> phase(grid.n);
  const double n = static_cast<double>(grid.n);
  for (std::size_t b = 0; b < grid.n; ++b) {
    if (convention == KineticConvention::Literal) {
      const double bb = static_cast<double>(b);
      phase[b] = -kPi * bb * bb * delta_t / (m * n);
    } else {
      const double p = grid.p_centered(b);
      phase[b] = -p * p * delta_t / (2.0 * m);
    }
  }
  return phase;
}

WaveGrid trotter_step(WaveGrid wave, const Potential& potential, double m, double delta_t,
                      KineticConvention convention, const FourierBackend& backend) {
  auto amps = wave.state.mutable_amplitudes();
  for (std::size_t a = 0; a < amps.size(); ++a) amps[a] *= std::polar(1.0, -potential(wave.grid.q(a)) * delta_t);
  StateVector s = backend.forward(std::move(wave.state));
  const auto kin = kinetic_phase(wave.grid, m, delta_t, convention);
  auto mom = s.mutable_amplitudes();
  for (std::size_t b = 0; b < mom.size(); ++b) mom[b] *= std::polar(1.0, kin[b]);
  wave.state = backend.inverse(std::move(s));
  return wave;
}

WaveGrid trotter_step(WaveGrid wave, const Potential& potential, double m, double delta_t,
                      KineticConvention convention) {
  static const auto reference = qft_backend_select(QftBackendMode::Reference, 1);
  return trotter_step(std::move(wave), potential, m, delta_t, convention, *reference);
}

WaveGrid evolve(WaveGrid wave, const Potential& potential, double m, const TrotterConfig& config,
                const FourierBackend& backend) {
  const std::size_t steps = config.steps();
  for (std::size_t i = 0; i < steps; ++i) {
    wave = trotter_step(std::move(wave), potential, m, config.delta_t, config.convention, backend);
  }
  return wave;
}

WaveGrid evolve(WaveGrid wave, const Potential& potential, double m, const TrotterConfig& config) {
  const auto reference = qft_backend_select(QftBackendMode::Reference, wave.grid.l);
  return evolve(std::move(wave), potential, m, config, *reference);
}

double Observables::width() const { return std::sqrt(std::max(0.0, mean_q2 - mean_q * mean_q)); }

Observables observables(const WaveGrid& wave) {
  Observables o{0, 0, 0, 0, 0};
  for (std::size_t a = 0; a < wave.grid.n; ++a) {
    const double w = std::norm(wave.state[a]);
    const double q = wave.grid.q(a);
    o.norm += w;
    o.mean_q += w * q;
    o.mean_q2 += w * q * q;
  }
  const StateVector mom = ideal_qft(wave.state, Direction::Forward);
  for (std::size_t b = 0; b < wave.grid.n; ++b) {
    const double w = std::norm(mom[b]);
    const double p = wave.grid.p_centered(b);
    o.mean_p += w * p;
    o.mean_p2 += w * p * p;
  }
  return o;
}

double energy(const WaveGrid& wave, const Potential& potential, double m) {
  const Observables o = observables(wave);
  double v = 0.0;
  for (std::size_t a = 0; a < wave.grid.n; ++a) v += std::norm(wave.state[a]) * potential(wave.grid.q(a));
  return o.mean_p2 / (2.0 * m) + v;
}

double l2_error(const WaveGrid& a, const WaveGrid& b) { return distance(a.state, b.state); }

void write_wavefunction_csv(std::ostream& os, const WaveGrid& wave, double t) {
  os << "# l=" << wave.grid.l << " dq=" << fmt17(wave.grid.dq) << " t=" << fmt17(t) << '\n';
  os << "index,q,re,im,prob\n";
  for (std::size_t a = 0; a < wave.grid.n; ++a) {
    const Complex psi = wave.psi(a);
    os << a << ',' << fmt17(wave.grid.q(a)) << ',' << fmt17(psi.real()) << ',' << fmt17(psi.imag()) << ','
       << fmt17(std::norm(wave.state[a])) << '\n';
  }
}

}  // namespace fixq
