#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "fixq/qft_protocol.hpp"
#include "fixq/statevector.hpp"

namespace fixq {

/// Coordinate/momentum grid for an l-qubit register: N = 2^l points,
/// dq = dp = sqrt(2 pi / N), q_a = a dq - A with A = sqrt(pi N / 2).
struct Grid {
  int l;
  std::size_t n;
  double dq;
  double dp;
  double half_width;

  explicit Grid(int num_qubits);
  double q(std::size_t a) const { return static_cast<double>(a) * dq - half_width; }
  /// Momentum of transform index b with the upper half mapped to negative values.
  double p_centered(std::size_t b) const;
};

/// Wavefunction on a Grid. The register amplitudes are psi(q_a) sqrt(dq),
/// so the register norm is the continuum norm sum |psi|^2 dq.
struct WaveGrid {
  Grid grid;
  StateVector state;

  Complex psi(std::size_t a) const { return state[a] / std::sqrt(grid.dq); }
};

struct Potential {
  enum class Kind { Free, Linear, Quadratic };
  Kind kind = Kind::Free;
  double force = 0.0;   // Linear: V = -force q
  double stiffness = 0.0;  // Quadratic: V = stiffness q^2 / 2, stiffness = m omega^2

  static Potential free() { return {}; }
  static Potential linear(double f) { return {Kind::Linear, f, 0.0}; }
  /// DomainError unless m > 0.
  static Potential quadratic(double m, double omega);

  double operator()(double q) const;
};

/// Centered maps transform index b >= N/2 to momentum (b - N) dp.
/// Literal uses b dp for every index (exact only for b < N/2).
enum class KineticConvention { Centered, Literal };

struct TrotterConfig {
  double delta_t;
  double total_time;
  KineticConvention convention = KineticConvention::Centered;

  /// Number of steps; DomainError unless total_time / delta_t is a
  /// nonnegative integer (within 1e-9).
  std::size_t steps() const;
};

/// Which transform the kinetic step runs on.
enum class QftBackendMode { Reference, PulseOracle };

inline constexpr int kPulseOracleMaxQubits = 6;

class FourierBackend {
 public:
  virtual ~FourierBackend() = default;
  virtual StateVector forward(StateVector s) const = 0;
  virtual StateVector inverse(StateVector s) const = 0;
};

/// Reference: exact FFT. PulseOracle: deterministic fixed-interaction plans
/// (SizeError above kPulseOracleMaxQubits).
std::shared_ptr<const FourierBackend> qft_backend_select(QftBackendMode mode, int l);

/// psi ~ exp(-(q - q0)^2 / (4 sigma^2) + i p0 q), normalized on the grid.
/// DomainError if |q0| + 4 sigma >= A or sigma <= 0.
WaveGrid make_gaussian(const Grid& grid, double q0, double p0, double sigma);

/// Exact free evolution of make_gaussian's packet, sampled and normalized.
WaveGrid analytic_free_gaussian(double t, double q0, double p0, double sigma, double m, const Grid& grid);

/// Phase angle per transform index: e^{i phase_b} is the kinetic factor.
std::vector<double> kinetic_phase(const Grid& grid, double m, double delta_t, KineticConvention convention);

/// e^{-iV dt} in position, then forward transform, kinetic phase, inverse.
WaveGrid trotter_step(WaveGrid wave, const Potential& potential, double m, double delta_t,
                      KineticConvention convention, const FourierBackend& backend);
WaveGrid trotter_step(WaveGrid wave, const Potential& potential, double m, double delta_t,
                      KineticConvention convention = KineticConvention::Centered);

WaveGrid evolve(WaveGrid wave, const Potential& potential, double m, const TrotterConfig& config,
                const FourierBackend& backend);
WaveGrid evolve(WaveGrid wave, const Potential& potential, double m, const TrotterConfig& config);

struct Observables {
  double norm;
  double mean_q;
  double mean_q2;
  double mean_p;
  double mean_p2;

  double width() const;
};

Observables observables(const WaveGrid& wave);
/// <p^2>/2m + <V>.
double energy(const WaveGrid& wave, const Potential& potential, double m);
/// L2 distance sqrt(sum |psi_a - phi_a|^2 dq).
double l2_error(const WaveGrid& a, const WaveGrid& b);

/// `# l=.. dq=.. t=..` line, then `index,q,re,im,prob` rows (re/im of psi,
/// prob = |psi|^2 dq), 17 significant digits.
void write_wavefunction_csv(std::ostream& os, const WaveGrid& wave, double t);

}  // namespace fixq
