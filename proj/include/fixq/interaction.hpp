#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fixq/phase_polynomial.hpp"

namespace fixq {

/// Distance dependence d(r) of the pair coupling, including the amplitude
/// rho0 (radians per unit time).
struct DecayLaw {
  enum class Kind { YukawaBase2, YukawaNatural, PowerLaw, Table };

  Kind kind = Kind::YukawaBase2;
  double rho0 = 1.0;
  double screening = 1.0;  // b of rho0 e^{-b r}/r
  double exponent = 0.0;   // alpha of rho0 / r^alpha
  std::map<std::pair<int, int>, double> table;  // keyed (j, k) with j > k

  static DecayLaw yukawa_base2(double rho0);
  static DecayLaw yukawa_natural(double rho0, double b);
  static DecayLaw power_law(double rho0, double alpha);
  static DecayLaw from_table(std::map<std::pair<int, int>, double> entries);

  /// d(r) for the analytic kinds; DomainError for Table or r <= 0.
  double at_distance(double r) const;
};

/// Diagonal of the 4x4 pair Hamiltonian in the basis |00>,|01>,|10>,|11>
/// (first bit = higher qubit). Entries are weights multiplied by d(r).
struct PairForm {
  enum class Kind { FormA, FormB };

  Kind kind = Kind::FormA;
  double rho = 1.0;                     // FormA: only |11> is shifted
  double rho1 = 0, rho2 = 0, rho3 = 0, rho4 = 0;  // FormB

  static PairForm form_a(double rho);
  /// DomainError when rho1 + rho4 == rho2 + rho3 (within 1e-12).
  static PairForm form_b(double rho1, double rho2, double rho3, double rho4);

  /// rho1 - rho2 - rho3 + rho4 (FormA: rho).
  double quadratic_weight() const;
  std::array<double, 4> diagonal() const;
};

/// Fixed always-on interaction between every pair of an l-qubit line.
class CouplingModel {
 public:
  /// Positions default to 0, 1, ..., l-1.
  CouplingModel(int num_qubits, PairForm form, DecayLaw decay, std::vector<double> positions = {});

  /// d(r) = pi 2^{-r} / r with unit spacing and FormA weight 1.
  static CouplingModel canonical(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  const PairForm& form() const { return form_; }
  const DecayLaw& decay() const { return decay_; }
  const std::vector<double>& positions() const { return positions_; }

  /// d_{p,q}: the decay law evaluated at the pair distance.
  double pair_coefficient(int p, int q) const;
  /// Phase per unit time of the pair, as a polynomial over all l bits.
  PhasePolynomial pair_polynomial(int p, int q) const;
  /// Coefficient of x_p x_q in pair_polynomial(p, q).
  double pair_quadratic_rate(int p, int q) const;

  /// Sum of pair_polynomial over all pairs.
  PhasePolynomial hamiltonian_polynomial() const;

  /// True when the Hamiltonian is sum_{j>k} pi x_j x_k / (2^{j-k} (j-k)).
  bool is_canonical(double tol = 1e-12) const;

 private:
  void check_pair(int p, int q) const;

  int num_qubits_;
  PairForm form_;
  DecayLaw decay_;
  std::vector<double> positions_;
};

PhasePolynomial hamiltonian_polynomial(const CouplingModel& model);
double pair_coefficient(const CouplingModel& model, int p, int q);
double evaluate(const PhasePolynomial& poly, std::uint64_t basis);

}  // namespace fixq
