#include "fixq/interaction.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "fixq/errors.hpp"

namespace fixq {

DecayLaw DecayLaw::yukawa_base2(double rho0) {
  DecayLaw d;
  d.kind = Kind::YukawaBase2;
  d.rho0 = rho0;
  return d;
}

DecayLaw DecayLaw::yukawa_natural(double rho0, double b) {
  if (!(b > 0)) throw DomainError("yukawa screening b must be positive");
  DecayLaw d;
  d.kind = Kind::YukawaNatural;
  d.rho0 = rho0;
  d.screening = b;
  return d;
}

DecayLaw DecayLaw::power_law(double rho0, double alpha) {
  if (!(alpha >= 0)) throw DomainError("power-law exponent must be >= 0");
  DecayLaw d;
  d.kind = Kind::PowerLaw;
  d.rho0 = rho0;
  d.exponent = alpha;
  return d;
}

DecayLaw DecayLaw::from_table(std::map<std::pair<int, int>, double> entries) {
  DecayLaw d;
  d.kind = Kind::Table;
  for (const auto& [key, v] : entries) {
    if (!std::isfinite(v)) throw DomainError("decay table entry is not finite");
    d.table[{std::max(key.first, key.second), std::min(key.first, key.second)}] = v;
  }
  return d;
}

double DecayLaw::at_distance(double r) const {
  if (!(r > 0)) throw DomainError("decay law: distance must be positive");
  switch (kind) {
    case Kind::YukawaBase2:
      return rho0 * std::exp2(-r) / r;
    case Kind::YukawaNatural:
      return rho0 * std::exp(-screening * r) / r;
    case Kind::PowerLaw:
      return rho0 / std::pow(r, exponent);
    case Kind::Table:
      break;
  }
  throw DomainError("decay law: table decay has no distance form");
}

PairForm PairForm::form_a(double rho) {
  PairForm f;
  f.kind = Kind::FormA;
  f.rho = rho;
  return f;
}

PairForm PairForm::form_b(double rho1, double rho2, double rho3, double rho4) {
  if (std::abs((rho1 + rho4) - (rho2 + rho3)) <= 1e-12) {
    throw DomainError("form B is degenerate: rho1 + rho4 == rho2 + rho3");
  }
  PairForm f;
  f.kind = Kind::FormB;
  f.rho1 = rho1;
  f.rho2 = rho2;
  f.rho3 = rho3;
  f.rho4 = rho4;
  return f;
}

double PairForm::quadratic_weight() const {
  return kind == Kind::FormA ? rho : rho1 - rho2 - rho3 + rho4;
}

std::array<double, 4> PairForm::diagonal() const {
  if (kind == Kind::FormA) return {0.0, 0.0, 0.0, rho};
  return {rho1, rho2, rho3, rho4};
}

CouplingModel::CouplingModel(int num_qubits, PairForm form, DecayLaw decay, std::vector<double> positions)
    : num_qubits_(num_qubits), form_(form), decay_(std::move(decay)), positions_(std::move(positions)) {
  if (num_qubits < 1) throw SizeError("coupling model needs at least one qubit");
  if (form_.kind == PairForm::Kind::FormB) {
    // re-run the nondegeneracy check for hand-assembled forms
    form_ = PairForm::form_b(form_.rho1, form_.rho2, form_.rho3, form_.rho4);
  }
  if (positions_.empty()) {
    for (int j = 0; j < num_qubits; ++j) positions_.push_back(j);
  }
  if (static_cast<int>(positions_.size()) != num_qubits) {
    throw SizeError("coupling model: position count differs from qubit count");
  }
  for (std::size_t j = 1; j < positions_.size(); ++j) {
    if (!(positions_[j] - positions_[j - 1] >= 1.0)) {
      throw DomainError("coupling model: positions must increase by at least one unit");
    }
  }
}

CouplingModel CouplingModel::canonical(int num_qubits) {
  return CouplingModel(num_qubits, PairForm::form_a(1.0), DecayLaw::yukawa_base2(std::numbers::pi));
}

void CouplingModel::check_pair(int p, int q) const {
  if (p < 0 || q < 0 || p >= num_qubits_ || q >= num_qubits_) {
    throw DomainError("pair (" + std::to_string(p) + "," + std::to_string(q) + ") out of range");
  }
  if (p == q) throw DomainError("pair coefficient needs two distinct qubits");
}

double CouplingModel::pair_coefficient(int p, int q) const {
  check_pair(p, q);
  if (decay_.kind == DecayLaw::Kind::Table) {
    auto it = decay_.table.find({std::max(p, q), std::min(p, q)});
    return it == decay_.table.end() ? 0.0 : it->second;
  }
  const double r = std::abs(positions_[static_cast<std::size_t>(q)] - positions_[static_cast<std::size_t>(p)]);
  return decay_.at_distance(r);
}

PhasePolynomial CouplingModel::pair_polynomial(int p, int q) const {
  const double d = pair_coefficient(p, q);
  const int hi = std::max(p, q);
  const int lo = std::min(p, q);
  const auto [r1, r2, r3, r4] = form_.diagonal();
  // r1 (1-x)(1-y) + r2 (1-x) y + r3 x (1-y) + r4 x y, x = hi bit, y = lo bit
  PhasePolynomial poly(num_qubits_);
  poly.add_constant(d * r1);
  poly.add_linear(hi, d * (r3 - r1));
  poly.add_linear(lo, d * (r2 - r1));
  poly.add_quadratic(hi, lo, d * (r1 - r2 - r3 + r4));
  return poly;
}

double CouplingModel::pair_quadratic_rate(int p, int q) const {
  return pair_coefficient(p, q) * form_.quadratic_weight();
}

PhasePolynomial CouplingModel::hamiltonian_polynomial() const {
  PhasePolynomial h(num_qubits_);
  for (int j = 1; j < num_qubits_; ++j) {
    for (int k = 0; k < j; ++k) h += pair_polynomial(j, k);
  }
  return h;
}

bool CouplingModel::is_canonical(double tol) const {
  PhasePolynomial expected(num_qubits_);
  for (int j = 1; j < num_qubits_; ++j) {
    for (int k = 0; k < j; ++k) {
      const int r = j - k;
      expected.add_quadratic(j, k, std::numbers::pi / (std::exp2(r) * r));
    }
  }
  return max_abs_difference(hamiltonian_polynomial(), expected) <= tol;
}

PhasePolynomial hamiltonian_polynomial(const CouplingModel& model) { return model.hamiltonian_polynomial(); }

double pair_coefficient(const CouplingModel& model, int p, int q) { return model.pair_coefficient(p, q); }

double evaluate(const PhasePolynomial& poly, std::uint64_t basis) { return poly.evaluate(basis); }

}  // namespace fixq
