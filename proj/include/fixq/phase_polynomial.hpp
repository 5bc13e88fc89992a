#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace fixq {

/// Real function of classical bits:
///   constant + sum_j linear[j] x_j + sum_{j>k} quadratic[(j,k)] x_j x_k.
///
/// Used both for diagonal Hamiltonians (phase per unit time) and for phase
/// targets and compensations (phase in radians). Quadratic keys are always
/// stored with j > k.
class PhasePolynomial {
 public:
  using PairKey = std::pair<int, int>;

  PhasePolynomial() = default;
  explicit PhasePolynomial(int num_bits);

  int num_bits() const { return static_cast<int>(linear_.size()); }

  double constant() const { return constant_; }
  const std::vector<double>& linear() const { return linear_; }
  const std::map<PairKey, double>& quadratic() const { return quadratic_; }

  double linear(int bit) const;
  /// Coefficient of x_j x_k, order of j and k irrelevant; 0 if absent.
  double quadratic(int j, int k) const;

  PhasePolynomial& add_constant(double c);
  PhasePolynomial& add_linear(int bit, double c);
  /// Accumulates c x_j x_k; j == k folds into the linear term (x^2 = x).
  PhasePolynomial& add_quadratic(int j, int k, double c);

  double evaluate(std::uint64_t basis) const;

  PhasePolynomial& operator+=(const PhasePolynomial& other);
  PhasePolynomial& operator-=(const PhasePolynomial& other);
  PhasePolynomial& operator*=(double s);
  friend PhasePolynomial operator+(PhasePolynomial a, const PhasePolynomial& b) { return a += b; }
  friend PhasePolynomial operator-(PhasePolynomial a, const PhasePolynomial& b) { return a -= b; }
  friend PhasePolynomial operator*(PhasePolynomial a, double s) { return a *= s; }
  friend PhasePolynomial operator*(double s, PhasePolynomial a) { return a *= s; }
  PhasePolynomial operator-() const { return *this * -1.0; }

  /// Substitutes x_bit -> 1 - x_bit.
  PhasePolynomial complemented(int bit) const;
  /// Substitutes x_bit -> value (value need not be 0 or 1; 1/2 gives the
  /// time average of a bit flipped at random).
  PhasePolynomial substituted(int bit, double value) const;

  /// Only the x_j x_k terms.
  PhasePolynomial quadratic_part() const;
  /// Everything except the x_j x_k terms.
  PhasePolynomial affine_part() const;

  /// Drops coefficients with |c| <= tol and empties zero quadratic entries.
  PhasePolynomial pruned(double tol = 0.0) const;

  /// Largest absolute coefficient difference, term by term.
  friend double max_abs_difference(const PhasePolynomial& a, const PhasePolynomial& b);

 private:
  void check_bit(int bit) const;

  double constant_ = 0.0;
  std::vector<double> linear_;
  std::map<PairKey, double> quadratic_;
};

}  // namespace fixq
