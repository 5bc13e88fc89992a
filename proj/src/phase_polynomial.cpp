#include "fixq/phase_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fixq/errors.hpp"

namespace fixq {

PhasePolynomial::PhasePolynomial(int num_bits) {
  if (num_bits < 0) throw SizeError("phase polynomial: negative bit count");
  linear_.assign(static_cast<std::size_t>(num_bits), 0.0);
}

void PhasePolynomial::check_bit(int bit) const {
  if (bit < 0 || bit >= num_bits()) {
    throw DomainError("phase polynomial: bit " + std::to_string(bit) + " out of range [0, " +
                      std::to_string(num_bits()) + ")");
  }
}

double PhasePolynomial::linear(int bit) const {
  check_bit(bit);
  return linear_[static_cast<std::size_t>(bit)];
}

double PhasePolynomial::quadratic(int j, int k) const {
  if (j < k) std::swap(j, k);
  auto it = quadratic_.find({j, k});
  return it == quadratic_.end() ? 0.0 : it->second;
}

PhasePolynomial& PhasePolynomial::add_constant(double c) {
  constant_ += c;
  return *this;
}

PhasePolynomial& PhasePolynomial::add_linear(int bit, double c) {
  check_bit(bit);
  linear_[static_cast<std::size_t>(bit)] += c;
  return *this;
}

PhasePolynomial& PhasePolynomial::add_quadratic(int j, int k, double c) {
  check_bit(j);
  check_bit(k);
  if (j == k) return add_linear(j, c);
  if (j < k) std::swap(j, k);
  quadratic_[{j, k}] += c;
  return *this;
}

double PhasePolynomial::evaluate(std::uint64_t basis) const {
  auto bit = [basis](int j) { return (basis >> j) & 1U; };
  double value = constant_;
  for (std::size_t j = 0; j < linear_.size(); ++j) {
    if (bit(static_cast<int>(j))) value += linear_[j];
  }
  for (const auto& [key, c] : quadratic_) {
    if (bit(key.first) && bit(key.second)) value += c;
  }
  return value;
}

PhasePolynomial& PhasePolynomial::operator+=(const PhasePolynomial& other) {
  if (other.num_bits() > num_bits()) linear_.resize(other.linear_.size(), 0.0);
  constant_ += other.constant_;
  for (std::size_t j = 0; j < other.linear_.size(); ++j) linear_[j] += other.linear_[j];
  for (const auto& [key, c] : other.quadratic_) quadratic_[key] += c;
  return *this;
}

PhasePolynomial& PhasePolynomial::operator-=(const PhasePolynomial& other) {
  return *this += other * -1.0;
}

PhasePolynomial& PhasePolynomial::operator*=(double s) {
  constant_ *= s;
  for (auto& c : linear_) c *= s;
  for (auto& [key, c] : quadratic_) c *= s;
  return *this;
}

PhasePolynomial PhasePolynomial::complemented(int bit) const {
  check_bit(bit);
  PhasePolynomial out(num_bits());
  out.constant_ = constant_;
  // c x -> c - c x
  for (int j = 0; j < num_bits(); ++j) {
    const double c = linear_[static_cast<std::size_t>(j)];
    if (j == bit) {
      out.constant_ += c;
      out.linear_[static_cast<std::size_t>(j)] -= c;
    } else {
      out.linear_[static_cast<std::size_t>(j)] += c;
    }
  }
  // c x_bit y -> c y - c x_bit y
  for (const auto& [key, c] : quadratic_) {
    if (key.first == bit || key.second == bit) {
      const int other = key.first == bit ? key.second : key.first;
      out.linear_[static_cast<std::size_t>(other)] += c;
      out.quadratic_[key] -= c;
    } else {
      out.quadratic_[key] += c;
    }
  }
  return out;
}

PhasePolynomial PhasePolynomial::substituted(int bit, double value) const {
  check_bit(bit);
  PhasePolynomial out(num_bits());
  out.constant_ = constant_ + linear_[static_cast<std::size_t>(bit)] * value;
  for (int j = 0; j < num_bits(); ++j) {
    if (j != bit) out.linear_[static_cast<std::size_t>(j)] = linear_[static_cast<std::size_t>(j)];
  }
  for (const auto& [key, c] : quadratic_) {
    if (key.first == bit || key.second == bit) {
      const int other = key.first == bit ? key.second : key.first;
      out.linear_[static_cast<std::size_t>(other)] += c * value;
    } else {
      out.quadratic_[key] += c;
    }
  }
  return out;
}

PhasePolynomial PhasePolynomial::quadratic_part() const {
  PhasePolynomial out(num_bits());
  out.quadratic_ = quadratic_;
  return out;
}

PhasePolynomial PhasePolynomial::affine_part() const {
  PhasePolynomial out(num_bits());
  out.constant_ = constant_;
  out.linear_ = linear_;
  return out;
}

PhasePolynomial PhasePolynomial::pruned(double tol) const {
  PhasePolynomial out(num_bits());
  out.constant_ = std::abs(constant_) > tol ? constant_ : 0.0;
  for (std::size_t j = 0; j < linear_.size(); ++j) {
    if (std::abs(linear_[j]) > tol) out.linear_[j] = linear_[j];
  }
  for (const auto& [key, c] : quadratic_) {
    if (std::abs(c) > tol) out.quadratic_[key] = c;
  }
  return out;
}

double max_abs_difference(const PhasePolynomial& a, const PhasePolynomial& b) {
  const PhasePolynomial d = a - b;
  double m = std::abs(d.constant_);
  for (double c : d.linear_) m = std::max(m, std::abs(c));
  for (const auto& [key, c] : d.quadratic_) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace fixq
