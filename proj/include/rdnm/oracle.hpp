#pragma once

// Independent ground truth: exact value iteration, the zero set of P^n(0),
// and closed-form least fixed points of univariate quadratics.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rdnm/exact.hpp"
#include "rdnm/system.hpp"

namespace rdnm {

/// Exact P^k(0). With a ceiling, throws DivergenceCertified as soon as a
/// coordinate exceeds 2^ceiling_exponent.
RVector value_iterate(const MonotoneSystem& sys, std::uint64_t k,
                      const std::optional<mpz_class>& ceiling_exponent = std::nullopt);

/// Indices i with P^n(0)_i = 0, ascending.
std::vector<std::size_t> zero_set_oracle(const MonotoneSystem& sys);

/// Exact number a + b * sqrt(radicand). When b != 0 the radicand is a
/// positive integer that is not a perfect square.
class QuadraticNumber {
 public:
  QuadraticNumber() = default;
  explicit QuadraticNumber(Rational value) : a_(std::move(value)) {}
  /// a + b * sqrt(radicand) for a non-negative rational radicand; square
  /// radicands are folded into the rational part.
  QuadraticNumber(Rational a, Rational b, const Rational& radicand);

  bool is_rational() const { return b_.is_zero(); }
  const Rational& rational_part() const { return a_; }
  const Rational& sqrt_coefficient() const { return b_; }
  const mpz_class& radicand() const { return d_; }

  /// Exact comparison with a rational, decided by integer sign tests.
  std::strong_ordering compare(const Rational& r) const;

  /// [lo, hi] containing the value with hi - lo <= 2^-bits (both equal
  /// the value when it is rational).
  std::pair<Rational, Rational> bracket(std::uint64_t bits) const;

  /// "a", or "a + b*sqrt(D)" with rationals printed as p/q.
  std::string str() const;

 private:
  Rational a_;
  Rational b_;
  mpz_class d_ = 0;
};

/// Least non-negative solution of x = a x^2 + b x + c with a, b, c >= 0.
/// Throws NoFiniteLfp when value iteration from 0 diverges.
QuadraticNumber univariate_quadratic_lfp(const Rational& a, const Rational& b, const Rational& c);

}  // namespace rdnm
