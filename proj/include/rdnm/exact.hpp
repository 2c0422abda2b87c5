#pragma once

// Exact arithmetic: rationals, dyadic grid values, dense rational
// vectors/matrices and a fraction-preserving linear solver.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rdnm/errors.hpp"

namespace rdnm {

/// Arbitrary-precision fraction, always in lowest terms with a positive
/// denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT: implicit from integers is intended
  Rational(int value) : value_(static_cast<long>(value)) {}  // NOLINT
  Rational(const mpz_class& value) : value_(value) {}  // NOLINT
  Rational(const mpz_class& num, const mpz_class& den);
  explicit Rational(const mpq_class& value);

  /// Parses "p/q" or "p" in decimal digits (optional leading '-').
  static Rational parse(std::string_view text);
  static Rational pow2(std::int64_t exponent);

  /// "p/q", or "p" when the denominator is 1.
  std::string str() const;

  const mpz_class& num() const { return value_.get_num(); }
  const mpz_class& den() const { return value_.get_den(); }
  const mpq_class& mpq() const { return value_; }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return den() == 1; }

  Rational abs() const;
  Rational reciprocal() const;
  Rational pow(std::uint64_t exponent) const;
  /// Exact multiplication by 2^exponent (exponent may be negative).
  Rational times_pow2(std::int64_t exponent) const;
  /// Largest integer <= value.
  mpz_class floor() const;
  double to_double() const { return value_.get_d(); }

  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
  friend Rational operator-(const Rational& v);

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& v);

const Rational& min(const Rational& a, const Rational& b);
const Rational& max(const Rational& a, const Rational& b);

/// Number of bits of |v|; 0 counts as one bit.
std::uint64_t bit_length(const mpz_class& v);

/// Smallest integer k with x <= 2^k. Requires x > 0.
std::int64_t ceil_log2(const Rational& x);

/// Largest integer k with 2^k <= x. Requires x > 0.
std::int64_t floor_log2(const Rational& x);

/// floor(sqrt(v)) for v >= 0.
mpz_class isqrt(const mpz_class& v);

/// A rational r with sqrt(x) <= r, exact when x is a square of a rational
/// and otherwise within a relative 2^-64 of the true root.
Rational sqrt_upper(const Rational& x);

/// Value mantissa * 2^(-scale). Kept apart from Rational so that grid
/// membership is carried by the type.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(mpz_class mantissa, std::uint64_t scale);

  /// Largest multiple of 2^(-h) that is <= max(v, 0).
  static Dyadic round_down(const Rational& v, std::uint64_t h);

  const mpz_class& mantissa() const { return mantissa_; }
  std::uint64_t scale() const { return scale_; }
  Rational value() const;
  std::string str() const { return value().str(); }

  /// Exact multiplication by 2^u; the scale absorbs as much of u as it can.
  Dyadic times_pow2(std::int64_t u) const;

  friend bool operator==(const Dyadic& a, const Dyadic& b);
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    return a.value() <=> b.value();
  }

 private:
  mpz_class mantissa_;
  std::uint64_t scale_ = 0;
};

/// round_down_dyadic: h must be >= 1.
Dyadic round_down_dyadic(const Rational& v, std::uint64_t h);

using DyadicVector = std::vector<Dyadic>;

/// Dense vector of rationals with a fixed dimension.
class RVector {
 public:
  RVector() = default;
  explicit RVector(std::size_t n) : data_(n) {}
  RVector(std::initializer_list<Rational> values) : data_(values) {}
  explicit RVector(std::vector<Rational> values) : data_(std::move(values)) {}
  static RVector from(const DyadicVector& values);

  std::size_t size() const { return data_.size(); }
  Rational& operator[](std::size_t i) { return data_[i]; }
  const Rational& operator[](std::size_t i) const { return data_[i]; }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }
  const std::vector<Rational>& values() const { return data_; }

  /// max_i |v_i|; zero for the empty vector.
  Rational norm_inf() const;

  friend bool operator==(const RVector&, const RVector&) = default;

 private:
  std::vector<Rational> data_;
};

RVector operator+(const RVector& a, const RVector& b);
RVector operator-(const RVector& a, const RVector& b);

/// Dense row-major matrix of rationals with fixed dimensions.
class RMatrix {
 public:
  RMatrix() = default;
  RMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  RMatrix(std::initializer_list<std::initializer_list<Rational>> rows);
  static RMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  friend bool operator==(const RMatrix&, const RMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

RVector operator*(const RMatrix& a, const RVector& x);
RMatrix operator-(const RMatrix& a, const RMatrix& b);

/// Exact solution of a * x = b by Gaussian elimination, pivoting on the
/// first nonzero entry of each column. Throws SingularMatrix.
RVector solve_linear(const RMatrix& a, const RVector& b);

}  // namespace rdnm
