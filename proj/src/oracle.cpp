#include "rdnm/oracle.hpp"

#include <stdexcept>

#include "rdnm/errors.hpp"
#include "rdnm/newton.hpp"

namespace rdnm {

RVector value_iterate(const MonotoneSystem& sys, std::uint64_t k,
                      const std::optional<mpz_class>& ceiling_exponent) {
  RVector y(sys.size());
  for (std::uint64_t step = 1; step <= k; ++step) {
    RVector next = eval(sys, y);
    if (ceiling_exponent) {
      for (std::size_t i = 0; i < next.size(); ++i) {
        if (exceeds_pow2(next[i], *ceiling_exponent)) {
          throw DivergenceCertified("P^" + std::to_string(step) + "(0) puts " + sys.name(i) +
                                    " above 2^" + ceiling_exponent->get_str());
        }
      }
    }
    if (next == y) break;  // every later iterate is the same
    y = std::move(next);
  }
  return y;
}

std::vector<std::size_t> zero_set_oracle(const MonotoneSystem& sys) {
  const RVector y = value_iterate(sys, sys.size());
  std::vector<std::size_t> zeros;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i].is_zero()) zeros.push_back(i);
  }
  return zeros;
}

namespace {

// Sign of p + q sqrt(d) for rationals p, q and an integer d >= 0.
int sign_with_root(const Rational& p, const Rational& q, const mpz_class& d) {
  const int sp = p.sign();
  const int sq = d == 0 ? 0 : q.sign();
  if (sq == 0) return sp;
  if (sp == 0 || sp == sq) return sq;
  // Opposite signs: compare p^2 with q^2 d.
  const Rational lhs = p * p;
  const Rational rhs = q * q * Rational(d);
  if (lhs == rhs) return 0;
  return lhs > rhs ? sp : sq;
}

}  // namespace

QuadraticNumber::QuadraticNumber(Rational a, Rational b, const Rational& radicand)
    : a_(std::move(a)) {
  if (radicand.sign() < 0) throw std::invalid_argument("negative radicand");
  if (b.is_zero() || radicand.is_zero()) return;
  // sqrt(N/M) = sqrt(N M) / M.
  const mpz_class nm = radicand.num() * radicand.den();
  const mpz_class root = isqrt(nm);
  if (root * root == nm) {
    a_ = a_ + b * Rational(root, radicand.den());
    return;
  }
  b_ = b / Rational(radicand.den());
  d_ = nm;
}

std::strong_ordering QuadraticNumber::compare(const Rational& r) const {
  const int s = sign_with_root(a_ - r, b_, d_);
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::pair<Rational, Rational> QuadraticNumber::bracket(std::uint64_t bits) const {
  if (is_rational()) return {a_, a_};
  // sqrt(d) lies in [s, s+1] * 2^-k with s = isqrt(d 4^k); k is chosen so
  // that |b| 2^-k <= 2^-bits.
  const auto extra = static_cast<std::uint64_t>(std::max<std::int64_t>(0, ceil_log2(b_.abs()) + 1));
  const std::uint64_t k = bits + extra;
  mpz_class scaled = d_;
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * k);
  const mpz_class s = isqrt(scaled);
  const auto neg_k = -static_cast<std::int64_t>(k);
  const Rational root_lo = Rational(s).times_pow2(neg_k);
  const Rational root_hi = Rational(mpz_class(s + 1)).times_pow2(neg_k);
  Rational lo = a_ + b_ * root_lo;
  Rational hi = a_ + b_ * root_hi;
  if (lo > hi) std::swap(lo, hi);
  return {lo, hi};
}

std::string QuadraticNumber::str() const {
  if (is_rational()) return a_.str();
  return a_.str() + " + " + b_.str() + "*sqrt(" + d_.get_str() + ")";
}

QuadraticNumber univariate_quadratic_lfp(const Rational& a, const Rational& b, const Rational& c) {
  if (a.sign() < 0 || b.sign() < 0 || c.sign() < 0) {
    throw std::invalid_argument("coefficients must be non-negative");
  }
  // With no constant term value iteration stays at 0.
  if (c.is_zero()) return QuadraticNumber(Rational(0));
  const Rational one_minus_b = Rational(1) - b;
  if (a.is_zero()) {
    if (one_minus_b.sign() <= 0) {
      throw NoFiniteLfp("x = " + b.str() + " x + " + c.str() + " has no finite solution");
    }
    return QuadraticNumber(c / one_minus_b);
  }
  // a x^2 + (b - 1) x + c = 0; both roots share the sign of 1 - b since c/a > 0.
  const Rational disc = one_minus_b * one_minus_b - Rational(4) * a * c;
  if (disc.sign() < 0 || one_minus_b.sign() <= 0) {
    throw NoFiniteLfp("a x^2 + (b-1) x + c has no non-negative root (a=" + a.str() +
                      ", b=" + b.str() + ", c=" + c.str() + ")");
  }
  const Rational two_a = Rational(2) * a;
  return QuadraticNumber(one_minus_b / two_a, -two_a.reciprocal(), disc);
}

}  // namespace rdnm
