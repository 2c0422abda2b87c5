#include "rdnm/exact.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <utility>

namespace rdnm {

InvalidModel::InvalidModel(std::vector<std::string> violations)
    : Error([&] {
        std::string msg = "invalid model";
        for (const auto& v : violations) msg += "; " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

namespace {

bool is_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

mpz_class shifted(const mpz_class& v, std::int64_t bits) {
  mpz_class out;
  if (bits >= 0) {
    mpz_mul_2exp(out.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
  } else {
    mpz_fdiv_q_2exp(out.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(-bits));
  }
  return out;
}

}  // namespace

Rational::Rational(const mpz_class& num, const mpz_class& den) : value_(num, den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  value_.canonicalize();
}

Rational::Rational(const mpq_class& value) : value_(value) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num_text = body.substr(0, slash);
  const std::string_view den_text =
      slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!is_digits(num_text) || !is_digits(den_text)) {
    throw ParseError("not a rational number: '" + std::string(text) + "'");
  }
  mpz_class num(std::string(num_text), 10);
  mpz_class den(std::string(den_text), 10);
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  if (negative) num = -num;
  return Rational(num, den);
}

Rational Rational::pow2(std::int64_t exponent) { return Rational(1).times_pow2(exponent); }

std::string Rational::str() const {
  if (is_integer()) return num().get_str();
  return num().get_str() + "/" + den().get_str();
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

Rational Rational::reciprocal() const {
  if (is_zero()) throw std::domain_error("reciprocal of zero");
  return Rational(den(), num());
}

Rational Rational::pow(std::uint64_t exponent) const {
  mpz_class n;
  mpz_class d;
  mpz_pow_ui(n.get_mpz_t(), num().get_mpz_t(), exponent);
  mpz_pow_ui(d.get_mpz_t(), den().get_mpz_t(), exponent);
  return Rational(n, d);
}

Rational Rational::times_pow2(std::int64_t exponent) const {
  Rational out;
  if (exponent >= 0) {
    mpq_mul_2exp(out.value_.get_mpq_t(), value_.get_mpq_t(), static_cast<mp_bitcnt_t>(exponent));
  } else {
    mpq_div_2exp(out.value_.get_mpq_t(), value_.get_mpq_t(), static_cast<mp_bitcnt_t>(-exponent));
  }
  return out;
}

mpz_class Rational::floor() const {
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), num().get_mpz_t(), den().get_mpz_t());
  return out;
}

Rational& Rational::operator+=(const Rational& rhs) {
  value_ += rhs.value_;
  return *this;
}
Rational& Rational::operator-=(const Rational& rhs) {
  value_ -= rhs.value_;
  return *this;
}
Rational& Rational::operator*=(const Rational& rhs) {
  value_ *= rhs.value_;
  return *this;
}
Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw std::domain_error("division by zero");
  value_ /= rhs.value_;
  return *this;
}

Rational operator-(const Rational& v) {
  Rational out;
  out.value_ = -v.value_;
  return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& v) { return os << v.str(); }

const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::uint64_t bit_length(const mpz_class& v) {
  if (v == 0) return 1;
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

std::int64_t ceil_log2(const Rational& x) {
  if (x.sign() <= 0) throw std::domain_error("ceil_log2 of non-positive value");
  // x lies in (2^(k-1), 2^(k+1)) for k = bitlen(num) - bitlen(den).
  const auto k = static_cast<std::int64_t>(bit_length(x.num())) -
                 static_cast<std::int64_t>(bit_length(x.den()));
  const bool within = k >= 0 ? x.num() <= shifted(x.den(), k) : shifted(x.num(), -k) <= x.den();
  return within ? k : k + 1;
}

std::int64_t floor_log2(const Rational& x) {
  if (x.sign() <= 0) throw std::domain_error("floor_log2 of non-positive value");
  const auto k = static_cast<std::int64_t>(bit_length(x.num())) -
                 static_cast<std::int64_t>(bit_length(x.den()));
  const bool reaches = k >= 0 ? x.num() >= shifted(x.den(), k) : shifted(x.num(), -k) >= x.den();
  return reaches ? k : k - 1;
}

mpz_class isqrt(const mpz_class& v) {
  if (v < 0) throw std::domain_error("isqrt of negative value");
  mpz_class out;
  mpz_sqrt(out.get_mpz_t(), v.get_mpz_t());
  return out;
}

Rational sqrt_upper(const Rational& x) {
  if (x.sign() < 0) throw std::domain_error("sqrt of negative value");
  const mpz_class radicand = x.num() * x.den();
  if (mpz_perfect_square_p(radicand.get_mpz_t()) != 0) return Rational(isqrt(radicand), x.den());
  constexpr std::int64_t kGuardBits = 64;
  const mpz_class root = isqrt(shifted(radicand, 2 * kGuardBits)) + 1;
  return Rational(root, shifted(x.den(), kGuardBits));
}

Dyadic::Dyadic(mpz_class mantissa, std::uint64_t scale)
    : mantissa_(std::move(mantissa)), scale_(scale) {}

Dyadic Dyadic::round_down(const Rational& v, std::uint64_t h) {
  if (v.sign() <= 0) return Dyadic(0, h);
  mpz_class m;
  mpz_class scaled = shifted(v.num(), static_cast<std::int64_t>(h));
  mpz_fdiv_q(m.get_mpz_t(), scaled.get_mpz_t(), v.den().get_mpz_t());
  return Dyadic(std::move(m), h);
}

Rational Dyadic::value() const {
  return Rational(mantissa_).times_pow2(-static_cast<std::int64_t>(scale_));
}

Dyadic Dyadic::times_pow2(std::int64_t u) const {
  if (u < 0) return Dyadic(mantissa_, scale_ + static_cast<std::uint64_t>(-u));
  const auto up = static_cast<std::uint64_t>(u);
  if (up <= scale_) return Dyadic(mantissa_, scale_ - up);
  return Dyadic(shifted(mantissa_, static_cast<std::int64_t>(up - scale_)), 0);
}

bool operator==(const Dyadic& a, const Dyadic& b) {
  if (a.scale_ == b.scale_) return a.mantissa_ == b.mantissa_;
  if (a.scale_ < b.scale_) {
    return shifted(a.mantissa_, static_cast<std::int64_t>(b.scale_ - a.scale_)) == b.mantissa_;
  }
  return a.mantissa_ == shifted(b.mantissa_, static_cast<std::int64_t>(a.scale_ - b.scale_));
}

Dyadic round_down_dyadic(const Rational& v, std::uint64_t h) {
  if (h == 0) throw std::invalid_argument("rounding parameter h must be >= 1");
  return Dyadic::round_down(v, h);
}

RVector RVector::from(const DyadicVector& values) {
  RVector out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i].value();
  return out;
}

Rational RVector::norm_inf() const {
  Rational best;
  for (const auto& v : data_) {
    Rational a = v.abs();
    if (best < a) best = std::move(a);
  }
  return best;
}

RVector operator+(const RVector& a, const RVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector dimension mismatch");
  RVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

RVector operator-(const RVector& a, const RVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector dimension mismatch");
  RVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

RMatrix::RMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

RMatrix RMatrix::identity(std::size_t n) {
  RMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1;
  return out;
}

RVector operator*(const RMatrix& a, const RVector& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matrix-vector dimension mismatch");
  RVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Rational acc;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!a(i, j).is_zero() && !x[j].is_zero()) acc += a(i, j) * x[j];
    }
    out[i] = std::move(acc);
  }
  return out;
}

RMatrix operator-(const RMatrix& a, const RMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("matrix dimension mismatch");
  }
  RMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  }
  return out;
}

RVector solve_linear(const RMatrix& a, const RVector& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("solve_linear: matrix is not square");
  if (b.size() != n) throw std::invalid_argument("solve_linear: right-hand side size mismatch");

  RMatrix m = a;
  RVector rhs = b;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m(pivot, col).is_zero()) ++pivot;
    if (pivot == n) {
      throw SingularMatrix("singular matrix: no pivot in column " + std::to_string(col));
    }
    if (pivot != col) {
      for (std::size_t j = col; j < n; ++j) std::swap(m(pivot, j), m(col, j));
      std::swap(rhs[pivot], rhs[col]);
    }
    for (std::size_t row = col + 1; row < n; ++row) {
      if (m(row, col).is_zero()) continue;
      const Rational factor = m(row, col) / m(col, col);
      for (std::size_t j = col + 1; j < n; ++j) {
        if (!m(col, j).is_zero()) m(row, j) -= factor * m(col, j);
      }
      m(row, col) = 0;
      rhs[row] -= factor * rhs[col];
    }
  }

  RVector x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational acc = rhs[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!m(i, j).is_zero()) acc -= m(i, j) * x[j];
    }
    x[i] = acc / m(i, i);
  }
  return x;
}

}  // namespace rdnm
