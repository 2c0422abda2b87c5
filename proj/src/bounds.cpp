#include "rdnm/bounds.hpp"

#include <algorithm>

namespace rdnm {

namespace {

// Exact values above this many bits are not materialized.
constexpr std::uint64_t kMaxBoundBits = std::uint64_t{1} << 20;
// Grid for the rounded-down fallback of the iteration bound.
constexpr std::uint64_t kFallbackGridBits = 4096;

std::uint64_t rational_bits(const Rational& v) { return bit_length(v.num()) + bit_length(v.den()); }

std::optional<Rational> iteration_bound(const MonotoneSystem& sys) {
  const std::size_t n = sys.size();
  RVector y(n);
  bool rounding = false;
  for (std::size_t k = 0; k < n; ++k) {
    y = eval(sys, y);
    if (!rounding) {
      rounding = std::any_of(y.begin(), y.end(),
                             [](const Rational& v) { return rational_bits(v) > kMaxBoundBits; });
    }
    // Rounding down keeps y <= P^k(0) <= q* because P is monotone.
    if (rounding) {
      for (std::size_t i = 0; i < n; ++i) y[i] = Dyadic::round_down(y[i], kFallbackGridBits).value();
    }
  }
  Rational lowest = y[0];
  for (const auto& v : y) lowest = min(lowest, v);
  if (lowest.sign() <= 0) return std::nullopt;
  return lowest;
}

}  // namespace

std::string_view to_string(BoundSource source) {
  switch (source) {
    case BoundSource::worst_case_formula: return "worst-case-formula";
    case BoundSource::value_iteration: return "value-iteration";
    case BoundSource::user_asserted: return "user-asserted";
    case BoundSource::probability_flag: return "probability-flag";
  }
  return "unknown";
}

QminLowerBound qmin_lower_bound(const MonotoneSystem& sys) {
  QminLowerBound out;
  if (sys.empty()) {
    out.value = 1;
    return out;
  }
  const std::size_t n = sys.size();
  const auto c_min = sys.c_min();
  if (!c_min) throw std::invalid_argument("qmin_lower_bound: system is not cleaned");

  // 2^n - 1 as a machine integer when it is small enough to matter.
  const bool small_n = n < 60;
  const std::uint64_t steps = small_n ? (std::uint64_t{1} << n) - 1 : 0;

  QminCandidates& c = out.candidates;
  if (*c_min >= Rational(1)) {
    c.coefficient_bound = Rational(1);
  } else if (small_n && rational_bits(*c_min) <= kMaxBoundBits / steps) {
    c.coefficient_bound = c_min->pow(steps);
  }
  const std::uint64_t size_bits = encoding_size(sys).bits;
  if (small_n && size_bits <= kMaxBoundBits / steps) {
    c.size_bound = Rational::pow2(-static_cast<std::int64_t>(size_bits * steps));
  }
  c.iteration_bound = iteration_bound(sys);

  bool found = false;
  auto consider = [&](const std::optional<Rational>& v, BoundSource source) {
    if (v && (!found || out.value < *v)) {
      out.value = *v;
      out.source = source;
      found = true;
    }
  };
  consider(c.coefficient_bound, BoundSource::worst_case_formula);
  consider(c.size_bound, BoundSource::worst_case_formula);
  consider(c.iteration_bound, BoundSource::value_iteration);
  if (!found) throw ParamsInfeasible("no representable lower bound on q*_min");
  return out;
}

mpz_class qmax_exponent_formula(std::size_t n, std::uint64_t encoding_bits) {
  const mpz_class n1(static_cast<unsigned long>(n + 1));
  const auto log_term = ceil_log2(Rational(mpz_class(static_cast<unsigned long>(2 * n + 2))));
  mpz_class five_pow;
  mpz_ui_pow_ui(five_pow.get_mpz_t(), 5, n);
  const mpz_class inner = mpz_class(static_cast<unsigned long>(encoding_bits)) +
                          2 * n1 * mpz_class(static_cast<long>(log_term));
  return 2 * n1 * inner * five_pow;
}

QmaxUpperBound qmax_upper_bound(const MonotoneSystem& sys, bool assume_probabilistic) {
  if (assume_probabilistic) return QmaxUpperBound{mpz_class(0), BoundSource::probability_flag};
  return QmaxUpperBound{qmax_exponent_formula(sys.size(), encoding_size(sys).bits),
                        BoundSource::worst_case_formula};
}

MonotoneSystem rescale(const MonotoneSystem& sys, std::uint64_t u) {
  if (u == 0) return sys;
  std::vector<Polynomial> equations = sys.equations();
  const auto shift = static_cast<std::int64_t>(u);
  for (auto& poly : equations) {
    for (auto& m : poly) {
      const auto k = static_cast<std::int64_t>(m.degree());
      m.coefficient = m.coefficient.times_pow2(shift * (k - 1));
    }
  }
  return MonotoneSystem(sys.names(), std::move(equations));
}

Rational perturbation_bound(const MonotoneSystem& scc_sys, const Rational& alpha,
                            const Rational& norm_p1, const Rational& dy, bool linear) {
  if (alpha.sign() <= 0 || alpha > Rational(1)) throw std::invalid_argument("alpha must be in (0,1]");
  if (dy.sign() < 0) throw std::invalid_argument("dy must be >= 0");
  if (dy.is_zero()) return Rational();
  const std::uint64_t n = scc_sys.size();
  const Rational inv_alpha = alpha.reciprocal();
  if (linear) {
    return Rational(static_cast<long>(2 * n)) * inv_alpha.pow(n + 2) * norm_p1 * dy;
  }
  return sqrt_upper(Rational(static_cast<long>(4 * n)) * inv_alpha.pow(3 * n + 1) * norm_p1 * dy);
}

}  // namespace rdnm
