#include "rdnm/newton.hpp"

#include <stdexcept>
#include <string>

namespace rdnm {

void RnmConfig::validate(bool certified) const {
  if (h < 1) throw std::invalid_argument("rounding parameter h must be >= 1");
  if (g < 1) throw std::invalid_argument("iteration count g must be >= 1");
  if (certified && g + 1 < h) {
    throw std::invalid_argument("certified mode needs g >= h - 1 (h=" + std::to_string(h) +
                                ", g=" + std::to_string(g) + ")");
  }
}

RVector newton_step(const MonotoneSystem& sys, const RVector& z) {
  const RMatrix lhs = RMatrix::identity(sys.size()) - eval_jacobian(sys, z);
  const RVector delta = solve_linear(lhs, eval(sys, z) - z);
  return z + delta;
}

bool exceeds_pow2(const Rational& v, const mpz_class& exponent) {
  if (v.sign() <= 0) return false;
  return mpz_class(static_cast<long>(ceil_log2(v))) > exponent;
}

namespace {

Rational residual(const MonotoneSystem& sys, const RVector& x) {
  return (eval(sys, x) - x).norm_inf();
}

}  // namespace

RnmResult run_rnm(const MonotoneSystem& sys, const RnmConfig& cfg, const RnmOptions& options) {
  cfg.validate(false);
  const std::size_t n = sys.size();
  RnmResult result;
  result.x.assign(n, Dyadic(0, cfg.h));

  auto record = [&](std::uint64_t k, const RVector& xv) {
    if (!options.record_trace && !options.on_step) return;
    TraceRecord rec{k, result.x, residual(sys, xv)};
    if (options.on_step) options.on_step(rec);
    if (options.record_trace) result.trace.push_back(std::move(rec));
  };

  RVector current(n);
  record(0, current);
  for (std::uint64_t k = 1; k <= cfg.g; ++k) {
    const RVector next = newton_step(sys, current);
    DyadicVector rounded;
    rounded.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      rounded.push_back(Dyadic::round_down(next[i], cfg.h));
      if (options.divergence_exponent &&
          exceeds_pow2(rounded.back().value(), *options.divergence_exponent)) {
        throw DivergenceCertified("iterate " + std::to_string(k) + " coordinate " + sys.name(i) +
                                  " exceeds the upper bound 2^" +
                                  options.divergence_exponent->get_str() + " on q*");
      }
    }
    result.iterations = k;
    if (rounded == result.x) {
      result.stalled_at = k - 1;
      break;
    }
    result.x = std::move(rounded);
    current = RVector::from(result.x);
    record(k, current);
  }
  return result;
}

RnmConfig certify_params_scc(std::size_t n, const Rational& alpha, const Rational& epsilon) {
  if (alpha.sign() <= 0 || alpha > Rational(1)) throw std::invalid_argument("alpha must be in (0,1]");
  if (epsilon.sign() <= 0 || epsilon >= Rational(1)) {
    throw std::invalid_argument("epsilon must be in (0,1)");
  }
  // 2 + n log(1/alpha) + log(1/epsilon) = 2 + log(alpha^-n / epsilon).
  const Rational growth = alpha.reciprocal().pow(n) / epsilon;
  const auto h = static_cast<std::uint64_t>(2 + ceil_log2(growth));
  return RnmConfig{h, h - 1};
}

}  // namespace rdnm
