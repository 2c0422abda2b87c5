#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rdnm/exact.hpp"
#include "rdnm/system.hpp"

namespace rdnm {

/// Rounding parameter h (grid 2^-h) and iteration budget g.
struct RnmConfig {
  std::uint64_t h = 1;
  std::uint64_t g = 1;

  /// Throws std::invalid_argument unless h, g >= 1 and, when certified,
  /// g >= h - 1.
  void validate(bool certified) const;
};

struct TraceRecord {
  std::uint64_t k = 0;
  DyadicVector x;
  Rational residual;  // ||P(x) - x||_inf
};

using IterationTrace = std::vector<TraceRecord>;

struct RnmOptions {
  /// Iterates above 2^exponent raise DivergenceCertified.
  std::optional<mpz_class> divergence_exponent;
  bool record_trace = true;
  /// Called once per iterate, including x^[0].
  std::function<void(const TraceRecord&)> on_step;
};

struct RnmResult {
  DyadicVector x;        // x^[g]
  IterationTrace trace;  // x^[0], x^[1], ... up to the last distinct iterate
  std::uint64_t iterations = 0;
  /// Set when x^[k+1] == x^[k]; every later iterate equals x^[k] as well.
  std::optional<std::uint64_t> stalled_at;
};

/// N_P(z) = z + (I - B(z))^-1 (P(z) - z). Throws SingularMatrix.
RVector newton_step(const MonotoneSystem& sys, const RVector& z);

/// Rounded-down Newton: x^[0] = 0, x^[k+1] = round_down(N_P(x^[k]), h).
RnmResult run_rnm(const MonotoneSystem& sys, const RnmConfig& cfg, const RnmOptions& options = {});

/// h = ceil(2 + n log2(1/alpha) + log2(1/epsilon)) evaluated exactly, g = h - 1.
RnmConfig certify_params_scc(std::size_t n, const Rational& alpha, const Rational& epsilon);

/// v > 2^exponent, decided without materializing 2^exponent.
bool exceeds_pow2(const Rational& v, const mpz_class& exponent);

}  // namespace rdnm
