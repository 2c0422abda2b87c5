#pragma once

// Probabilistic one-counter automata and their termination probabilities
// (the G-matrix) computed by rounded decomposed Newton.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdnm/driver.hpp"
#include "rdnm/exact.hpp"
#include "rdnm/system.hpp"

namespace rdnm {

struct P1caTransition {
  std::string from;
  Rational p;
  int k = 0;  // counter change: -1, 0 or +1
  std::string to;
};

struct P1CA {
  std::vector<std::string> states;
  std::vector<P1caTransition> delta;   // counter > 0
  std::vector<P1caTransition> delta0;  // counter = 0; no decrements
};

/// {"states":[...], "delta":[{"from","p","k","to"}...], "delta0":[...]}.
/// Throws ParseError on malformed documents; semantic checks are left to
/// validate.
P1CA parse_p1ca(std::string_view text);

/// Every violated invariant, in a stable order; empty when valid.
std::vector<std::string> validation_errors(const P1CA& model);

/// Throws InvalidModel listing every violation.
void validate(const P1CA& model);

/// Index of variable x_uv among the r^2 variables, u-major.
inline std::size_t pair_index(std::size_t u, std::size_t v, std::size_t r) { return u * r + v; }

/// x_uv = p(-1)_uv + sum_w p(0)_uw x_wv + sum_y p(+1)_uy sum_z x_yz x_zv,
/// with variable x_uv named "u→v".
MonotoneSystem build_termination_mps(const P1CA& model);

/// Rounding parameter for termination probabilities:
///   8 m r^7 + 2 m r^5 + c r^k + 3 + ceil(2 log2(1/eps)),
/// with c r^k = 9 r^4 (used) or 9 r^2 (reported only).
struct P1caRounding {
  std::uint64_t m = 0;  // max bit length of any probability's numerator/denominator
  std::uint64_t r = 0;
  mpz_class h_r4;  // with 9 r^4
  mpz_class h_r2;  // with 9 r^2
};

P1caRounding p1ca_rounding(const P1CA& model, const Rational& epsilon);

struct P1caOptions {
  Mode mode = Mode::certified;
  std::uint64_t max_h = 1 << 15;
  unsigned jobs = 1;
  TraceSink trace;
};

struct GMatrix {
  std::vector<std::string> states;
  std::vector<std::vector<Dyadic>> entries;  // entries[u][v] approximates q*_uv
  std::vector<std::vector<bool>> zero;       // q*_uv = 0 exactly
  Rational epsilon;
  P1caRounding rounding;
  std::uint64_t h = 0;  // grid actually used
  std::uint64_t g = 0;  // iterations per nonlinear SCC
  std::size_t nonlinear_depth = 0;
  SolveStatus status = SolveStatus::certified;
  Mode mode = Mode::certified;
  Rational c_min;           // smallest transition probability in delta
  Rational qmin_floor;  // c_min^(r^3) when representable, else 0
};

/// Throws InvalidModel, StructureViolation (nonlinear depth above 1),
/// ParamsInfeasible (certified h above the ceiling).
GMatrix termination_probabilities(const P1CA& model, const Rational& epsilon,
                                  const P1caOptions& options = {});

}  // namespace rdnm
