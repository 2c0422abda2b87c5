#pragma once

// Certified bounds on the least fixed point, rescaling, and the
// perturbation estimate for an SCC whose inputs move.

#include <cstdint>
#include <optional>
#include <string_view>

#include "rdnm/exact.hpp"
#include "rdnm/system.hpp"

namespace rdnm {

enum class BoundSource { worst_case_formula, value_iteration, user_asserted, probability_flag };

std::string_view to_string(BoundSource source);

/// The three lower bounds on q*_min; a candidate is absent when its exact
/// value would exceed the representation budget.
struct QminCandidates {
  std::optional<Rational> coefficient_bound;  // min{1, c_min}^(2^n - 1)
  std::optional<Rational> size_bound;         // 2^(-|P| (2^n - 1))
  std::optional<Rational> iteration_bound;    // min_i P^n(0)_i
};

struct QminLowerBound {
  Rational value;
  BoundSource source = BoundSource::worst_case_formula;
  QminCandidates candidates;
};

/// Largest of the available candidates. Requires a cleaned system; throws
/// ParamsInfeasible when no candidate fits the budget.
QminLowerBound qmin_lower_bound(const MonotoneSystem& sys);

/// q*_max <= 2^exponent.
struct QmaxUpperBound {
  mpz_class exponent;
  BoundSource source = BoundSource::worst_case_formula;
};

/// 2(n+1)(|P| + 2(n+1) ceil(log2(2n+2))) 5^n.
mpz_class qmax_exponent_formula(std::size_t n, std::uint64_t encoding_bits);

/// Exponent 0 (bound 1) when the system is asserted to describe
/// probabilities, otherwise the worst-case formula.
QmaxUpperBound qmax_upper_bound(const MonotoneSystem& sys, bool assume_probabilistic);

/// x = 2^-u P(2^u x): a degree-k coefficient is multiplied by 2^(u(k-1)).
/// The least fixed point of the result is 2^-u q*.
MonotoneSystem rescale(const MonotoneSystem& sys, std::uint64_t u);

/// Upper bound on how far the LFP of an SCC moves when its lower-SCC inputs
/// drop by dy:
///   linear:    2n alpha^-(n+2) ||P(1,1)|| dy
///   nonlinear: sqrt(4n alpha^-(3n+1) ||P(1,1)|| dy), square root rounded up.
Rational perturbation_bound(const MonotoneSystem& scc_sys, const Rational& alpha,
                            const Rational& norm_p1, const Rational& dy, bool linear);

}  // namespace rdnm
