#pragma once

// Rounded-down decomposed Newton's method: SCCs are solved bottom-up, each
// nonlinear SCC by g rounded Newton iterations and each linear SCC by one
// exact solve rounded down to the 2^-h grid.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdnm/bounds.hpp"
#include "rdnm/decomposition.hpp"
#include "rdnm/newton.hpp"
#include "rdnm/system.hpp"

namespace rdnm {

enum class Mode { certified, adaptive };
enum class SolveStatus { certified, adaptive_heuristic, diverged, singular };

std::string_view to_string(Mode mode);
std::string_view to_string(SolveStatus status);

/// Receives every iterate of every SCC; records arrive grouped by SCC in
/// topological order regardless of the number of worker threads.
using TraceSink = std::function<void(std::size_t scc, const TraceRecord& record)>;

struct SolveOptions {
  Mode mode = Mode::certified;
  bool assume_probabilistic = false;
  bool use_snf = true;
  std::optional<std::uint64_t> h_override;
  std::optional<std::uint64_t> iters_override;
  /// Replaces the worst-case q*_max exponent with a caller-supplied one.
  std::optional<mpz_class> qmax_exponent_override;
  std::uint64_t max_h = 1 << 15;
  /// Value-iteration steps spent looking for a divergence certificate.
  std::uint64_t probe_steps = 64;
  unsigned jobs = 1;
  TraceSink trace;
};

struct DriverParams {
  Rational alpha;
  std::uint64_t h = 0;            // grid of the system actually iterated (rescaled if u > 0)
  std::uint64_t g = 0;            // iterations per nonlinear SCC
  std::uint64_t u = 0;            // rescaling exponent
  std::uint64_t h_effective = 0;  // h - u, the grid of the returned approximation
  Mode mode = Mode::certified;
};

struct LfpBounds {
  Rational qmin_lower;
  BoundSource qmin_source = BoundSource::worst_case_formula;
  mpz_class qmax_exponent;  // q*_max <= 2^qmax_exponent
  BoundSource qmax_source = BoundSource::worst_case_formula;
};

struct SccSummary {
  std::size_t index = 0;
  std::vector<std::string> vars;
  bool nonlinear = false;
  std::uint64_t budget = 0;      // g for nonlinear SCCs, 1 for linear ones
  std::uint64_t iterations = 0;  // Newton steps actually computed
  std::optional<std::uint64_t> stalled_at;
  Rational final_residual;
};

struct SolveReport {
  std::vector<std::string> names;  // original variables
  DyadicVector approximation;      // original order, cleaned zeros exactly 0
  Rational epsilon;
  DriverParams params;
  LfpBounds bounds;
  SolveStatus status = SolveStatus::certified;
  std::size_t solved_variables = 0;  // after SNF and cleaning
  std::size_t depth = 0;
  std::size_t nonlinear_depth = 0;
  std::uint64_t encoding_bits = 0;
  std::vector<SccSummary> sccs;
  Rational residual;  // ||P(q~) - q~||_inf on the input system
  mpz_class k_p;  // g - c_p * ceil(log2(1/epsilon)), iterations not tied to precision
  mpz_class c_p;         // iterations per bit of precision, 2^f
  std::vector<std::string> notes;
};

/// Computes the certified (h, g, alpha) for a cleaned system; throws
/// ParamsInfeasible when h would exceed max_h.
DriverParams certified_params(const MonotoneSystem& cleaned, const Decomposition& dec,
                              const Rational& qmin_lower, std::uint64_t u, const Rational& epsilon,
                              std::uint64_t max_h);

struct RdnmOptions {
  std::optional<mpz_class> divergence_exponent;
  unsigned jobs = 1;
  TraceSink trace;
};

struct RdnmOutcome {
  DyadicVector x;
  std::vector<SccSummary> sccs;
};

/// Bottom-up R-DNM over a cleaned quadratic system. `iterations(s)` gives the
/// budget of nonlinear SCC s; linear SCCs always take one step.
RdnmOutcome run_rdnm(const MonotoneSystem& cleaned, const Decomposition& dec, std::uint64_t h,
                     const std::function<std::uint64_t(std::size_t)>& iterations,
                     const RdnmOptions& options = {});

/// Rounded-down value iteration from 0 for at most `steps` steps. Throws
/// DivergenceCertified as soon as a coordinate exceeds 2^exponent; the
/// iterates are lower bounds on q*, so this certifies q* is not below it.
void probe_divergence(const MonotoneSystem& sys, const mpz_class& exponent, std::uint64_t steps);

/// Full pipeline: SNF, cleaning, decomposition, bounds, parameters, R-DNM.
/// Throws SingularMatrix, DivergenceCertified, ParamsInfeasible.
SolveReport solve(const MonotoneSystem& sys, const Rational& epsilon,
                  const SolveOptions& options = {});

}  // namespace rdnm
