#include "rdnm/driver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

namespace rdnm {

namespace {

// Grid of the rounded value iteration used as a divergence probe.
constexpr std::uint64_t kProbeGridBits = 64;
// Slack between the floating-point size estimate and the exact check.
constexpr double kEstimateSlackBits = 64.0;

double approx_log2(const Rational& v) {
  long num_exp = 0;
  long den_exp = 0;
  const double num_m = mpz_get_d_2exp(&num_exp, v.num().get_mpz_t());
  const double den_m = mpz_get_d_2exp(&den_exp, v.den().get_mpz_t());
  return std::log2(num_m / den_m) + static_cast<double>(num_exp - den_exp);
}

struct SccJob {
  RnmResult result;
  MonotoneSystem system;
};

SccJob solve_scc(const MonotoneSystem& cleaned, const Scc& scc, const RVector& lower,
                 std::uint64_t h, std::uint64_t g, const RdnmOptions& options) {
  SccJob job;
  job.system = substitute(cleaned, scc.vars, lower);
  RnmOptions rnm;
  rnm.divergence_exponent = options.divergence_exponent;
  rnm.record_trace = static_cast<bool>(options.trace);
  job.result = run_rnm(job.system, RnmConfig{h, g}, rnm);
  return job;
}

}  // namespace

std::string_view to_string(Mode mode) {
  return mode == Mode::certified ? "certified" : "adaptive";
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::certified: return "certified-eps";
    case SolveStatus::adaptive_heuristic: return "adaptive-heuristic";
    case SolveStatus::diverged: return "diverged";
    case SolveStatus::singular: return "singular";
  }
  return "unknown";
}

DriverParams certified_params(const MonotoneSystem& cleaned, const Decomposition& dec,
                              const Rational& qmin_lower, std::uint64_t u, const Rational& epsilon,
                              std::uint64_t max_h) {
  if (epsilon.sign() <= 0 || epsilon >= Rational(1)) {
    throw std::invalid_argument("epsilon must be in (0,1)");
  }
  const std::uint64_t n = cleaned.size();
  const std::uint64_t d = dec.depth;
  const std::uint64_t f = dec.nonlinear_depth;
  const auto c_min = cleaned.c_min();
  if (!c_min) throw std::invalid_argument("certified_params: system is not cleaned");

  DriverParams p;
  p.mode = Mode::certified;
  p.u = u;
  const auto two_u = static_cast<std::int64_t>(2 * u);
  p.alpha = Rational::pow2(-two_u) * min(Rational(1), *c_min) *
            min(Rational(1), qmin_lower / Rational(2));
  const Rational norm = norm_at_ones(cleaned);

  // Size of g in bits before anything is materialized.
  const double per_level = 2.0 * static_cast<double>(u) +
                           static_cast<double>(4 * n + 1) * -approx_log2(p.alpha) +
                           std::log2(16.0 * static_cast<double>(n)) + approx_log2(norm);
  const double estimate =
      std::ldexp(approx_log2(epsilon.reciprocal()) + static_cast<double>(d) * per_level,
                 static_cast<int>(std::min<std::uint64_t>(f, 1024)));
  if (f >= 63 || !(estimate <= static_cast<double>(max_h) + kEstimateSlackBits)) {
    throw ParamsInfeasible("certified rounding parameter is about 2^" +
                           std::to_string(std::log2(std::max(estimate, 1.0))) +
                           " bits, above the ceiling " + std::to_string(max_h));
  }

  // g = 2 + ceil(log2 X), X = (1/eps * (2^2u alpha^-(4n+1) 16n ||P(1)||)^d)^(2^f).
  const Rational level = Rational::pow2(two_u) * p.alpha.reciprocal().pow(4 * n + 1) *
                         Rational(static_cast<long>(16 * n)) * norm;
  const Rational x = (epsilon.reciprocal() * level.pow(d)).pow(std::uint64_t{1} << f);
  const std::int64_t g = std::max<std::int64_t>(2 + ceil_log2(x), 1);
  p.g = static_cast<std::uint64_t>(g);
  p.h = std::max(p.g + 1, u + 1);
  p.h_effective = p.h - u;
  if (p.h > max_h) {
    throw ParamsInfeasible("certified rounding parameter h=" + std::to_string(p.h) +
                           " exceeds the ceiling " + std::to_string(max_h));
  }
  return p;
}

RdnmOutcome run_rdnm(const MonotoneSystem& cleaned, const Decomposition& dec, std::uint64_t h,
                     const std::function<std::uint64_t(std::size_t)>& iterations,
                     const RdnmOptions& options) {
  const std::size_t n = cleaned.size();
  RdnmOutcome out;
  out.x.assign(n, Dyadic(0, h));
  out.sccs.resize(dec.sccs.size());
  RVector lower(n);

  for (const auto& level : dec.levels()) {
    std::vector<SccJob> jobs(level.size());
    auto budget = [&](std::size_t s) {
      return dec.sccs[s].nonlinear ? iterations(s) : std::uint64_t{1};
    };
    const std::size_t width = std::max(1u, options.jobs);
    for (std::size_t start = 0; start < level.size(); start += width) {
      const std::size_t stop = std::min(level.size(), start + width);
      if (width == 1) {
        const std::size_t s = level[start];
        jobs[start] = solve_scc(cleaned, dec.sccs[s], lower, h, budget(s), options);
        continue;
      }
      std::vector<std::future<SccJob>> pending;
      for (std::size_t i = start; i < stop; ++i) {
        const std::size_t s = level[i];
        pending.push_back(std::async(std::launch::async, [&, s] {
          return solve_scc(cleaned, dec.sccs[s], lower, h, budget(s), options);
        }));
      }
      // get() in SCC order so the reported error does not depend on timing.
      for (std::size_t i = start; i < stop; ++i) jobs[i] = pending[i - start].get();
    }

    // Publish the level only after all of its SCCs are done.
    for (std::size_t i = 0; i < level.size(); ++i) {
      const std::size_t s = level[i];
      const Scc& scc = dec.sccs[s];
      const SccJob& job = jobs[i];
      for (std::size_t k = 0; k < scc.vars.size(); ++k) {
        out.x[scc.vars[k]] = job.result.x[k];
        lower[scc.vars[k]] = job.result.x[k].value();
      }
      SccSummary& summary = out.sccs[s];
      summary.index = s;
      for (auto v : scc.vars) summary.vars.push_back(cleaned.name(v));
      summary.nonlinear = scc.nonlinear;
      summary.budget = budget(s);
      summary.iterations = job.result.iterations;
      summary.stalled_at = job.result.stalled_at;
      summary.final_residual = (eval(job.system, RVector::from(job.result.x)) -
                                RVector::from(job.result.x)).norm_inf();
    }
    if (options.trace) {
      std::vector<std::size_t> order(level);
      std::sort(order.begin(), order.end());
      for (auto s : order) {
        const auto pos = static_cast<std::size_t>(
            std::find(level.begin(), level.end(), s) - level.begin());
        for (const auto& rec : jobs[pos].result.trace) options.trace(s, rec);
      }
    }
  }
  return out;
}

void probe_divergence(const MonotoneSystem& sys, const mpz_class& exponent, std::uint64_t steps) {
  RVector y(sys.size());
  for (std::uint64_t k = 1; k <= steps; ++k) {
    const RVector previous = y;
    const RVector next = eval(sys, y);
    for (std::size_t i = 0; i < sys.size(); ++i) {
      // Rounded-down iterates stay below P^k(0), hence below q*.
      y[i] = Dyadic::round_down(next[i], kProbeGridBits).value();
      if (exceeds_pow2(y[i], exponent)) {
        throw DivergenceCertified("value iteration step " + std::to_string(k) + " puts " +
                                  sys.name(i) + " above the upper bound 2^" + exponent.get_str() +
                                  " on q*");
      }
    }
    if (y == previous) return;  // the rounded map has reached a fixed point
  }
}

namespace {

struct Prepared {
  SnfSystem snf;
  CleanedSystem cleaned;
  Decomposition dec;
};

Prepared prepare(const MonotoneSystem& sys, bool use_snf) {
  Prepared p;
  if (use_snf) {
    p.snf = to_snf(sys);
  } else {
    if (sys.max_degree() > 2) {
      throw DegreeTooHigh("system has degree " + std::to_string(sys.max_degree()) +
                          "; enable the normal-form conversion");
    }
    p.snf.system = sys;
    p.snf.forms.clear();
    p.snf.projection.resize(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i) p.snf.projection[i] = i;
  }
  p.cleaned = clean(p.snf.system);
  p.dec = decompose(p.cleaned.system);
  return p;
}

DyadicVector lift(const Prepared& p, const DyadicVector& solved, std::uint64_t scale,
                  std::size_t original_size) {
  DyadicVector snf_values(p.snf.system.size(), Dyadic(0, scale));
  for (std::size_t k = 0; k < solved.size(); ++k) snf_values[p.cleaned.original_index[k]] = solved[k];
  DyadicVector out;
  out.reserve(original_size);
  for (std::size_t i = 0; i < original_size; ++i) out.push_back(snf_values[p.snf.projection[i]]);
  return out;
}

bool within(const DyadicVector& a, const DyadicVector& b, const Rational& tol) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i].value() - b[i].value()).abs() > tol) return false;
  }
  return true;
}

}  // namespace

SolveReport solve(const MonotoneSystem& sys, const Rational& epsilon, const SolveOptions& options) {
  if (epsilon.sign() <= 0 || epsilon >= Rational(1)) {
    throw std::invalid_argument("epsilon must be in (0,1)");
  }
  SolveReport report;
  report.names = sys.names();
  report.epsilon = epsilon;
  report.params.mode = options.mode;

  const Prepared prep = prepare(sys, options.use_snf);
  const MonotoneSystem& cleaned = prep.cleaned.system;
  report.solved_variables = cleaned.size();
  report.depth = prep.dec.depth;
  report.nonlinear_depth = prep.dec.nonlinear_depth;
  report.encoding_bits = encoding_size(cleaned).bits;

  if (cleaned.empty()) {
    report.params.alpha = 1;
    report.params.h = report.params.h_effective = 1;
    report.params.g = 1;
    report.bounds.qmin_lower = 1;
    report.approximation = lift(prep, {}, 1, sys.size());
    report.status = SolveStatus::certified;
    report.c_p = 1;
    return report;
  }

  // Bounds on q*.
  const QminLowerBound qmin = qmin_lower_bound(cleaned);
  report.bounds.qmin_lower = qmin.value;
  report.bounds.qmin_source = qmin.source;
  if (options.qmax_exponent_override) {
    report.bounds.qmax_exponent = *options.qmax_exponent_override;
    report.bounds.qmax_source = BoundSource::user_asserted;
  } else {
    const QmaxUpperBound qmax = qmax_upper_bound(cleaned, options.assume_probabilistic);
    report.bounds.qmax_exponent = qmax.exponent;
    report.bounds.qmax_source = qmax.source;
  }
  const mpz_class& e_max = report.bounds.qmax_exponent;

  probe_divergence(cleaned, e_max, options.probe_steps);

  const bool manual = options.h_override || options.iters_override;
  std::uint64_t u = 0;
  if (options.mode == Mode::certified && e_max > 0) {
    if (!e_max.fits_ulong_p() || e_max.get_ui() >= options.max_h) {
      throw ParamsInfeasible("rescaling exponent " + e_max.get_str() + " exceeds the ceiling " +
                             std::to_string(options.max_h));
    }
    u = e_max.get_ui();
  }

  std::optional<DriverParams> certified;
  if (options.mode == Mode::certified) {
    try {
      certified = certified_params(cleaned, prep.dec, qmin.value, u, epsilon, options.max_h);
    } catch (const ParamsInfeasible& e) {
      if (!manual) throw;
      report.notes.push_back(std::string("certified parameters unavailable: ") + e.what());
    }
  }

  RdnmOptions run_opts;
  run_opts.jobs = options.jobs;
  run_opts.trace = options.trace;
  run_opts.divergence_exponent = e_max - static_cast<unsigned long>(u);

  auto run = [&](const MonotoneSystem& target, std::uint64_t h, std::uint64_t g) {
    return run_rdnm(target, prep.dec, h, [g](std::size_t) { return g; }, run_opts);
  };

  DyadicVector solved;
  std::vector<SccSummary> summaries;
  DriverParams& params = report.params;
  params.u = u;

  if (manual) {
    // The manual grid is that of the returned approximation.
    std::uint64_t h_eff = 0;
    std::uint64_t g = 0;
    if (options.h_override) {
      h_eff = *options.h_override;
      g = options.iters_override.value_or(h_eff + u - 1);
    } else {
      g = *options.iters_override;
      h_eff = g + 1 - std::min(u, g);
    }
    if (h_eff < 1 || g < 1) throw std::invalid_argument("--h and --iters must be >= 1");
    params.h = h_eff + u;
    params.h_effective = h_eff;
    params.g = g;
    params.alpha = certified ? certified->alpha : Rational(0);
    const bool dominates = certified && params.h >= certified->h && params.g + 1 >= params.h;
    report.status = dominates ? SolveStatus::certified : SolveStatus::adaptive_heuristic;
    const MonotoneSystem target = rescale(cleaned, u);
    auto outcome = run(target, params.h, params.g);
    solved = std::move(outcome.x);
    summaries = std::move(outcome.sccs);
  } else if (options.mode == Mode::certified) {
    params = *certified;
    const MonotoneSystem target = rescale(cleaned, u);
    auto outcome = run(target, params.h, params.g);
    solved = std::move(outcome.x);
    summaries = std::move(outcome.sccs);
    report.status = SolveStatus::certified;
  } else {
    // Adaptive: double h until two consecutive levels agree within eps/4.
    const Rational tol = epsilon / Rational(4);
    std::uint64_t h = static_cast<std::uint64_t>(ceil_log2(epsilon.reciprocal())) + 8;
    std::optional<DyadicVector> previous;
    while (true) {
      if (h > options.max_h) {
        throw ParamsInfeasible("adaptive refinement did not settle below h=" +
                               std::to_string(options.max_h));
      }
      auto outcome = run(cleaned, h, h - 1);
      const bool settled = previous && within(*previous, outcome.x, tol);
      previous = outcome.x;
      solved = std::move(outcome.x);
      summaries = std::move(outcome.sccs);
      params.h = params.h_effective = h;
      params.g = h - 1;
      if (settled) break;
      h *= 2;
    }
    params.alpha = min(Rational(1), *cleaned.c_min()) * qmin.value / Rational(2);
    params.mode = Mode::adaptive;
    report.status = SolveStatus::adaptive_heuristic;
  }

  for (auto& v : solved) v = v.times_pow2(static_cast<std::int64_t>(u));
  report.approximation = lift(prep, solved, params.h_effective, sys.size());
  report.sccs = std::move(summaries);

  RVector approx(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) approx[i] = report.approximation[i].value();
  report.residual = (eval(sys, approx) - approx).norm_inf();

  const auto f = std::min<std::size_t>(report.nonlinear_depth, 4096);
  mpz_class c_p;
  mpz_ui_pow_ui(c_p.get_mpz_t(), 2, f);
  report.c_p = c_p;
  report.k_p = mpz_class(static_cast<unsigned long>(params.g)) -
               c_p * mpz_class(static_cast<long>(ceil_log2(epsilon.reciprocal())));
  return report;
}

}  // namespace rdnm
