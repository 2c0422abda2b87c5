// Command-line front end. Models are read from a file or standard input,
// results go to standard output as JSON, traces and diagnostics to standard
// error.
//
// Exit codes: 0 success, 1 parse/validation error, 2 diverged,
// 3 singular Newton step, 4 parameters infeasible.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rdnm/bounds.hpp"
#include "rdnm/decomposition.hpp"
#include "rdnm/driver.hpp"
#include "rdnm/errors.hpp"
#include "rdnm/oracle.hpp"
#include "rdnm/p1ca.hpp"
#include "rdnm/report.hpp"

namespace {

enum Exit : int { kOk = 0, kInvalid = 1, kDiverged = 2, kSingular = 3, kInfeasible = 4 };

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rdnm::ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

rdnm::Rational parse_epsilon(const std::string& text) {
  const rdnm::Rational eps = rdnm::Rational::parse(text);
  if (eps.sign() <= 0 || eps >= rdnm::Rational(1)) {
    throw rdnm::ParseError("--epsilon must lie strictly between 0 and 1");
  }
  return eps;
}

rdnm::Mode parse_mode(const std::string& text) {
  if (text == "certified") return rdnm::Mode::certified;
  if (text == "adaptive") return rdnm::Mode::adaptive;
  throw rdnm::ParseError("--mode must be certified or adaptive");
}

void emit_failure(const char* status, const std::string& message) {
  nlohmann::ordered_json doc;
  doc["schema"] = rdnm::kSolveReportSchemaVersion;
  doc["status"] = status;
  doc["message"] = message;
  std::cout << doc.dump(2) << "\n";
}

rdnm::TraceSink stderr_trace() {
  return [](std::size_t scc, const rdnm::TraceRecord& rec) {
    std::cerr << rdnm::trace_json(scc, rec) << "\n";
  };
}

struct SolveArgs {
  std::string input;
  std::string epsilon = "1/65536";
  std::string mode = "certified";
  bool assume_prob = false;
  std::optional<std::uint64_t> h;
  std::optional<std::uint64_t> iters;
  bool no_snf = false;
  bool trace = false;
  std::uint64_t max_h = 1 << 15;
  unsigned jobs = 1;
  std::optional<std::string> qmax_exponent;
};

struct ModelArgs {
  std::string input;
  bool assume_prob = false;
  bool no_snf = false;
  std::uint64_t steps = 1;
};

struct P1caArgs {
  std::string input;
  std::string epsilon = "1/65536";
  std::string mode = "certified";
  std::uint64_t max_h = 1 << 15;
  unsigned jobs = 1;
  bool trace = false;
};

int run_solve(const SolveArgs& a) {
  const auto sys = rdnm::parse_mps(read_input(a.input));
  rdnm::SolveOptions opt;
  opt.mode = parse_mode(a.mode);
  opt.assume_probabilistic = a.assume_prob;
  opt.use_snf = !a.no_snf;
  opt.h_override = a.h;
  opt.iters_override = a.iters;
  opt.max_h = a.max_h;
  opt.jobs = a.jobs;
  if (a.qmax_exponent) {
    mpz_class e;
    if (e.set_str(*a.qmax_exponent, 10) != 0) throw rdnm::ParseError("--qmax-exponent must be an integer");
    opt.qmax_exponent_override = e;
  }
  if (a.trace) opt.trace = stderr_trace();
  const auto report = rdnm::solve(sys, parse_epsilon(a.epsilon), opt);
  std::cout << rdnm::solve_report_json(report) << "\n";
  return kOk;
}

rdnm::MonotoneSystem prepared(const rdnm::MonotoneSystem& sys, bool no_snf) {
  return no_snf ? sys : rdnm::to_snf(sys).system;
}

int run_bounds(const ModelArgs& a) {
  const auto sys = rdnm::parse_mps(read_input(a.input));
  const auto cleaned = rdnm::clean(prepared(sys, a.no_snf)).system;
  if (cleaned.empty()) {
    std::cout << R"({"n": 0, "qmin_lower": "1", "qmax_upper_exponent": "0"})" << "\n";
    return kOk;
  }
  std::cout << rdnm::bounds_json(cleaned, rdnm::qmin_lower_bound(cleaned),
                                 rdnm::qmax_upper_bound(cleaned, a.assume_prob))
            << "\n";
  return kOk;
}

int run_p1ca_term(const P1caArgs& a) {
  const auto model = rdnm::parse_p1ca(read_input(a.input));
  rdnm::P1caOptions opt;
  opt.mode = parse_mode(a.mode);
  opt.max_h = a.max_h;
  opt.jobs = a.jobs;
  if (a.trace) opt.trace = stderr_trace();
  const auto g = rdnm::termination_probabilities(model, parse_epsilon(a.epsilon), opt);
  std::cout << rdnm::gmatrix_json(g) << "\n";
  return kOk;
}

int run_p1ca_validate(const std::string& input) {
  const auto model = rdnm::parse_p1ca(read_input(input));
  const auto errors = rdnm::validation_errors(model);
  nlohmann::ordered_json doc;
  doc["valid"] = errors.empty();
  doc["violations"] = errors;
  std::cout << doc.dump(2) << "\n";
  return errors.empty() ? kOk : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified least fixed points of monotone polynomial systems"};
  app.require_subcommand(1);
  // "--h" is the rounding parameter, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string("rdnm 1.0 (schemas: ") + rdnm::kMpsSchemaVersion +
                                        ", " + rdnm::kP1caSchemaVersion + ", " +
                                        rdnm::kSolveReportSchemaVersion + ", " +
                                        rdnm::kGMatrixSchemaVersion + ")");

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Approximate the least fixed point");
  solve->add_option("input", solve_args.input, "MPS JSON file (default: stdin)");
  solve->add_option("--epsilon", solve_args.epsilon, "Absolute error bound p/q")->capture_default_str();
  solve->add_option("--mode", solve_args.mode, "certified | adaptive")->capture_default_str();
  solve->add_flag("--assume-prob", solve_args.assume_prob, "Assert q* <= 1");
  solve->add_option("--h", solve_args.h, "Manual rounding parameter of the result grid");
  solve->add_option("--iters", solve_args.iters, "Manual iterations per nonlinear SCC");
  solve->add_flag("--no-snf", solve_args.no_snf, "Skip the normal-form conversion");
  solve->add_flag("--trace", solve_args.trace, "Write iterates as JSON lines to stderr");
  solve->add_option("--max-h", solve_args.max_h, "Ceiling on the rounding parameter")
      ->capture_default_str();
  solve->add_option("--jobs", solve_args.jobs, "Worker threads per SCC level")->capture_default_str();
  solve->add_option("--qmax-exponent", solve_args.qmax_exponent,
                    "Assert q*_max <= 2^E instead of the worst-case bound");

  ModelArgs model_args;
  auto* clean = app.add_subcommand("clean", "Remove variables whose least fixed point is 0");
  clean->add_option("input", model_args.input, "MPS JSON file (default: stdin)");
  auto* snf = app.add_subcommand("snf", "Convert to simple normal form");
  snf->add_option("input", model_args.input, "MPS JSON file (default: stdin)");
  auto* decompose = app.add_subcommand("decompose", "Strongly connected components and depths");
  decompose->add_option("input", model_args.input, "MPS JSON file (default: stdin)");
  auto* bounds = app.add_subcommand("bounds", "Certified bounds on q*_min and q*_max");
  bounds->add_option("input", model_args.input, "MPS JSON file (default: stdin)");
  bounds->add_flag("--assume-prob", model_args.assume_prob, "Assert q* <= 1");
  bounds->add_flag("--no-snf", model_args.no_snf, "Skip the normal-form conversion");
  auto* value_iter = app.add_subcommand("value-iter", "Exact value iteration P^K(0)");
  value_iter->add_option("input", model_args.input, "MPS JSON file (default: stdin)");
  value_iter->add_option("--steps", model_args.steps, "Number of steps K")->capture_default_str();

  P1caArgs p1ca_args;
  auto* p1ca_term = app.add_subcommand("p1ca-term", "Termination probabilities of a p1CA");
  p1ca_term->add_option("input", p1ca_args.input, "p1CA JSON file (default: stdin)");
  p1ca_term->add_option("--epsilon", p1ca_args.epsilon, "Absolute error bound p/q")
      ->capture_default_str();
  p1ca_term->add_option("--mode", p1ca_args.mode, "certified | adaptive")->capture_default_str();
  p1ca_term->add_option("--max-h", p1ca_args.max_h, "Ceiling on the rounding parameter")
      ->capture_default_str();
  p1ca_term->add_option("--jobs", p1ca_args.jobs, "Worker threads per SCC level")
      ->capture_default_str();
  p1ca_term->add_flag("--trace", p1ca_args.trace, "Write iterates as JSON lines to stderr");
  std::string validate_input;
  auto* p1ca_validate = app.add_subcommand("p1ca-validate", "Check p1CA invariants");
  p1ca_validate->add_option("input", validate_input, "p1CA JSON file (default: stdin)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*solve) return run_solve(solve_args);
    if (*clean) {
      const auto sys = rdnm::parse_mps(read_input(model_args.input));
      std::cout << rdnm::clean_json(sys, rdnm::clean(sys)) << "\n";
      return kOk;
    }
    if (*snf) {
      const auto sys = rdnm::parse_mps(read_input(model_args.input));
      std::cout << rdnm::snf_json(rdnm::to_snf(sys), sys) << "\n";
      return kOk;
    }
    if (*decompose) {
      const auto sys = rdnm::parse_mps(read_input(model_args.input));
      std::cout << rdnm::decomposition_json(sys, rdnm::decompose(sys)) << "\n";
      return kOk;
    }
    if (*bounds) return run_bounds(model_args);
    if (*value_iter) {
      const auto sys = rdnm::parse_mps(read_input(model_args.input));
      std::cout << rdnm::vector_json(sys, rdnm::value_iterate(sys, model_args.steps),
                                     model_args.steps)
                << "\n";
      return kOk;
    }
    if (*p1ca_term) return run_p1ca_term(p1ca_args);
    if (*p1ca_validate) return run_p1ca_validate(validate_input);
  } catch (const rdnm::DivergenceCertified& e) {
    emit_failure("diverged", e.what());
    std::cerr << "diverged: " << e.what() << "\n";
    return kDiverged;
  } catch (const rdnm::NoFiniteLfp& e) {
    emit_failure("diverged", e.what());
    std::cerr << "diverged: " << e.what() << "\n";
    return kDiverged;
  } catch (const rdnm::SingularMatrix& e) {
    emit_failure("singular", e.what());
    std::cerr << "singular: " << e.what() << "\n";
    return kSingular;
  } catch (const rdnm::ParamsInfeasible& e) {
    std::cerr << "parameters infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const rdnm::InvalidModel& e) {
    nlohmann::ordered_json doc;
    doc["valid"] = false;
    doc["violations"] = e.violations();
    std::cout << doc.dump(2) << "\n";
    std::cerr << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
