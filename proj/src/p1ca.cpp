#include "rdnm/p1ca.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"

#include "rdnm/decomposition.hpp"
#include "rdnm/errors.hpp"

namespace rdnm {

namespace {

using nlohmann::json;

std::vector<P1caTransition> parse_transitions(const json& doc, const char* key) {
  std::vector<P1caTransition> out;
  if (!doc.contains(key)) return out;
  const json& list = doc.at(key);
  if (!list.is_array()) throw ParseError(std::string("\"") + key + "\" must be an array");
  for (const json& t : list) {
    if (!t.is_object()) throw ParseError(std::string("entries of \"") + key + "\" must be objects");
    for (const char* field : {"from", "p", "k", "to"}) {
      if (!t.contains(field)) {
        throw ParseError(std::string("transition in \"") + key + "\" lacks \"" + field + "\"");
      }
    }
    if (!t.at("from").is_string() || !t.at("to").is_string()) {
      throw ParseError("transition endpoints must be strings");
    }
    if (!t.at("p").is_string()) throw ParseError("probabilities must be \"p/q\" strings");
    if (!t.at("k").is_number_integer()) throw ParseError("counter change k must be an integer");
    out.push_back(P1caTransition{t.at("from").get<std::string>(),
                                 Rational::parse(t.at("p").get<std::string>()),
                                 t.at("k").get<int>(), t.at("to").get<std::string>()});
  }
  return out;
}

std::string describe(const P1caTransition& t) {
  return "(" + t.from + ", " + t.p.str() + ", " + std::to_string(t.k) + ", " + t.to + ")";
}

Monomial product(VarIndex a, VarIndex b, const Rational& c) {
  Monomial m;
  m.coefficient = c;
  if (a == b) {
    m.exponents = {{a, 2}};
  } else {
    m.exponents = {{std::min(a, b), 1}, {std::max(a, b), 1}};
  }
  return m;
}

}  // namespace

P1CA parse_p1ca(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("p1CA document must be an object");
  if (!doc.contains("states") || !doc.at("states").is_array()) {
    throw ParseError("p1CA document needs a \"states\" array");
  }
  P1CA model;
  for (const json& s : doc.at("states")) {
    if (!s.is_string()) throw ParseError("state names must be strings");
    model.states.push_back(s.get<std::string>());
  }
  model.delta = parse_transitions(doc, "delta");
  model.delta0 = parse_transitions(doc, "delta0");
  return model;
}

std::vector<std::string> validation_errors(const P1CA& model) {
  std::vector<std::string> errors;
  if (model.states.empty()) errors.push_back("no control states");
  std::set<std::string> known;
  for (const auto& s : model.states) {
    if (s.empty()) errors.push_back("empty state name");
    if (!known.insert(s).second) errors.push_back("duplicate state \"" + s + "\"");
  }

  auto check = [&](const std::vector<P1caTransition>& list, const std::string& table, bool zero) {
    std::map<std::string, Rational> out_mass;
    for (const auto& t : list) {
      const std::string where = table + " transition " + describe(t);
      if (!known.count(t.from)) errors.push_back(where + ": unknown source state");
      if (!known.count(t.to)) errors.push_back(where + ": unknown target state");
      if (t.p.sign() <= 0) errors.push_back(where + ": probability must be > 0");
      if (t.k < -1 || t.k > 1) errors.push_back(where + ": counter change must be -1, 0 or +1");
      if (zero && t.k == -1) errors.push_back(where + ": decrement at counter zero");
      out_mass[t.from] = out_mass[t.from] + t.p;
    }
    for (const auto& [s, mass] : out_mass) {
      if (known.count(s) && mass > Rational(1)) {
        errors.push_back(table + " probabilities from \"" + s + "\" sum to " + mass.str() + " > 1");
      }
    }
  };
  check(model.delta, "delta", false);
  check(model.delta0, "delta0", true);
  return errors;
}

void validate(const P1CA& model) {
  auto errors = validation_errors(model);
  if (!errors.empty()) throw InvalidModel(std::move(errors));
}

MonotoneSystem build_termination_mps(const P1CA& model) {
  const std::size_t r = model.states.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < r; ++i) index[model.states[i]] = i;

  std::vector<std::string> names;
  names.reserve(r * r);
  for (const auto& u : model.states) {
    for (const auto& v : model.states) names.push_back(u + "→" + v);
  }

  std::vector<Polynomial> eqs(r * r);
  for (const auto& t : model.delta) {
    const std::size_t u = index.at(t.from);
    const std::size_t y = index.at(t.to);
    for (std::size_t v = 0; v < r; ++v) {
      Polynomial& eq = eqs[pair_index(u, v, r)];
      switch (t.k) {
        case -1:
          if (y == v) eq.push_back(Monomial{t.p, {}});
          break;
        case 0:
          eq.push_back(Monomial{t.p, {{static_cast<VarIndex>(pair_index(y, v, r)), 1}}});
          break;
        case 1:
          for (std::size_t z = 0; z < r; ++z) {
            eq.push_back(product(static_cast<VarIndex>(pair_index(y, z, r)),
                                 static_cast<VarIndex>(pair_index(z, v, r)), t.p));
          }
          break;
        default: throw std::invalid_argument("counter change out of range");
      }
    }
  }
  return MonotoneSystem(std::move(names), std::move(eqs));
}

P1caRounding p1ca_rounding(const P1CA& model, const Rational& epsilon) {
  if (epsilon.sign() <= 0 || epsilon >= Rational(1)) {
    throw std::invalid_argument("epsilon must be in (0,1)");
  }
  P1caRounding out;
  out.r = model.states.size();
  for (const auto* list : {&model.delta, &model.delta0}) {
    for (const auto& t : *list) {
      out.m = std::max({out.m, bit_length(t.p.num()), bit_length(t.p.den())});
    }
  }
  const mpz_class r(static_cast<unsigned long>(out.r));
  const mpz_class m(static_cast<unsigned long>(out.m));
  mpz_class r2 = r * r;
  mpz_class r4 = r2 * r2;
  mpz_class r5 = r4 * r;
  mpz_class r7 = r5 * r2;
  // ceil(2 log2(1/eps)) = ceil(log2(1/eps^2)).
  const mpz_class eps_bits(static_cast<long>(ceil_log2(epsilon.reciprocal().pow(2))));
  const mpz_class common = 8 * m * r7 + 2 * m * r5 + 3 + eps_bits;
  out.h_r4 = common + 9 * r4;
  out.h_r2 = common + 9 * r2;
  return out;
}

GMatrix termination_probabilities(const P1CA& model, const Rational& epsilon,
                                  const P1caOptions& options) {
  validate(model);
  const std::size_t r = model.states.size();
  const MonotoneSystem sys = build_termination_mps(model);
  const CleanedSystem cleaned = clean(sys);
  const Decomposition dec = decompose(cleaned.system);
  if (dec.nonlinear_depth > 1) {
    throw StructureViolation("termination system has nonlinear depth " +
                             std::to_string(dec.nonlinear_depth) + " > 1");
  }

  GMatrix out;
  out.states = model.states;
  out.epsilon = epsilon;
  out.rounding = p1ca_rounding(model, epsilon);
  out.nonlinear_depth = dec.nonlinear_depth;
  out.mode = options.mode;
  if (!model.delta.empty()) {
    out.c_min = model.delta.front().p;
    for (const auto& t : model.delta) out.c_min = min(out.c_min, t.p);
    const std::uint64_t r3 = r * r * r;
    const std::uint64_t bits = bit_length(out.c_min.num()) + bit_length(out.c_min.den());
    if (bits * r3 <= (std::uint64_t{1} << 20)) out.qmin_floor = out.c_min.pow(r3);
  }

  DyadicVector full(r * r);
  if (options.mode == Mode::certified) {
    if (!out.rounding.h_r4.fits_ulong_p() || out.rounding.h_r4.get_ui() > options.max_h) {
      throw ParamsInfeasible("certified rounding parameter h=" + out.rounding.h_r4.get_str() +
                             " exceeds the ceiling " + std::to_string(options.max_h) +
                             "; adaptive mode is available");
    }
    out.h = out.rounding.h_r4.get_ui();
    out.g = out.h - 1;
    out.status = SolveStatus::certified;
    for (auto& v : full) v = Dyadic(0, out.h);
    if (!cleaned.system.empty()) {
      RdnmOptions run;
      run.jobs = options.jobs;
      run.trace = options.trace;
      const std::uint64_t g = out.g;
      const RdnmOutcome result =
          run_rdnm(cleaned.system, dec, out.h, [g](std::size_t) { return g; }, run);
      for (std::size_t k = 0; k < result.x.size(); ++k) {
        full[cleaned.original_index[k]] = result.x[k];
      }
    }
  } else {
    SolveOptions solve_opts;
    solve_opts.mode = Mode::adaptive;
    solve_opts.assume_probabilistic = true;
    solve_opts.use_snf = false;
    solve_opts.max_h = options.max_h;
    solve_opts.jobs = options.jobs;
    solve_opts.trace = options.trace;
    const SolveReport report = solve(sys, epsilon, solve_opts);
    full = report.approximation;
    out.h = report.params.h_effective;
    out.g = report.params.g;
    out.status = report.status;
  }

  const auto zeros = detect_zero_variables(sys);
  out.entries.assign(r, std::vector<Dyadic>(r));
  out.zero.assign(r, std::vector<bool>(r, false));
  for (std::size_t u = 0; u < r; ++u) {
    for (std::size_t v = 0; v < r; ++v) out.entries[u][v] = full[pair_index(u, v, r)];
  }
  for (auto z : zeros) out.zero[z / r][z % r] = true;
  return out;
}

}  // namespace rdnm
