#include "rdnm/system.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"

namespace rdnm {

std::uint32_t Monomial::degree() const {
  std::uint32_t total = 0;
  for (const auto& [v, e] : exponents) total += e;
  return total;
}

std::uint32_t Monomial::exponent_of(VarIndex v) const {
  for (const auto& [var, e] : exponents) {
    if (var == v) return e;
  }
  return 0;
}

namespace {

bool monomial_order(const Monomial& a, const Monomial& b) {
  const auto da = a.degree();
  const auto db = b.degree();
  if (da != db) return da > db;
  return a.exponents < b.exponents;
}

Polynomial canonicalize(Polynomial poly, std::size_t n, std::size_t row) {
  std::map<std::vector<std::pair<VarIndex, std::uint32_t>>, Rational> merged;
  for (auto& m : poly) {
    if (m.coefficient.sign() <= 0) {
      throw NotMonotone("equation " + std::to_string(row) + " has non-positive coefficient " +
                        m.coefficient.str());
    }
    std::map<VarIndex, std::uint32_t> exps;
    for (const auto& [v, e] : m.exponents) {
      if (v >= n) {
        throw ParseError("equation " + std::to_string(row) + " references variable index " +
                         std::to_string(v) + " out of range");
      }
      if (e > 0) exps[v] += e;
    }
    std::vector<std::pair<VarIndex, std::uint32_t>> key(exps.begin(), exps.end());
    merged[std::move(key)] += m.coefficient;
  }
  Polynomial out;
  out.reserve(merged.size());
  for (auto& [exps, c] : merged) out.push_back(Monomial{c, exps});
  std::sort(out.begin(), out.end(), monomial_order);
  return out;
}

Rational power(const Rational& base, std::uint32_t e) {
  if (e == 1) return base;
  return base.pow(e);
}

Rational eval_monomial(const Monomial& m, const RVector& z) {
  Rational acc = m.coefficient;
  for (const auto& [v, e] : m.exponents) {
    if (z[v].is_zero()) return Rational();
    acc *= power(z[v], e);
  }
  return acc;
}

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

Rational parse_coefficient(const json& c) {
  if (!c.is_string()) throw ParseError("coefficient must be a \"p/q\" string");
  return Rational::parse(c.get<std::string>());
}

}  // namespace

MonotoneSystem::MonotoneSystem(std::vector<std::string> names, std::vector<Polynomial> equations)
    : names_(std::move(names)) {
  if (equations.size() != names_.size()) {
    throw ParseError("system has " + std::to_string(names_.size()) + " variables but " +
                     std::to_string(equations.size()) + " equations");
  }
  std::set<std::string_view> seen;
  for (const auto& nm : names_) {
    if (nm.empty()) throw ParseError("empty variable name");
    if (!seen.insert(nm).second) throw ParseError("duplicate variable name '" + nm + "'");
  }
  equations_.reserve(equations.size());
  for (std::size_t i = 0; i < equations.size(); ++i) {
    equations_.push_back(canonicalize(std::move(equations[i]), names_.size(), i));
  }
}

std::optional<std::size_t> MonotoneSystem::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

std::uint32_t MonotoneSystem::max_degree() const {
  std::uint32_t best = 0;
  for (const auto& poly : equations_) {
    for (const auto& m : poly) best = std::max(best, m.degree());
  }
  return best;
}

std::optional<Rational> MonotoneSystem::c_min() const {
  std::optional<Rational> best;
  for (const auto& poly : equations_) {
    for (const auto& m : poly) {
      if (!best || m.coefficient < *best) best = m.coefficient;
    }
  }
  return best;
}

MonotoneSystem parse_mps(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vars") || !doc.contains("eqs")) {
    throw ParseError("MPS document needs \"vars\" and \"eqs\"");
  }
  const json& vars = doc.at("vars");
  const json& eqs = doc.at("eqs");
  if (!vars.is_array() || !eqs.is_array()) throw ParseError("\"vars\" and \"eqs\" must be arrays");

  std::vector<std::string> names;
  std::map<std::string, VarIndex> index;
  for (const auto& v : vars) {
    if (!v.is_string()) throw ParseError("variable names must be strings");
    const auto nm = v.get<std::string>();
    index.emplace(nm, static_cast<VarIndex>(names.size()));
    names.push_back(nm);
  }
  if (eqs.size() != names.size()) {
    throw ParseError("expected " + std::to_string(names.size()) + " equations, found " +
                     std::to_string(eqs.size()));
  }

  std::vector<Polynomial> equations;
  for (const auto& eq : eqs) {
    if (!eq.is_array()) throw ParseError("each equation must be an array of terms");
    Polynomial poly;
    for (const auto& term : eq) {
      if (!term.is_object() || !term.contains("c")) throw ParseError("term needs a \"c\" field");
      Monomial m{parse_coefficient(term.at("c")), {}};
      if (term.contains("m")) {
        const json& mono = term.at("m");
        if (!mono.is_object()) throw ParseError("\"m\" must be an object");
        for (const auto& [var, exp] : mono.items()) {
          const auto it = index.find(var);
          if (it == index.end()) throw ParseError("unknown variable '" + var + "'");
          if (!exp.is_number_unsigned() || exp.get<std::uint64_t>() == 0) {
            throw ParseError("exponent of '" + var + "' must be a positive integer");
          }
          const auto e = exp.get<std::uint64_t>();
          if (e > UINT32_MAX) throw ParseError("exponent of '" + var + "' too large");
          m.exponents.emplace_back(it->second, static_cast<std::uint32_t>(e));
        }
      }
      poly.push_back(std::move(m));
    }
    equations.push_back(std::move(poly));
  }
  return MonotoneSystem(std::move(names), std::move(equations));
}

std::string serialize_mps(const MonotoneSystem& sys) {
  ordered_json doc;
  doc["vars"] = sys.names();
  ordered_json eqs = ordered_json::array();
  for (const auto& poly : sys.equations()) {
    ordered_json terms = ordered_json::array();
    for (const auto& m : poly) {
      std::vector<std::pair<std::string, std::uint32_t>> named;
      for (const auto& [v, e] : m.exponents) named.emplace_back(sys.name(v), e);
      std::sort(named.begin(), named.end());
      ordered_json mono = ordered_json::object();
      for (const auto& [nm, e] : named) mono[nm] = e;
      ordered_json term;
      term["c"] = m.coefficient.str();
      term["m"] = std::move(mono);
      terms.push_back(std::move(term));
    }
    eqs.push_back(std::move(terms));
  }
  doc["eqs"] = std::move(eqs);
  return doc.dump();
}

EncodingSize encoding_size(const MonotoneSystem& sys) {
  EncodingSize size;
  for (const auto& poly : sys.equations()) {
    if (poly.empty()) ++size.bits;
    for (const auto& m : poly) {
      size.bits += bit_length(m.coefficient.num()) + bit_length(m.coefficient.den());
      for (const auto& [v, e] : m.exponents) {
        size.bits += bit_length(mpz_class(static_cast<unsigned long>(v) + 1)) +
                     bit_length(mpz_class(static_cast<unsigned long>(e)));
      }
    }
  }
  return size;
}

RVector eval(const MonotoneSystem& sys, const RVector& z) {
  if (z.size() != sys.size()) throw std::invalid_argument("eval: dimension mismatch");
  RVector out(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) {
    Rational acc;
    for (const auto& m : sys.equation(i)) acc += eval_monomial(m, z);
    out[i] = std::move(acc);
  }
  return out;
}

Rational norm_at_ones(const MonotoneSystem& sys) {
  Rational best;
  for (const auto& poly : sys.equations()) {
    Rational row;
    for (const auto& m : poly) row += m.coefficient;
    best = max(best, row);
  }
  return best;
}

RMatrix eval_jacobian(const MonotoneSystem& sys, const RVector& z) {
  if (z.size() != sys.size()) throw std::invalid_argument("eval_jacobian: dimension mismatch");
  const std::size_t n = sys.size();
  RMatrix b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& m : sys.equation(i)) {
      const auto deg = m.degree();
      if (deg > 2) {
        throw DegreeTooHigh("equation " + sys.name(i) + " has a monomial of degree " +
                            std::to_string(deg));
      }
      if (deg == 1) {
        b(i, m.exponents[0].first) += m.coefficient;
      } else if (deg == 2 && m.exponents.size() == 1) {
        const VarIndex j = m.exponents[0].first;
        b(i, j) += Rational(2) * m.coefficient * z[j];
      } else if (deg == 2) {
        const VarIndex j = m.exponents[0].first;
        const VarIndex k = m.exponents[1].first;
        b(i, j) += m.coefficient * z[k];
        b(i, k) += m.coefficient * z[j];
      }
    }
  }
  return b;
}

MonotoneSystem substitute(const MonotoneSystem& sys, const std::vector<std::size_t>& keep,
                          const RVector& values) {
  if (values.size() != sys.size()) throw std::invalid_argument("substitute: dimension mismatch");
  std::vector<std::optional<VarIndex>> local(sys.size());
  for (std::size_t k = 0; k < keep.size(); ++k) local[keep[k]] = static_cast<VarIndex>(k);

  std::vector<std::string> names;
  std::vector<Polynomial> equations;
  for (const auto i : keep) {
    names.push_back(sys.name(i));
    Polynomial poly;
    for (const auto& m : sys.equation(i)) {
      Monomial out{m.coefficient, {}};
      bool vanished = false;
      for (const auto& [v, e] : m.exponents) {
        if (local[v]) {
          out.exponents.emplace_back(*local[v], e);
        } else if (values[v].is_zero()) {
          vanished = true;
          break;
        } else {
          out.coefficient *= power(values[v], e);
        }
      }
      if (!vanished) poly.push_back(std::move(out));
    }
    equations.push_back(std::move(poly));
  }
  return MonotoneSystem(std::move(names), std::move(equations));
}

}  // namespace rdnm
