#include <algorithm>
#include <map>
#include <set>

#include "rdnm/system.hpp"

namespace rdnm {

namespace {

class SnfBuilder {
 public:
  explicit SnfBuilder(const MonotoneSystem& sys)
      : taken_(sys.names().begin(), sys.names().end()), names_(sys.names()) {
    equations_.resize(sys.size());
    forms_.resize(sys.size(), EquationForm::linear);
  }

  void set_equation(std::size_t i, Polynomial poly, EquationForm form) {
    equations_[i] = std::move(poly);
    forms_[i] = form;
  }

  /// Index of a variable standing for x_a * x_b, created on first use.
  VarIndex product(VarIndex a, VarIndex b) {
    const std::pair<VarIndex, VarIndex> key = std::minmax(a, b);
    if (const auto it = products_.find(key); it != products_.end()) return it->second;
    const auto idx = static_cast<VarIndex>(names_.size());
    names_.push_back(fresh_name());
    Monomial m{Rational(1), {}};
    if (key.first == key.second) {
      m.exponents.emplace_back(key.first, 2);
    } else {
      m.exponents.emplace_back(key.first, 1);
      m.exponents.emplace_back(key.second, 1);
    }
    equations_.push_back(Polynomial{std::move(m)});
    forms_.push_back(EquationForm::product);
    products_.emplace(key, idx);
    return idx;
  }

  SnfSystem finish(std::size_t original_count) && {
    SnfSystem out{MonotoneSystem(std::move(names_), std::move(equations_)), std::move(forms_), {}};
    out.projection.resize(original_count);
    for (std::size_t i = 0; i < original_count; ++i) out.projection[i] = i;
    return out;
  }

 private:
  std::string fresh_name() {
    std::string candidate;
    do {
      candidate = "w" + std::to_string(++counter_);
    } while (taken_.count(candidate) != 0);
    taken_.insert(candidate);
    return candidate;
  }

  std::set<std::string> taken_;
  std::vector<std::string> names_;
  std::vector<Polynomial> equations_;
  std::vector<EquationForm> forms_;
  std::map<std::pair<VarIndex, VarIndex>, VarIndex> products_;
  unsigned counter_ = 0;
};

bool is_unit_product(const Polynomial& poly) {
  return poly.size() == 1 && poly[0].coefficient == Rational(1) && poly[0].degree() == 2;
}

}  // namespace

SnfSystem to_snf(const MonotoneSystem& sys) {
  SnfBuilder builder(sys);
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const Polynomial& poly = sys.equation(i);
    if (is_unit_product(poly)) {
      builder.set_equation(i, poly, EquationForm::product);
      continue;
    }
    Polynomial linear;
    for (const auto& m : poly) {
      if (m.degree() <= 1) {
        linear.push_back(m);
        continue;
      }
      // Left-associated split of the factor list in index order.
      std::vector<VarIndex> factors;
      for (const auto& [v, e] : m.exponents) factors.insert(factors.end(), e, v);
      VarIndex acc = factors[0];
      for (std::size_t t = 1; t < factors.size(); ++t) acc = builder.product(acc, factors[t]);
      linear.push_back(Monomial{m.coefficient, {{acc, 1}}});
    }
    builder.set_equation(i, std::move(linear), EquationForm::linear);
  }
  return std::move(builder).finish(sys.size());
}

std::vector<std::size_t> detect_zero_variables(const MonotoneSystem& sys) {
  const std::size_t n = sys.size();
  std::vector<bool> positive(n, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (positive[i]) continue;
      for (const auto& m : sys.equation(i)) {
        const bool all_positive = std::all_of(m.exponents.begin(), m.exponents.end(),
                                              [&](const auto& ve) { return positive[ve.first]; });
        if (all_positive) {
          positive[i] = true;
          changed = true;
          break;
        }
      }
    }
  }
  std::vector<std::size_t> zeros;
  for (std::size_t i = 0; i < n; ++i) {
    if (!positive[i]) zeros.push_back(i);
  }
  return zeros;
}

CleanedSystem clean(const MonotoneSystem& sys) {
  CleanedSystem out;
  out.zero_variables = detect_zero_variables(sys);
  std::vector<bool> is_zero(sys.size(), false);
  for (const auto z : out.zero_variables) is_zero[z] = true;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    if (!is_zero[i]) out.original_index.push_back(i);
  }
  // Zero variables evaluate to 0, so substitution drops every monomial
  // that mentions one.
  out.system = substitute(sys, out.original_index, RVector(sys.size()));
  return out;
}

}  // namespace rdnm
