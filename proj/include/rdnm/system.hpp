#pragma once

// Monotone polynomial systems x = P(x): representation, JSON I/O,
// evaluation, Jacobians, simple normal form and zero-variable cleaning.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rdnm/exact.hpp"

namespace rdnm {

using VarIndex = std::uint32_t;

/// c * prod x_v^e over the listed (v, e) pairs. An empty list is a constant.
struct Monomial {
  Rational coefficient;
  std::vector<std::pair<VarIndex, std::uint32_t>> exponents;  // sorted by variable, e >= 1

  std::uint32_t degree() const;
  std::uint32_t exponent_of(VarIndex v) const;
  bool is_constant() const { return exponents.empty(); }

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

using Polynomial = std::vector<Monomial>;

/// n equations x_i = P_i(x) with strictly positive coefficients.
///
/// The constructor canonicalizes each polynomial: exponent lists sorted by
/// variable, like monomials merged, monomials ordered by descending total
/// degree and then by exponent list. Two systems describing the same
/// polynomials therefore compare equal.
class MonotoneSystem {
 public:
  MonotoneSystem() = default;
  /// Throws ParseError on structural problems and NotMonotone on a
  /// coefficient <= 0.
  MonotoneSystem(std::vector<std::string> names, std::vector<Polynomial> equations);

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  const Polynomial& equation(std::size_t i) const { return equations_[i]; }
  const std::vector<Polynomial>& equations() const { return equations_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  std::uint32_t max_degree() const;
  /// Smallest coefficient or constant; nullopt when P is identically 0.
  std::optional<Rational> c_min() const;

  friend bool operator==(const MonotoneSystem&, const MonotoneSystem&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<Polynomial> equations_;
};

/// MPS JSON: {"vars":[...], "eqs":[[{"c":"p/q","m":{var:exp,...}},...],...]}.
MonotoneSystem parse_mps(std::string_view text);
std::string serialize_mps(const MonotoneSystem& sys);

/// |P| in bits: per monomial, bitlen(num) + bitlen(den) plus, for each
/// listed exponent, bitlen(1-based variable index) + bitlen(exponent).
/// Every component counts at least one bit; an empty polynomial counts one.
struct EncodingSize {
  std::uint64_t bits = 0;
};
EncodingSize encoding_size(const MonotoneSystem& sys);

RVector eval(const MonotoneSystem& sys, const RVector& z);
/// ||P(1)||_inf, the largest row sum of coefficients.
Rational norm_at_ones(const MonotoneSystem& sys);
/// Jacobian B(z); throws DegreeTooHigh unless every monomial has degree <= 2.
RMatrix eval_jacobian(const MonotoneSystem& sys, const RVector& z);

enum class EquationForm { product, linear };  // Form_* and Form_+

struct SnfSystem {
  MonotoneSystem system;
  std::vector<EquationForm> forms;
  /// projection[i] is the index in `system` of original variable i.
  std::vector<std::size_t> projection;
};

SnfSystem to_snf(const MonotoneSystem& sys);

/// Indices i with q*_i = 0, ascending.
std::vector<std::size_t> detect_zero_variables(const MonotoneSystem& sys);

struct CleanedSystem {
  MonotoneSystem system;
  /// original_index[k] is the original position of cleaned variable k.
  std::vector<std::size_t> original_index;
  std::vector<std::size_t> zero_variables;
};

CleanedSystem clean(const MonotoneSystem& sys);

/// Restriction of `sys` to the variables in `keep` (ascending), every
/// other variable replaced by its entry in `values`. Monomials that vanish
/// under the substitution are dropped.
MonotoneSystem substitute(const MonotoneSystem& sys, const std::vector<std::size_t>& keep,
                          const RVector& values);

}  // namespace rdnm
