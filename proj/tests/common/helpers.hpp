#pragma once

#include <algorithm>
#include <random>
#include <string>

#include "rdnm/exact.hpp"
#include "rdnm/system.hpp"

namespace rdnm::test {

inline Rational q(const char* text) { return Rational::parse(text); }

inline MonotoneSystem mps(const std::string& text) { return parse_mps(text); }

/// x = 1/2 x^2 + 1/2.
inline MonotoneSystem half_square() {
  return mps(R"({"vars":["x"],"eqs":[[{"c":"1/2","m":{"x":2}},{"c":"1/2","m":{}}]]})");
}

/// x0 = 1/2 x0^2 + 1/2, x_i = 1/2 x_i^2 + 1/2 x_{i-1}; least fixed point 1.
inline MonotoneSystem chain(std::size_t vars) {
  std::string text = R"({"vars":[)";
  for (std::size_t i = 0; i < vars; ++i) text += (i ? ",\"x" : "\"x") + std::to_string(i) + "\"";
  text += R"(],"eqs":[)";
  for (std::size_t i = 0; i < vars; ++i) {
    const std::string self = "x" + std::to_string(i);
    text += i ? "," : "";
    text += R"([{"c":"1/2","m":{")" + self + R"(":2}},)";
    if (i == 0) {
      text += R"({"c":"1/2","m":{}}])";
    } else {
      text += R"({"c":"1/2","m":{"x)" + std::to_string(i - 1) + R"(":1}}])";
    }
  }
  text += "]}";
  return mps(text);
}

// Random quadratic system with small positive coefficients.
inline MonotoneSystem random_quadratic(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> coin(0, 3);
  std::uniform_int_distribution<long> num(1, 5);
  std::uniform_int_distribution<long> den(1, 8);
  std::uniform_int_distribution<std::size_t> var(0, n - 1);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  std::vector<Polynomial> eqs(n);
  for (auto& eq : eqs) {
    const int terms = 1 + coin(rng);
    for (int t = 0; t < terms; ++t) {
      Monomial m{Rational(mpz_class(num(rng)), mpz_class(den(rng))), {}};
      const int degree = coin(rng) % 3;
      if (degree == 1) m.exponents = {{static_cast<VarIndex>(var(rng)), 1}};
      if (degree == 2) {
        const auto a = static_cast<VarIndex>(var(rng));
        const auto b = static_cast<VarIndex>(var(rng));
        if (a == b) {
          m.exponents = {{a, 2}};
        } else {
          m.exponents = {{std::min(a, b), 1}, {std::max(a, b), 1}};
        }
      }
      eq.push_back(m);
    }
  }
  return MonotoneSystem(names, eqs);
}

inline RVector random_point(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<long> num(0, 9);
  std::uniform_int_distribution<long> den(1, 9);
  RVector z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = Rational(mpz_class(num(rng)), mpz_class(den(rng)));
  return z;
}

}  // namespace rdnm::test
