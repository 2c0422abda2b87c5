#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "rdnm/errors.hpp"
#include "rdnm/system.hpp"

using namespace rdnm;
using rdnm::test::half_square;
using rdnm::test::mps;
using rdnm::test::q;
using rdnm::test::random_point;
using rdnm::test::random_quadratic;

TEST_CASE("parse_mps") {
  SUBCASE("univariate quadratic") {
    const auto sys = half_square();
    REQUIRE(sys.size() == 1);
    CHECK(sys.name(0) == "x");
    REQUIRE(sys.equation(0).size() == 2);
    CHECK(sys.equation(0)[0].coefficient == q("1/2"));
    CHECK(sys.equation(0)[0].exponent_of(0) == 2);
    CHECK(sys.equation(0)[1].is_constant());
  }
  SUBCASE("negative coefficient") {
    CHECK_THROWS_AS(mps(R"({"vars":["x"],"eqs":[[{"c":"-1","m":{}}]]})"), NotMonotone);
    CHECK_THROWS_AS(mps(R"({"vars":["x"],"eqs":[[{"c":"0","m":{}}]]})"), NotMonotone);
  }
  SUBCASE("arity mismatch") {
    CHECK_THROWS_AS(mps(R"({"vars":["x"],"eqs":[]})"), ParseError);
  }
  SUBCASE("malformed documents") {
    CHECK_THROWS_AS(mps("not json"), ParseError);
    CHECK_THROWS_AS(mps(R"({"vars":["x","x"],"eqs":[[],[]]})"), ParseError);
    CHECK_THROWS_AS(mps(R"({"vars":["x"],"eqs":[[{"c":"1","m":{"y":1}}]]})"), ParseError);
    CHECK_THROWS_AS(mps(R"({"vars":["x"],"eqs":[[{"c":"1","m":{"x":0}}]]})"), ParseError);
    CHECK_THROWS_AS(mps(R"({"vars":["x"],"eqs":[[{"c":1,"m":{}}]]})"), ParseError);
  }
  SUBCASE("like monomials merge") {
    const auto sys = mps(R"({"vars":["x"],"eqs":[[{"c":"1/4","m":{"x":1}},{"c":"1/4","m":{"x":1}}]]})");
    REQUIRE(sys.equation(0).size() == 1);
    CHECK(sys.equation(0)[0].coefficient == q("1/2"));
  }
}

TEST_CASE("serialization round-trips") {
  const auto sys = mps(
      R"({"vars":["b","a"],"eqs":[[{"c":"1/3","m":{}},{"c":"2","m":{"b":1,"a":1}}],[{"c":"1/2","m":{"a":2}}]]})");
  const std::string text = serialize_mps(sys);
  CHECK(text ==
        R"({"vars":["b","a"],"eqs":[[{"c":"2","m":{"a":1,"b":1}},{"c":"1/3","m":{}}],[{"c":"1/2","m":{"a":2}}]]})");
  CHECK(parse_mps(text) == sys);

  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto r = random_quadratic(rng, 1 + i % 5);
    CHECK(parse_mps(serialize_mps(r)) == r);
  }
}

TEST_CASE("encoding_size") {
  // 1/2 x^2: 1 + 2 + (1 + 2); 1/2: 1 + 2.
  CHECK(encoding_size(half_square()).bits == 9);
  CHECK(encoding_size(mps(R"({"vars":["x"],"eqs":[[{"c":"1","m":{}}]]})")).bits == 2);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const auto r = random_quadratic(rng, 1 + i % 6);
    CHECK(encoding_size(r).bits >= r.size());
  }
}

TEST_CASE("eval") {
  const auto sys = half_square();
  CHECK(eval(sys, RVector{q("0")}) == RVector{q("1/2")});
  CHECK(eval(sys, RVector{q("5/8")}) == RVector{q("89/128")});
  CHECK(eval(sys, RVector{q("1")}) == RVector{q("1")});
  CHECK(norm_at_ones(sys) == 1);
}

TEST_CASE("eval is monotone") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 1 + i % 4;
    const auto sys = random_quadratic(rng, n);
    const RVector a = random_point(rng, n);
    const RVector b = a + random_point(rng, n);
    const RVector pa = eval(sys, a);
    const RVector pb = eval(sys, b);
    for (std::size_t k = 0; k < n; ++k) CHECK(pa[k] <= pb[k]);
  }
}

TEST_CASE("eval_jacobian") {
  SUBCASE("univariate") {
    CHECK(eval_jacobian(half_square(), RVector{q("3/7")}) == RMatrix{{q("3/7")}});
  }
  SUBCASE("product rule") {
    const auto sys = mps(R"({"vars":["x1","x2"],"eqs":[[{"c":"1","m":{"x1":1,"x2":1}}],[{"c":"1/2","m":{}}]]})");
    CHECK(eval_jacobian(sys, RVector{q("2/3"), q("5")}) ==
          RMatrix{{q("5"), q("2/3")}, {q("0"), q("0")}});
  }
  SUBCASE("linear") {
    const auto sys = mps(R"({"vars":["x"],"eqs":[[{"c":"1/2","m":{"x":1}},{"c":"1/4","m":{}}]]})");
    CHECK(eval_jacobian(sys, RVector{q("9")}) == RMatrix{{q("1/2")}});
  }
  SUBCASE("degree too high") {
    const auto sys = mps(R"({"vars":["x"],"eqs":[[{"c":"1","m":{"x":3}}]]})");
    CHECK_THROWS_AS(eval_jacobian(sys, RVector{q("0")}), DegreeTooHigh);
  }
  SUBCASE("mean value identity") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
      const std::size_t n = 1 + i % 5;
      const auto sys = random_quadratic(rng, n);
      const RVector a = random_point(rng, n);
      const RVector b = random_point(rng, n);
      RVector mid(n);
      for (std::size_t k = 0; k < n; ++k) mid[k] = (a[k] + b[k]) / Rational(2);
      CHECK(eval(sys, a) - eval(sys, b) == eval_jacobian(sys, mid) * (a - b));
    }
  }
}

TEST_CASE("substitute drops vanishing monomials") {
  const auto sys = mps(
      R"({"vars":["x","y"],"eqs":[[{"c":"1/2","m":{"x":1,"y":1}},{"c":"1/4","m":{"y":1}},{"c":"1/8","m":{}}],[{"c":"1","m":{}}]]})");
  const auto sub = substitute(sys, {0}, RVector{q("0"), q("0")});
  REQUIRE(sub.size() == 1);
  REQUIRE(sub.equation(0).size() == 1);
  CHECK(sub.equation(0)[0].coefficient == q("1/8"));
  const auto sub2 = substitute(sys, {0}, RVector{q("0"), q("2")});
  CHECK(eval(sub2, RVector{q("1")}) == RVector{q("1/2") * 2 + q("1/2") + q("1/8")});
}
