#include "doctest.h"
#include "helpers.hpp"
#include "rdnm/bounds.hpp"
#include "rdnm/driver.hpp"
#include "rdnm/errors.hpp"
#include "rdnm/oracle.hpp"

using namespace rdnm;
using rdnm::test::chain;
using rdnm::test::half_square;
using rdnm::test::mps;
using rdnm::test::q;

namespace {

MonotoneSystem repeated_squaring() {
  return mps(R"({"vars":["x0","x1"],"eqs":[[{"c":"1/2","m":{}}],[{"c":"1","m":{"x0":2}}]]})");
}

MonotoneSystem two_level() {
  return mps(
      R"({"vars":["x1","x2"],"eqs":[[{"c":"1/2","m":{"x1":2}},{"c":"1/2","m":{"x2":1}}],[{"c":"1/2","m":{"x2":2}},{"c":"1/2","m":{}}]]})");
}

// Two independent SCCs below a third, so one level holds two SCCs.
MonotoneSystem diamond() {
  return mps(
      R"({"vars":["a","b","c"],"eqs":[[{"c":"1/3","m":{"a":2}},{"c":"1/3","m":{}}],[{"c":"1/4","m":{"b":2}},{"c":"1/2","m":{}}],[{"c":"1/4","m":{"c":2}},{"c":"1/4","m":{"a":1,"b":1}},{"c":"1/8","m":{}}]]})");
}

SolveOptions prob() {
  SolveOptions opt;
  opt.assume_probabilistic = true;
  return opt;
}

}  // namespace

TEST_CASE("qmin_lower_bound") {
  SUBCASE("repeated squaring") {
    const auto b = qmin_lower_bound(repeated_squaring());
    REQUIRE(b.candidates.coefficient_bound.has_value());
    CHECK(*b.candidates.coefficient_bound == q("1/8"));
    CHECK(b.value >= q("1/8"));
    CHECK(b.value <= q("1/4"));
  }
  SUBCASE("value iteration dominates") {
    const auto b = qmin_lower_bound(half_square());
    CHECK(b.value == q("1/2"));
    REQUIRE(b.candidates.iteration_bound.has_value());
    CHECK(*b.candidates.iteration_bound == q("1/2"));
    CHECK(*b.candidates.size_bound == Rational::pow2(-9));
  }
  SUBCASE("constant equation") {
    const auto b = qmin_lower_bound(mps(R"({"vars":["x"],"eqs":[[{"c":"1","m":{}}]]})"));
    CHECK(b.value == 1);
    CHECK(*b.candidates.coefficient_bound == 1);
  }
}

TEST_CASE("qmax_upper_bound") {
  CHECK(qmax_upper_bound(half_square(), true).exponent == 0);
  CHECK(qmax_upper_bound(half_square(), true).source == BoundSource::probability_flag);
  CHECK(qmax_exponent_formula(1, 12) == 400);
  CHECK(qmax_upper_bound(half_square(), false).exponent == 340);
  const auto sys = mps(R"({"vars":["x0","x1"],"eqs":[[{"c":"2","m":{}}],[{"c":"1","m":{"x0":2}}]]})");
  // q*_max = 4 = 2^2.
  CHECK(qmax_upper_bound(sys, false).exponent >= 2);
}

TEST_CASE("rescale") {
  CHECK(rescale(half_square(), 0) == half_square());
  CHECK(rescale(half_square(), 1) ==
        mps(R"({"vars":["x"],"eqs":[[{"c":"1","m":{"x":2}},{"c":"1/4","m":{}}]]})"));
  const auto lin = mps(R"({"vars":["x"],"eqs":[[{"c":"1/2","m":{"x":1}},{"c":"1/4","m":{}}]]})");
  const auto scaled = rescale(lin, 2);
  CHECK(scaled == mps(R"({"vars":["x"],"eqs":[[{"c":"1/2","m":{"x":1}},{"c":"1/16","m":{}}]]})"));
  CHECK(newton_step(scaled, RVector{q("0")}) == RVector{q("1/8")});
}

TEST_CASE("perturbation_bound") {
  const auto sys = half_square();
  CHECK(perturbation_bound(sys, q("1"), q("1"), q("0"), false) == 0);
  CHECK(perturbation_bound(sys, q("1"), q("1"), q("1/16"), true) == q("1/8"));
  CHECK(perturbation_bound(sys, q("1"), q("1"), q("1/64"), false) == q("1/4"));
  CHECK_THROWS(perturbation_bound(sys, q("0"), q("1"), q("1"), true));
}

TEST_CASE("solve: chain with three variables") {
  const auto report = solve(chain(3), Rational::pow2(-16), prob());
  CHECK(report.status == SolveStatus::certified);
  REQUIRE(report.approximation.size() == 3);
  for (const auto& v : report.approximation) {
    CHECK(v.value() <= 1);
    CHECK(Rational(1) - v.value() <= Rational::pow2(-16));
  }
  CHECK(report.params.g + 1 == report.params.h);
  CHECK(report.params.u == 0);
}

TEST_CASE("solve: linear system is exact") {
  const auto sys = mps(R"({"vars":["x"],"eqs":[[{"c":"1/2","m":{"x":1}},{"c":"1/4","m":{}}]]})");
  const auto report = solve(sys, q("1/1024"), prob());
  CHECK(report.approximation[0].value() == q("1/2"));
  REQUIRE(report.sccs.size() == 1);
  CHECK(report.sccs[0].budget == 1);
}

TEST_CASE("solve: two SCCs") {
  const auto report = solve(two_level(), Rational::pow2(-12), prob());
  for (const auto& v : report.approximation) {
    CHECK(v.value() <= 1);
    CHECK(Rational(1) - v.value() <= Rational::pow2(-12));
  }
}

TEST_CASE("solve: rescaled certified run without the probability flag") {
  SolveOptions opt;
  opt.use_snf = false;
  const auto report = solve(half_square(), q("1/1024"), opt);
  CHECK(report.status == SolveStatus::certified);
  CHECK(report.params.u == 340);
  CHECK(report.params.h_effective + report.params.u == report.params.h);
  CHECK(report.approximation[0].value() <= 1);
  CHECK(Rational(1) - report.approximation[0].value() <= q("1/1024"));
  CHECK(report.approximation[0].scale() <= report.params.h_effective);
}

TEST_CASE("solve: a solution above one") {
  // x = 1/4 x^2 + 1: LFP 2.
  const auto sys = mps(R"({"vars":["x"],"eqs":[[{"c":"1/4","m":{"x":2}},{"c":"1","m":{}}]]})");
  SolveOptions opt;
  opt.use_snf = false;
  opt.qmax_exponent_override = mpz_class(2);
  const auto report = solve(sys, q("1/4096"), opt);
  CHECK(report.bounds.qmax_source == BoundSource::user_asserted);
  CHECK(report.approximation[0].value() <= 2);
  CHECK(Rational(2) - report.approximation[0].value() <= q("1/4096"));
}

TEST_CASE("solve: cleaned zeros are exactly zero") {
  const auto sys = mps(
      R"({"vars":["x1","x2"],"eqs":[[{"c":"1","m":{"x1":1,"x2":1}}],[{"c":"1/2","m":{"x2":1}},{"c":"1/2","m":{}}]]})");
  const auto report = solve(sys, q("1/256"), prob());
  CHECK(report.approximation[0].value() == 0);
  CHECK(Rational(1) - report.approximation[1].value() <= q("1/256"));
}

TEST_CASE("solve: everything cleaned away") {
  const auto sys = mps(R"({"vars":["x"],"eqs":[[{"c":"1","m":{"x":2}}]]})");
  const auto report = solve(sys, q("1/2"));
  CHECK(report.status == SolveStatus::certified);
  CHECK(report.solved_variables == 0);
  CHECK(report.approximation[0].value() == 0);
}

TEST_CASE("solve: errors") {
  const auto singular = mps(R"({"vars":["x"],"eqs":[[{"c":"1","m":{"x":1}},{"c":"1","m":{}}]]})");
  CHECK_THROWS_AS(solve(singular, q("1/2")), SingularMatrix);
  const auto diverging = mps(R"({"vars":["x"],"eqs":[[{"c":"1","m":{"x":2}},{"c":"1","m":{}}]]})");
  CHECK_THROWS_AS(solve(diverging, q("1/2")), DivergenceCertified);
  CHECK_THROWS_AS(solve(diverging, q("1/2"), prob()), DivergenceCertified);
  SolveOptions tight = prob();
  tight.max_h = 16;
  CHECK_THROWS_AS(solve(chain(3), q("1/1024"), tight), ParamsInfeasible);
  SolveOptions no_snf;
  no_snf.use_snf = false;
  const auto cubic = mps(R"({"vars":["x"],"eqs":[[{"c":"1/4","m":{"x":3}},{"c":"1/4","m":{}}]]})");
  CHECK_THROWS_AS(solve(cubic, q("1/2"), no_snf), DegreeTooHigh);
  CHECK_THROWS(solve(half_square(), q("1")));
}

TEST_CASE("solve: higher degree goes through the normal form") {
  // x = 1/4 x^3 + 1/4; compare with value iteration.
  const auto cubic = mps(R"({"vars":["x"],"eqs":[[{"c":"1/4","m":{"x":3}},{"c":"1/4","m":{}}]]})");
  const auto report = solve(cubic, q("1/65536"), prob());
  const Rational approx = report.approximation[0].value();
  const Rational below = value_iterate(cubic, 8)[0];
  CHECK(approx <= eval(cubic, RVector{approx})[0]);  // below the fixed point
  CHECK((approx - below).abs() <= q("1/65536"));
}

TEST_CASE("solve: manual overrides") {
  SolveOptions opt = prob();
  opt.h_override = 8;
  const auto low = solve(half_square(), q("1/1024"), opt);
  CHECK(low.status == SolveStatus::adaptive_heuristic);
  CHECK(low.params.h == 8);
  CHECK(low.params.g == 7);

  const auto certified = solve(half_square(), q("1/1024"), prob());
  opt.h_override = certified.params.h + 5;
  const auto high = solve(half_square(), q("1/1024"), opt);
  CHECK(high.status == SolveStatus::certified);
}

TEST_CASE("solve: adaptive mode") {
  SolveOptions opt;
  opt.mode = Mode::adaptive;
  const auto report = solve(chain(3), Rational::pow2(-10), opt);
  CHECK(report.status == SolveStatus::adaptive_heuristic);
  CHECK(report.params.mode == Mode::adaptive);
  for (const auto& v : report.approximation) {
    CHECK(v.value() <= 1);
    CHECK(Rational(1) - v.value() <= Rational::pow2(-10));
  }
}

TEST_CASE("solve: worker threads do not change the result") {
  std::vector<std::string> serial_trace;
  std::vector<std::string> parallel_trace;
  SolveOptions opt = prob();
  opt.trace = [&](std::size_t s, const TraceRecord& r) {
    serial_trace.push_back(std::to_string(s) + ":" + std::to_string(r.k) + ":" + r.x[0].str());
  };
  const auto serial = solve(diamond(), q("1/4096"), opt);
  opt.jobs = 4;
  opt.trace = [&](std::size_t s, const TraceRecord& r) {
    parallel_trace.push_back(std::to_string(s) + ":" + std::to_string(r.k) + ":" + r.x[0].str());
  };
  const auto parallel = solve(diamond(), q("1/4096"), opt);
  CHECK(serial.approximation == parallel.approximation);
  CHECK(serial_trace == parallel_trace);
  CHECK_FALSE(serial_trace.empty());
}

TEST_CASE("run_rdnm: linear SCCs take one step") {
  const auto sys = mps(
      R"({"vars":["a","b"],"eqs":[[{"c":"1/2","m":{"b":1}},{"c":"1/4","m":{}}],[{"c":"1/2","m":{"a":1}}]]})");
  const auto out = run_rdnm(sys, decompose(sys), 20, [](std::size_t) { return 100; });
  REQUIRE(out.sccs.size() == 1);
  CHECK(out.sccs[0].budget == 1);
  CHECK(out.sccs[0].iterations == 1);
  CHECK(out.x[0] == round_down_dyadic(q("1/3"), 20));  // a = 1/4 a + 1/4
}

TEST_CASE("certified_params") {
  const auto sys = half_square();
  const auto dec = decompose(sys);
  const auto p = certified_params(sys, dec, q("1/2"), 0, Rational::pow2(-10), 1 << 15);
  // alpha = 1/2 * 1/4; X = (2^10 * (2^3)^5 * 16 * 1)^2 = 2^58.
  CHECK(p.alpha == q("1/8"));
  CHECK(p.g == 60);
  CHECK(p.h == 61);
  CHECK_THROWS_AS(certified_params(sys, dec, q("1/2"), 0, Rational::pow2(-10), 40), ParamsInfeasible);
}
