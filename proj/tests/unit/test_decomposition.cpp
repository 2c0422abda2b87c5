#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "rdnm/decomposition.hpp"

using namespace rdnm;
using rdnm::test::chain;
using rdnm::test::half_square;
using rdnm::test::mps;

TEST_CASE("build_graph") {
  SUBCASE("self-loop") {
    const auto g = build_graph(half_square());
    CHECK(g.has_edge(0, 0));
  }
  SUBCASE("chain family") {
    const auto g = build_graph(chain(4));
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(g.has_edge(i, i));
      if (i > 0) CHECK(g.has_edge(i, i - 1));
      CHECK(g.successors[i].size() == (i > 0 ? 2u : 1u));
    }
  }
  SUBCASE("single edge") {
    const auto g = build_graph(
        mps(R"({"vars":["x1","x2"],"eqs":[[{"c":"1/2","m":{}}],[{"c":"1","m":{"x1":1}}]]})"));
    CHECK(g.successors[0].empty());
    CHECK(g.successors[1] == std::vector<std::size_t>{0});
  }
}

TEST_CASE("decompose") {
  SUBCASE("chain: singleton nonlinear SCCs") {
    const auto dec = decompose(chain(4));
    REQUIRE(dec.sccs.size() == 4);
    for (std::size_t s = 0; s < 4; ++s) {
      CHECK(dec.sccs[s].vars == std::vector<std::size_t>{s});
      CHECK(dec.sccs[s].nonlinear);
    }
    CHECK(dec.depth == 4);
    CHECK(dec.nonlinear_depth == 4);
  }
  SUBCASE("two-cycle is one linear SCC") {
    const auto dec = decompose(mps(
        R"({"vars":["x1","x2"],"eqs":[[{"c":"1","m":{"x2":1}},{"c":"1/3","m":{}}],[{"c":"1","m":{"x1":1}}]]})"));
    REQUIRE(dec.sccs.size() == 1);
    CHECK(dec.sccs[0].vars == std::vector<std::size_t>{0, 1});
    CHECK_FALSE(dec.sccs[0].nonlinear);
    CHECK(dec.depth == 1);
    CHECK(dec.nonlinear_depth == 0);
  }
  SUBCASE("squares of lower variables are constants") {
    const auto dec = decompose(
        mps(R"({"vars":["x1","x2"],"eqs":[[{"c":"1","m":{"x2":2}}],[{"c":"1/2","m":{}}]]})"));
    REQUIRE(dec.sccs.size() == 2);
    CHECK(dec.sccs[0].vars == std::vector<std::size_t>{1});
    CHECK(dec.sccs[1].vars == std::vector<std::size_t>{0});
    CHECK_FALSE(dec.sccs[0].nonlinear);
    CHECK_FALSE(dec.sccs[1].nonlinear);
    CHECK(dec.nonlinear_depth == 0);
    CHECK(dec.depth == 2);
  }
  SUBCASE("levels group independent SCCs") {
    const auto sys = mps(
        R"({"vars":["a","b","c"],"eqs":[[{"c":"1/2","m":{}}],[{"c":"1/3","m":{}}],[{"c":"1/4","m":{"a":1,"b":1}}]]})");
    const auto dec = decompose(sys);
    const auto levels = dec.levels();
    REQUIRE(levels.size() == 2);
    CHECK(levels[0].size() == 2);
    CHECK(levels[1].size() == 1);
  }
}

TEST_CASE("decomposition invariants on random systems") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const auto sys = rdnm::test::random_quadratic(rng, 1 + trial % 7);
    const auto graph = build_graph(sys);
    const auto dec = decompose(graph, sys);

    // Partition and topological order.
    std::vector<int> seen(sys.size(), 0);
    for (const auto& scc : dec.sccs) {
      for (auto v : scc.vars) ++seen[v];
    }
    for (int c : seen) CHECK(c == 1);
    for (std::size_t i = 0; i < sys.size(); ++i) {
      for (auto j : graph.successors[i]) CHECK(dec.scc_of[j] <= dec.scc_of[i]);
    }

    // D(S) equals graph reachability outside S.
    for (const auto& scc : dec.sccs) {
      std::set<std::size_t> reach;
      std::vector<std::size_t> stack(scc.vars.begin(), scc.vars.end());
      std::set<std::size_t> visited(stack.begin(), stack.end());
      while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        for (auto w : graph.successors[v]) {
          if (visited.insert(w).second) stack.push_back(w);
        }
      }
      for (auto v : visited) {
        if (!std::binary_search(scc.vars.begin(), scc.vars.end(), v)) reach.insert(v);
      }
      CHECK(std::vector<std::size_t>(reach.begin(), reach.end()) == scc.reach);
    }

    // Longest paths in the SCC DAG: count SCCs and nonlinear SCCs.
    std::size_t max_total = 0;
    std::size_t max_nonlinear = 0;
    std::function<void(std::size_t, std::size_t, std::size_t)> walk =
        [&](std::size_t s, std::size_t total, std::size_t nonlinear) {
          total += 1;
          nonlinear += dec.sccs[s].nonlinear ? 1 : 0;
          max_total = std::max(max_total, total);
          max_nonlinear = std::max(max_nonlinear, nonlinear);
          for (auto t : dec.sccs[s].depends_on) walk(t, total, nonlinear);
        };
    for (std::size_t s = 0; s < dec.sccs.size(); ++s) walk(s, 0, 0);
    CHECK(max_total == dec.depth);
    CHECK(max_nonlinear == dec.nonlinear_depth);

    const auto again = decompose(graph, sys);
    REQUIRE(again.sccs.size() == dec.sccs.size());
    for (std::size_t s = 0; s < dec.sccs.size(); ++s) CHECK(again.sccs[s].vars == dec.sccs[s].vars);
  }
}
