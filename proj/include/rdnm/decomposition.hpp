#pragma once

#include <cstddef>
#include <vector>

#include "rdnm/system.hpp"

namespace rdnm {

/// Edge i -> j whenever x_j occurs in a monomial of P_i.
struct DependencyGraph {
  std::vector<std::vector<std::size_t>> successors;  // ascending, no duplicates

  std::size_t size() const { return successors.size(); }
  bool has_edge(std::size_t from, std::size_t to) const;
};

DependencyGraph build_graph(const MonotoneSystem& sys);

struct Scc {
  std::vector<std::size_t> vars;        // ascending
  bool nonlinear = false;
  std::size_t height = 0;               // SCCs on the longest path starting here
  std::size_t nonlinear_height = 0;     // nonlinear SCCs on such a path
  std::vector<std::size_t> depends_on;  // SCC indices directly below, ascending
  std::vector<std::size_t> reach;       // D(S): variables below S reachable from S
};

/// SCCs in topological order, every SCC after all SCCs it depends on. Ties
/// are broken by the smallest contained variable index.
struct Decomposition {
  std::vector<Scc> sccs;
  std::vector<std::size_t> scc_of;  // variable -> SCC index
  std::size_t depth = 0;            // d
  std::size_t nonlinear_depth = 0;  // f

  /// SCC indices grouped by height, lowest first. SCCs in one group never
  /// depend on each other.
  std::vector<std::vector<std::size_t>> levels() const;
};

/// An SCC is nonlinear when some P_i, i in S, has a monomial of degree >= 2
/// in the variables of S; variables of lower SCCs count as constants.
Decomposition decompose(const DependencyGraph& graph, const MonotoneSystem& sys);

inline Decomposition decompose(const MonotoneSystem& sys) { return decompose(build_graph(sys), sys); }

}  // namespace rdnm
