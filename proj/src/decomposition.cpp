#include "rdnm/decomposition.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <set>

namespace rdnm {

bool DependencyGraph::has_edge(std::size_t from, std::size_t to) const {
  const auto& succ = successors.at(from);
  return std::binary_search(succ.begin(), succ.end(), to);
}

DependencyGraph build_graph(const MonotoneSystem& sys) {
  DependencyGraph g;
  g.successors.resize(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) {
    auto& succ = g.successors[i];
    for (const auto& m : sys.equation(i)) {
      for (const auto& [v, e] : m.exponents) succ.push_back(v);
    }
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
  }
  return g;
}

namespace {

constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();

// Iterative Tarjan; returns the component id of every node.
std::vector<std::size_t> strongly_connected(const DependencyGraph& g, std::size_t& count) {
  const std::size_t n = g.size();
  std::vector<std::size_t> index(n, kUnvisited);
  std::vector<std::size_t> low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> comp(n, kUnvisited);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (node, next successor position)
  std::size_t next_index = 0;
  count = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      const auto& succ = g.successors[v];
      if (pos < succ.size()) {
        const std::size_t w = succ[pos++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t w = 0;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
        } while (w != v);
        ++count;
      }
      const std::size_t finished = v;
      call.pop_back();
      if (!call.empty()) {
        const std::size_t parent = call.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  return comp;
}

}  // namespace

std::vector<std::vector<std::size_t>> Decomposition::levels() const {
  std::vector<std::vector<std::size_t>> out(depth);
  for (std::size_t s = 0; s < sccs.size(); ++s) out[sccs[s].height - 1].push_back(s);
  return out;
}

Decomposition decompose(const DependencyGraph& graph, const MonotoneSystem& sys) {
  if (graph.size() != sys.size()) throw std::invalid_argument("decompose: graph/system mismatch");
  const std::size_t n = sys.size();
  std::size_t count = 0;
  const auto comp = strongly_connected(graph, count);

  std::vector<std::vector<std::size_t>> members(count);
  for (std::size_t v = 0; v < n; ++v) members[comp[v]].push_back(v);

  std::vector<std::set<std::size_t>> deps(count);
  std::vector<std::vector<std::size_t>> dependents(count);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto w : graph.successors[v]) {
      if (comp[w] != comp[v] && deps[comp[v]].insert(comp[w]).second) {
        dependents[comp[w]].push_back(comp[v]);
      }
    }
  }

  // Kahn's algorithm: an SCC becomes ready once everything it depends on is
  // placed; among ready SCCs the one with the smallest variable goes first.
  std::vector<std::size_t> pending(count);
  using Entry = std::pair<std::size_t, std::size_t>;  // (smallest variable, component)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> ready;
  for (std::size_t c = 0; c < count; ++c) {
    pending[c] = deps[c].size();
    if (pending[c] == 0) ready.emplace(members[c].front(), c);
  }
  std::vector<std::size_t> position(count);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const auto c = ready.top().second;
    ready.pop();
    position[c] = order.size();
    order.push_back(c);
    for (const auto up : dependents[c]) {
      if (--pending[up] == 0) ready.emplace(members[up].front(), up);
    }
  }

  Decomposition out;
  out.scc_of.resize(n);
  out.sccs.resize(count);
  std::vector<bool> in_scc(n, false);
  for (std::size_t s = 0; s < count; ++s) {
    const auto c = order[s];
    Scc& scc = out.sccs[s];
    scc.vars = members[c];
    for (const auto v : scc.vars) {
      out.scc_of[v] = s;
      in_scc[v] = true;
    }
    for (const auto v : scc.vars) {
      for (const auto& m : sys.equation(v)) {
        std::uint32_t own = 0;
        for (const auto& [w, e] : m.exponents) {
          if (in_scc[w]) own += e;
        }
        if (own >= 2) scc.nonlinear = true;
      }
    }
    for (const auto v : scc.vars) in_scc[v] = false;

    std::set<std::size_t> reach;
    std::size_t below_height = 0;
    std::size_t below_nonlinear = 0;
    for (const auto dc : deps[c]) {
      const Scc& lower = out.sccs[position[dc]];
      scc.depends_on.push_back(position[dc]);
      reach.insert(lower.vars.begin(), lower.vars.end());
      reach.insert(lower.reach.begin(), lower.reach.end());
      below_height = std::max(below_height, lower.height);
      below_nonlinear = std::max(below_nonlinear, lower.nonlinear_height);
    }
    std::sort(scc.depends_on.begin(), scc.depends_on.end());
    scc.reach.assign(reach.begin(), reach.end());
    scc.height = below_height + 1;
    scc.nonlinear_height = below_nonlinear + (scc.nonlinear ? 1 : 0);
    out.depth = std::max(out.depth, scc.height);
    out.nonlinear_depth = std::max(out.nonlinear_depth, scc.nonlinear_height);
  }
  return out;
}

}  // namespace rdnm
