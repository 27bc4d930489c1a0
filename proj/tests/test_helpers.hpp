#ifndef LINEPLAN_TESTS_HELPERS_HPP_
#define LINEPLAN_TESTS_HELPERS_HPP_

#include <algorithm>
#include <set>
#include <vector>

#include "lineplan/network.hpp"
#include "lineplan/shortest_path.hpp"

namespace lineplan::testing {

// The four-station micro network: stations A=0, B=1, C=2, D=3; tracks
// A-B, B-C, A-C, C-D; line 0 = A-C-D, line 1 = A-B-C. Run times 1 minute,
// no dwell, transfer penalty 5 by default.
inline Ptn micro_ptn() {
  Ptn ptn;
  ptn.stations = {{0, "A"}, {1, "B"}, {2, "C"}, {3, "D"}};
  ptn.edges = {{0, 0, 1, 1.0}, {1, 1, 2, 1.0}, {2, 0, 2, 1.0}, {3, 2, 3, 1.0}};
  return ptn;
}

inline std::vector<Line> micro_pool() {
  Line l1;
  l1.id = 0;
  l1.stations = {0, 2, 3};
  l1.op_cost = 16.0;
  l1.setup_cost = 24.0;
  l1.f_min = 1.0;
  l1.f_max = 5.0;
  Line l2 = l1;
  l2.id = 1;
  l2.stations = {0, 1, 2};
  return {l1, l2};
}

// All simple origin->destination routes in the pricing view, as arc id lists.
// Depth-first enumeration; `cap` guards against blow-ups in misuse.
inline std::vector<std::vector<int>> enumerate_routes(const Cgn& cgn, int origin, int destination,
                                                      std::size_t cap = 200000) {
  PricingView view = pricing_graph(cgn, origin, destination);
  std::vector<std::vector<int>> out;
  std::vector<int> stack;
  std::vector<char> visited(cgn.num_nodes(), 0);
  int target = cgn.station_node(destination);

  auto dfs = [&](auto&& self, int node) -> void {
    if (out.size() >= cap) throw SolveError("route enumeration cap hit");
    if (node == target) {
      out.push_back(stack);
      return;
    }
    visited[node] = 1;
    for (int k = cgn.out_start[node]; k < cgn.out_start[node + 1]; ++k) {
      const CgnArc& a = cgn.arcs[cgn.out_arcs[k]];
      if (!view.usable(a) || visited[a.head]) continue;
      stack.push_back(a.id);
      self(self, a.head);
      stack.pop_back();
    }
    visited[node] = 0;
  };
  dfs(dfs, cgn.station_node(origin));
  std::sort(out.begin(), out.end());
  return out;
}

inline double route_weight(const std::vector<int>& arcs, std::span<const double> w) {
  double s = 0;
  for (int a : arcs) s += w[a];
  return s;
}

}  // namespace lineplan::testing

#endif
