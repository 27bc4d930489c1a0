#include "lineplan/shortest_path.hpp"

#include <algorithm>
#include <deque>
#include <queue>

namespace lineplan {

std::vector<int> SpTree::route_to_station(const Cgn& cgn, int station) const {
  int node = cgn.station_node(station);
  if (dist[node] == kInf) return {};
  std::vector<int> arcs;
  int guard = cgn.num_nodes() + 1;
  while (parent_arc[node] >= 0) {
    int a = parent_arc[node];
    arcs.push_back(a);
    node = cgn.arcs[a].tail;
    if (--guard < 0) throw SolveError("cycle in shortest-path parents; weights admit a zero/negative cycle");
  }
  std::reverse(arcs.begin(), arcs.end());
  return arcs;
}

SpTree shortest_paths_nonnegative(const PricingView& view, std::span<const double> weights) {
  const Cgn& g = *view.cgn;
  SpTree t;
  t.dist.assign(g.num_nodes(), kInf);
  t.parent_arc.assign(g.num_nodes(), -1);
  int src = g.station_node(view.origin);
  t.dist[src] = 0.0;

  using Item = std::pair<double, int>;  // (dist, node); node breaks ties deterministically
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  heap.push({0.0, src});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > t.dist[u]) continue;
    for (int k = g.out_start[u]; k < g.out_start[u + 1]; ++k) {
      const CgnArc& a = g.arcs[g.out_arcs[k]];
      if (!view.usable(a)) continue;
      double nd = d + weights[a.id];
      if (nd < t.dist[a.head]) {
        t.dist[a.head] = nd;
        t.parent_arc[a.head] = a.id;
        heap.push({nd, a.head});
      }
    }
  }
  return t;
}

SpTree shortest_paths_general(const PricingView& view, std::span<const double> weights) {
  const Cgn& g = *view.cgn;
  const int n = g.num_nodes();
  SpTree t;
  t.dist.assign(n, kInf);
  t.parent_arc.assign(n, -1);
  int src = g.station_node(view.origin);
  t.dist[src] = 0.0;

  std::deque<int> queue{src};
  std::vector<char> in_queue(n, 0);
  std::vector<int> passes(n, 0);
  in_queue[src] = 1;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    in_queue[u] = 0;
    if (++passes[u] > n + 1)
      throw SolveError("negative-cost cycle reachable from origin station " +
                       std::to_string(view.origin) + " in the pricing graph");
    double du = t.dist[u];
    for (int k = g.out_start[u]; k < g.out_start[u + 1]; ++k) {
      const CgnArc& a = g.arcs[g.out_arcs[k]];
      if (!view.usable(a)) continue;
      double nd = du + weights[a.id];
      if (nd < t.dist[a.head]) {
        t.dist[a.head] = nd;
        t.parent_arc[a.head] = a.id;
        if (!in_queue[a.head]) {
          // SLF ordering keeps label corrections cheap on these graphs
          if (!queue.empty() && nd < t.dist[queue.front()])
            queue.push_front(a.head);
          else
            queue.push_back(a.head);
          in_queue[a.head] = 1;
        }
      }
    }
  }
  return t;
}

SpTree shortest_paths(const PricingView& view, std::span<const double> weights) {
  const Cgn& g = *view.cgn;
  for (const CgnArc& a : g.arcs) {
    if (weights[a.id] < 0 && view.usable(a)) return shortest_paths_general(view, weights);
  }
  return shortest_paths_nonnegative(view, weights);
}

}  // namespace lineplan
