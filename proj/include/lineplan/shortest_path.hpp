#ifndef LINEPLAN_SHORTEST_PATH_HPP_
#define LINEPLAN_SHORTEST_PATH_HPP_

#include <span>
#include <vector>

#include "lineplan/network.hpp"

namespace lineplan {

// Single-source shortest paths over a pricing view. Distances are over
// caller-supplied arc weights, unreachable nodes keep kInf.
struct SpTree {
  std::vector<double> dist;        // by node
  std::vector<int> parent_arc;     // by node, -1 at origin/unreached
  double dist_to_station(const Cgn& cgn, int station) const { return dist[cgn.station_node(station)]; }
  // arc sequence origin -> station node, empty if unreachable
  std::vector<int> route_to_station(const Cgn& cgn, int station) const;
};

// Dijkstra; requires weights[a] >= 0 for every usable arc.
SpTree shortest_paths_nonnegative(const PricingView& view, std::span<const double> weights);

// Deque-based label-correcting search that accepts negative weights.
// Throws SolveError if a negative-cost cycle is reachable from the origin.
SpTree shortest_paths_general(const PricingView& view, std::span<const double> weights);

// Picks the algorithm by scanning the weights once.
SpTree shortest_paths(const PricingView& view, std::span<const double> weights);

}  // namespace lineplan

#endif  // LINEPLAN_SHORTEST_PATH_HPP_
