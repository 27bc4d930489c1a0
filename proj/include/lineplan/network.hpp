#ifndef LINEPLAN_NETWORK_HPP_
#define LINEPLAN_NETWORK_HPP_

#include <optional>
#include <string>
#include <vector>

#include "lineplan/common.hpp"

namespace lineplan {

struct Station {
  int id = -1;
  std::string name;
};

struct TrackEdge {
  int id = -1;
  int a = -1, b = -1;   // endpoint station ids
  double run_time = 0;  // minutes
};

// A candidate line: a simple station path with operating economics.
struct Line {
  int id = -1;
  std::vector<int> stations;
  double op_cost = 0;     // cost per frequency unit
  double setup_cost = 0;  // one-off cost if operated
  double f_min = 1.0;     // trains/hour when operated
  double f_max = 5.0;
  int edge_count() const { return static_cast<int>(stations.size()) - 1; }
};

struct OdPair {
  int origin = -1;
  int destination = -1;
  double passengers = 0;  // per hour, > 0
};

struct Demand {
  std::vector<OdPair> od_pairs;
  int size() const { return static_cast<int>(od_pairs.size()); }
};

// Physical rail network: stations and undirected track edges.
struct Ptn {
  std::vector<Station> stations;
  std::vector<TrackEdge> edges;

  int num_stations() const { return static_cast<int>(stations.size()); }
  // id of the undirected edge {a,b}, or -1
  int edge_between(int a, int b) const;
  void validate() const;
};

enum class ArcKind : unsigned char { Travel, Transfer, Board, Alight };

struct CgnArc {
  int id = -1;
  ArcKind kind = ArcKind::Travel;
  int tail = -1, head = -1;    // CGN node ids
  double base_cost = 0;        // minutes
  double crowding_factor = 0;  // minutes*hour/passenger^2, travel arcs only
  int line = -1;               // owning line for travel arcs; -1 otherwise
};

struct CgnConfig {
  double transfer_penalty = 5.0;  // minutes
  double dwell = 1.0;             // minutes, folded into travel arc costs
  bool bidirectional = true;
  double gamma = 0.0;                         // crowding factor, all lines
  std::vector<double> gamma_per_line = {};    // optional per-line override
};

// Change-and-go network expanded from a PTN and a line pool.
//
// Node ids: stations first (0..|S|-1), then one travel node per
// (station, line) incidence. Travel arcs run along each line (both directions
// when bidirectional); board/alight arcs connect a station node to each of
// its travel nodes; transfer arcs connect travel nodes of distinct lines at
// a shared station, carrying the full transfer penalty.
//
// A transfer arc (s,l1)->(s,l2) is only created when it can appear inside a
// route: some travel arc arrives at (s,l1) and some travel arc leaves
// (s,l2). Immutable after construction.
struct Cgn {
  struct TravelNode {
    int station = -1;
    int line = -1;
  };

  int num_stations = 0;
  bool bidirectional = true;
  std::vector<TravelNode> travel_nodes;
  std::vector<CgnArc> arcs;

  // CSR adjacency over all nodes
  std::vector<int> out_start;  // size num_nodes()+1
  std::vector<int> out_arcs;   // arc ids ordered by tail, then arc id

  int num_nodes() const { return num_stations + static_cast<int>(travel_nodes.size()); }
  int num_arcs() const { return static_cast<int>(arcs.size()); }
  int station_node(int station) const { return station; }
  bool is_station_node(int node) const { return node < num_stations; }

  // travel node id for (station, line), -1 if the station is not on the line
  int travel_node(int station, int line) const;

  int count(ArcKind k) const;
  std::vector<int> travel_arc_ids() const;
};

Cgn build_cgn(const Ptn& ptn, const std::vector<Line>& pool, const CgnConfig& cfg,
              std::vector<std::string>* warnings = nullptr);

// Restriction of the CGN used for routing one OD pair: board arcs are usable
// only at the origin's station node and alight arcs only into the
// destination's station node, so station nodes can never be interior to a
// route. `any_destination` opens alight arcs into every station node, which
// serves all ODs of one origin with a single shortest-path run.
struct PricingView {
  const Cgn* cgn = nullptr;
  int origin = -1;       // station id
  int destination = -1;  // station id, or -1 with any_destination
  bool any_destination = false;

  bool usable(const CgnArc& a) const {
    switch (a.kind) {
      case ArcKind::Travel:
      case ArcKind::Transfer:
        return true;
      case ArcKind::Board:
        return a.tail == origin;
      case ArcKind::Alight:
        return any_destination || a.head == destination;
    }
    return false;
  }
};

PricingView pricing_graph(const Cgn& cgn, int origin, int destination);
PricingView pricing_graph_all_destinations(const Cgn& cgn, int origin);

// True iff `arcs` is a simple directed origin->destination path in the
// pricing view for (origin, destination).
bool is_valid_route(const Cgn& cgn, int origin, int destination, const std::vector<int>& arcs);

}  // namespace lineplan

#endif  // LINEPLAN_NETWORK_HPP_
