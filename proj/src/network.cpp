#include "lineplan/network.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace lineplan {

int Ptn::edge_between(int a, int b) const {
  for (const TrackEdge& e : edges) {
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return e.id;
  }
  return -1;
}

void Ptn::validate() const {
  const int n = num_stations();
  for (int i = 0; i < n; ++i) {
    if (stations[i].id != i)
      throw ValidationError("station ids must be dense 0..|S|-1, got id " +
                            std::to_string(stations[i].id) + " at position " + std::to_string(i));
  }
  std::unordered_set<long long> seen;
  for (size_t i = 0; i < edges.size(); ++i) {
    const TrackEdge& e = edges[i];
    if (e.id != static_cast<int>(i)) throw ValidationError("edge ids must be dense 0..|E|-1");
    if (e.a < 0 || e.a >= n || e.b < 0 || e.b >= n)
      throw ValidationError("edge " + std::to_string(e.id) + " references unknown station");
    if (e.a == e.b) throw ValidationError("edge " + std::to_string(e.id) + " is a self-loop");
    if (e.run_time <= 0) throw ValidationError("edge " + std::to_string(e.id) + " needs run_time > 0");
    long long key = static_cast<long long>(std::min(e.a, e.b)) * n + std::max(e.a, e.b);
    if (!seen.insert(key).second)
      throw ValidationError("duplicate track edge between stations " + std::to_string(e.a) +
                            " and " + std::to_string(e.b));
  }
}

int Cgn::travel_node(int station, int line) const {
  for (size_t i = 0; i < travel_nodes.size(); ++i) {
    if (travel_nodes[i].station == station && travel_nodes[i].line == line)
      return num_stations + static_cast<int>(i);
  }
  return -1;
}

int Cgn::count(ArcKind k) const {
  int c = 0;
  for (const CgnArc& a : arcs)
    if (a.kind == k) ++c;
  return c;
}

std::vector<int> Cgn::travel_arc_ids() const {
  std::vector<int> ids;
  for (const CgnArc& a : arcs)
    if (a.kind == ArcKind::Travel) ids.push_back(a.id);
  return ids;
}

namespace {

void validate_pool(const Ptn& ptn, const std::vector<Line>& pool) {
  if (pool.empty()) throw ValidationError("line pool is empty");
  for (size_t i = 0; i < pool.size(); ++i) {
    const Line& l = pool[i];
    if (l.id != static_cast<int>(i)) throw ValidationError("line ids must be dense 0..|L|-1");
    if (l.stations.size() < 2)
      throw ValidationError("line " + std::to_string(l.id) + " has fewer than 2 stations");
    std::unordered_set<int> visited;
    for (size_t k = 0; k < l.stations.size(); ++k) {
      int s = l.stations[k];
      if (s < 0 || s >= ptn.num_stations())
        throw ValidationError("line " + std::to_string(l.id) + " references unknown station");
      if (!visited.insert(s).second)
        throw ValidationError("line " + std::to_string(l.id) + " repeats station " +
                              std::to_string(s) + "; lines must be simple paths");
      if (k > 0 && ptn.edge_between(l.stations[k - 1], s) < 0)
        throw ValidationError("line " + std::to_string(l.id) + " is not a path: no track between " +
                              std::to_string(l.stations[k - 1]) + " and " + std::to_string(s));
    }
    if (l.op_cost < 0 || l.setup_cost < 0)
      throw ValidationError("line " + std::to_string(l.id) + " has negative costs");
    if (l.f_min < 0 || l.f_max < l.f_min)
      throw ValidationError("line " + std::to_string(l.id) + " has an invalid frequency window");
  }
}

}  // namespace

Cgn build_cgn(const Ptn& ptn, const std::vector<Line>& pool, const CgnConfig& cfg,
              std::vector<std::string>* warnings) {
  ptn.validate();
  validate_pool(ptn, pool);
  if (!cfg.gamma_per_line.empty() && cfg.gamma_per_line.size() != pool.size())
    throw ValidationError("gamma_per_line must have one entry per line");

  Cgn g;
  g.num_stations = ptn.num_stations();
  g.bidirectional = cfg.bidirectional;

  // travel nodes, ordered by (line, position along line)
  std::vector<std::vector<int>> node_of_line(pool.size());  // line -> per-position node id
  std::unordered_map<long long, int> node_index;            // station*|L|+line -> node id
  for (const Line& l : pool) {
    node_of_line[l.id].reserve(l.stations.size());
    for (int s : l.stations) {
      int node = g.num_stations + static_cast<int>(g.travel_nodes.size());
      g.travel_nodes.push_back({s, l.id});
      node_of_line[l.id].push_back(node);
      node_index[static_cast<long long>(s) * pool.size() + l.id] = node;
    }
  }

  // station coverage check (every station must lie on >= 1 line)
  {
    std::vector<char> on_line(ptn.num_stations(), 0);
    for (const Line& l : pool)
      for (int s : l.stations) on_line[s] = 1;
    for (int s = 0; s < ptn.num_stations(); ++s)
      if (!on_line[s])
        throw ValidationError("station " + std::to_string(s) + " (" + ptn.stations[s].name +
                              ") is not served by any line");
  }
  // edge coverage: a gap makes the coverage constraint infeasible, warn only
  if (warnings) {
    std::vector<char> covered(ptn.edges.size(), 0);
    for (const Line& l : pool)
      for (size_t k = 1; k < l.stations.size(); ++k)
        covered[ptn.edge_between(l.stations[k - 1], l.stations[k])] = 1;
    for (const TrackEdge& e : ptn.edges)
      if (!covered[e.id])
        warnings->push_back("track edge " + std::to_string(e.id) + " is covered by no line");
  }

  auto gamma_of = [&](int line) {
    return cfg.gamma_per_line.empty() ? cfg.gamma : cfg.gamma_per_line[line];
  };
  auto push_arc = [&](ArcKind kind, int tail, int head, double cost, double gamma, int line) {
    CgnArc a;
    a.id = static_cast<int>(g.arcs.size());
    a.kind = kind;
    a.tail = tail;
    a.head = head;
    a.base_cost = cost;
    a.crowding_factor = gamma;
    a.line = line;
    g.arcs.push_back(a);
  };

  // travel arcs; cost = run time + dwell at the head station
  for (const Line& l : pool) {
    const auto& nodes = node_of_line[l.id];
    for (size_t k = 1; k < l.stations.size(); ++k) {
      double run = ptn.edges[ptn.edge_between(l.stations[k - 1], l.stations[k])].run_time;
      push_arc(ArcKind::Travel, nodes[k - 1], nodes[k], run + cfg.dwell, gamma_of(l.id), l.id);
      if (cfg.bidirectional)
        push_arc(ArcKind::Travel, nodes[k], nodes[k - 1], run + cfg.dwell, gamma_of(l.id), l.id);
    }
  }

  // board/alight at every (station, line) incidence
  for (const Line& l : pool) {
    const auto& nodes = node_of_line[l.id];
    for (size_t k = 0; k < l.stations.size(); ++k) {
      push_arc(ArcKind::Board, l.stations[k], nodes[k], 0.0, 0.0, -1);
      push_arc(ArcKind::Alight, nodes[k], l.stations[k], 0.0, 0.0, -1);
    }
  }

  // transfer arcs between reachable/continuable travel nodes
  std::vector<char> has_in(g.num_nodes(), 0), has_out(g.num_nodes(), 0);
  for (const CgnArc& a : g.arcs) {
    if (a.kind == ArcKind::Travel) {
      has_out[a.tail] = 1;
      has_in[a.head] = 1;
    }
  }
  for (int s = 0; s < ptn.num_stations(); ++s) {
    std::vector<int> here;  // travel nodes at station s, ordered by line id
    for (size_t i = 0; i < g.travel_nodes.size(); ++i)
      if (g.travel_nodes[i].station == s) here.push_back(g.num_stations + static_cast<int>(i));
    for (int u : here) {
      if (!has_in[u]) continue;
      for (int v : here) {
        if (u == v || g.travel_nodes[u - g.num_stations].line == g.travel_nodes[v - g.num_stations].line)
          continue;
        if (!has_out[v]) continue;
        push_arc(ArcKind::Transfer, u, v, cfg.transfer_penalty, 0.0, -1);
      }
    }
  }

  // CSR adjacency
  g.out_start.assign(g.num_nodes() + 1, 0);
  for (const CgnArc& a : g.arcs) g.out_start[a.tail + 1]++;
  for (int i = 0; i < g.num_nodes(); ++i) g.out_start[i + 1] += g.out_start[i];
  g.out_arcs.resize(g.arcs.size());
  std::vector<int> fill = g.out_start;
  for (const CgnArc& a : g.arcs) g.out_arcs[fill[a.tail]++] = a.id;

  return g;
}

PricingView pricing_graph(const Cgn& cgn, int origin, int destination) {
  if (origin < 0 || origin >= cgn.num_stations)
    throw ValidationError("pricing origin " + std::to_string(origin) + " is not a station");
  if (destination < 0 || destination >= cgn.num_stations)
    throw ValidationError("pricing destination " + std::to_string(destination) + " is not a station");
  if (origin == destination)
    throw ValidationError("pricing requires origin != destination, got station " + std::to_string(origin));
  PricingView v;
  v.cgn = &cgn;
  v.origin = origin;
  v.destination = destination;
  return v;
}

PricingView pricing_graph_all_destinations(const Cgn& cgn, int origin) {
  if (origin < 0 || origin >= cgn.num_stations)
    throw ValidationError("pricing origin " + std::to_string(origin) + " is not a station");
  PricingView v;
  v.cgn = &cgn;
  v.origin = origin;
  v.any_destination = true;
  return v;
}

bool is_valid_route(const Cgn& cgn, int origin, int destination, const std::vector<int>& arcs) {
  if (arcs.empty() || origin == destination) return false;
  PricingView view = pricing_graph(cgn, origin, destination);
  int at = cgn.station_node(origin);
  std::unordered_set<int> visited{at};
  for (int id : arcs) {
    if (id < 0 || id >= cgn.num_arcs()) return false;
    const CgnArc& a = cgn.arcs[id];
    if (a.tail != at || !view.usable(a)) return false;
    at = a.head;
    if (!visited.insert(at).second) return false;
  }
  return at == cgn.station_node(destination);
}

}  // namespace lineplan
