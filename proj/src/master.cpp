#include "lineplan/master.hpp"

#include <algorithm>
#include <cmath>

#include "lineplan/shortest_path.hpp"

namespace lineplan {

int RoutePool::add(int od_index, std::vector<int> arcs, double base_cost, int z_col) {
  int id = static_cast<int>(routes_.size());
  Route r;
  r.id = id;
  r.od_index = od_index;
  r.base_cost = base_cost;
  r.z_col = z_col;
  r.live = true;
  if (static_cast<int>(by_od_.size()) <= od_index) by_od_.resize(od_index + 1);
  by_od_[od_index].push_back(id);
  for (int a : arcs) {
    if (static_cast<int>(by_arc_.size()) <= a) by_arc_.resize(a + 1);
    by_arc_[a].push_back(id);
  }
  index_[{od_index, arcs}] = id;
  r.arcs = std::move(arcs);
  routes_.push_back(std::move(r));
  ++live_;
  return id;
}

void RoutePool::drop(int route_id) {
  Route& r = routes_.at(route_id);
  if (!r.live) return;
  r.live = false;
  index_.erase({r.od_index, r.arcs});
  --live_;
}

bool RoutePool::contains(int od_index, const std::vector<int>& arcs) const {
  return index_.count({od_index, arcs}) > 0;
}

std::vector<int> RoutePool::of_od(int od_index) const {
  std::vector<int> out;
  if (od_index < static_cast<int>(by_od_.size())) {
    for (int id : by_od_[od_index])
      if (routes_[id].live) out.push_back(id);
  }
  return out;
}

std::vector<int> RoutePool::through_arc(int arc) const {
  std::vector<int> out;
  if (arc < static_cast<int>(by_arc_.size())) {
    for (int id : by_arc_[arc])
      if (routes_[id].live) out.push_back(id);
  }
  return out;
}

std::vector<int> RoutePool::all() const {
  std::vector<int> out;
  for (const Route& r : routes_)
    if (r.live) out.push_back(r.id);
  return out;
}

int RoutePool::live_count(int od_index) const {
  int c = 0;
  if (od_index < static_cast<int>(by_od_.size()))
    for (int id : by_od_[od_index])
      if (routes_[id].live) ++c;
  return c;
}

// ---------------------------------------------------------------------------

MasterModel::MasterModel(const Ptn& ptn, const std::vector<Line>& pool, const Cgn& cgn,
                         const Demand& demand, const MasterConfig& cfg,
                         const std::vector<std::vector<int>>& initial_routes)
    : ptn_(&ptn), pool_(&pool), cgn_(&cgn), demand_(&demand), cfg_(cfg) {
  const int L = static_cast<int>(pool.size());
  const int A = cgn.num_arcs();
  const int P = demand.size();
  if (static_cast<int>(initial_routes.size()) != P)
    throw ValidationError("build_master needs one initial route list per OD pair");

  for (int p = 0; p < P; ++p) {
    const OdPair& od = demand.od_pairs[p];
    if (od.origin == od.destination) throw ValidationError("OD pair with origin == destination");
    if (od.passengers <= 0) throw ValidationError("OD pair with nonpositive demand");
    auto key = std::make_pair(od.origin, od.destination);
    if (od_index_.count(key)) throw ValidationError("duplicate OD pair in demand");
    od_index_[key] = p;
  }

  y_col_.assign(L, -1);
  w_col_.assign(L, -1);
  fixed_.assign(L, 0);
  for (const Line& l : pool) {
    y_col_[l.id] = lp_.add_column(0.0, 0.0, l.f_max);
    w_col_[l.id] = lp_.add_column(0.0, 0.0, 1.0);
  }

  x_col_.assign(A, -1);
  theta_col_.assign(A, -1);
  for (const CgnArc& a : cgn.arcs) {
    x_col_[a.id] = lp_.add_column(a.base_cost, 0.0, kInf);
    if (a.kind == ArcKind::Travel) theta_col_[a.id] = lp_.add_column(1.0, 0.0, kInf);
  }

  {
    std::vector<LpEntry> e;
    for (const Line& l : pool) {
      if (l.op_cost != 0) e.push_back({y_col_[l.id], l.op_cost});
      if (l.setup_cost != 0) e.push_back({w_col_[l.id], l.setup_cost});
    }
    budget_row_ = lp_.add_row(RowSense::LE, cfg_.budget, e);
  }

  cover_row_.assign(ptn.edges.size(), -1);
  if (cfg_.coverage) {
    for (const TrackEdge& e : ptn.edges) {
      if (std::find(cfg_.coverage_exempt_edges.begin(), cfg_.coverage_exempt_edges.end(), e.id) !=
          cfg_.coverage_exempt_edges.end())
        continue;
      std::vector<LpEntry> ent;
      for (const Line& l : pool)
        for (size_t k = 1; k < l.stations.size(); ++k)
          if (ptn.edge_between(l.stations[k - 1], l.stations[k]) == e.id)
            ent.push_back({w_col_[l.id], 1.0});
      cover_row_[e.id] = lp_.add_row(RowSense::GE, 1.0, ent);
    }
  }

  fmin_row_.assign(L, -1);
  fmax_row_.assign(L, -1);
  for (const Line& l : pool) {
    fmin_row_[l.id] =
        lp_.add_row(RowSense::GE, 0.0, {{y_col_[l.id], 1.0}, {w_col_[l.id], -l.f_min}});
    fmax_row_[l.id] =
        lp_.add_row(RowSense::LE, 0.0, {{y_col_[l.id], 1.0}, {w_col_[l.id], -l.f_max}});
  }

  flow_row_.assign(A, -1);
  for (const CgnArc& a : cgn.arcs)
    flow_row_[a.id] = lp_.add_row(RowSense::EQ, 0.0, {{x_col_[a.id], 1.0}});

  demand_row_.assign(P, -1);
  for (int p = 0; p < P; ++p)
    demand_row_[p] = lp_.add_row(RowSense::EQ, demand.od_pairs[p].passengers, {});

  for (int p = 0; p < P; ++p) {
    if (initial_routes[p].empty())
      throw ValidationError("missing initial route for OD pair " + std::to_string(p));
    AttachResult res = attach_route(p, initial_routes[p]);
    if (res.status != AttachStatus::Added)
      throw ValidationError("duplicate initial route for OD pair " + std::to_string(p));
  }
}

LpSolution MasterModel::solve() { return solve_lp(lp_, &basis_, cfg_.lp); }

AttachResult MasterModel::attach_route(int od_index, std::vector<int> arcs) {
  if (od_index < 0 || od_index >= demand_->size())
    throw ValidationError("attach_route: unknown OD index " + std::to_string(od_index));
  const OdPair& od = demand_->od_pairs[od_index];
  if (!is_valid_route(*cgn_, od.origin, od.destination, arcs))
    throw ValidationError("attach_route: not a simple origin->destination path for OD " +
                          std::to_string(od_index));
  if (routes_.contains(od_index, arcs)) {
    AttachResult res;
    res.status = AttachStatus::Duplicate;
    res.route_id = routes_.index_.at({od_index, arcs});
    res.z_col = routes_.route(res.route_id).z_col;
    return res;
  }
  double base_cost = 0;
  std::vector<LpEntry> entries;
  entries.reserve(arcs.size() + 1);
  entries.push_back({demand_row_[od_index], 1.0});
  for (int a : arcs) {
    base_cost += cgn_->arcs[a].base_cost;
    entries.push_back({flow_row_[a], -1.0});
  }
  int z = lp_.add_column(0.0, 0.0, kInf, entries);
  AttachResult res;
  res.status = AttachStatus::Added;
  res.z_col = z;
  res.route_id = routes_.add(od_index, std::move(arcs), base_cost, z);
  return res;
}

int MasterModel::purge_routes(const LpSolution& sol, double threshold) {
  int removed = 0;
  for (int id : routes_.all()) {
    const Route& r = routes_.route(id);
    // columns attached after the snapshot have no reduced cost yet
    if (r.z_col >= static_cast<int>(sol.reduced_cost.size())) continue;
    if (sol.reduced_cost[r.z_col] > threshold) {
      lp_.remove_column(r.z_col);
      routes_.drop(id);
      ++removed;
    }
  }
  return removed;
}

TrueObjective MasterModel::evaluate_true_objective(const LpSolution& sol) const {
  constexpr double kFlowTol = 1e-6;
  TrueObjective out;
  std::vector<int> stranded;
  for (const CgnArc& a : cgn_->arcs) {
    double x = sol.primal[x_col_[a.id]];
    out.travel += a.base_cost * x;
    if (a.kind != ArcKind::Travel || a.crowding_factor <= 0) continue;
    double y = sol.primal[y_col_[a.line]];
    if (x > kFlowTol && y <= kFlowTol) {
      stranded.push_back(a.id);
      continue;
    }
    if (y > kFlowTol) out.crowding += a.crowding_factor * x * x / y;
  }
  if (!stranded.empty()) {
    std::string msg = "flow on arcs of unoperated lines:";
    for (size_t i = 0; i < stranded.size() && i < 8; ++i) msg += " " + std::to_string(stranded[i]);
    throw SolveError(msg);
  }
  out.perceived = out.travel + out.crowding;
  return out;
}

LinePlan MasterModel::extract_plan(const LpSolution& sol, double integrality_tol) const {
  LinePlan plan;
  const int L = static_cast<int>(pool_->size());
  plan.operated.assign(L, 0);
  plan.frequency.assign(L, 0.0);
  for (int l = 0; l < L; ++l) {
    double w = sol.primal[w_col_[l]];
    plan.operated[l] = w > 1.0 - integrality_tol ? 1 : 0;
    plan.frequency[l] = plan.operated[l] ? sol.primal[y_col_[l]] : 0.0;
  }
  TrueObjective obj = evaluate_true_objective(sol);
  plan.travel_time = obj.travel;
  plan.crowding = obj.crowding;
  plan.perceived = obj.perceived;
  for (const CgnArc& a : cgn_->arcs)
    if (a.kind == ArcKind::Transfer) plan.transfers += sol.primal[x_col_[a.id]];
  return plan;
}

void MasterModel::fix_line(int line, bool operated) {
  fixed_[line] = 1;
  lp_.set_column_bounds(w_col_[line], operated ? 1.0 : 0.0, operated ? 1.0 : 0.0);
}

void MasterModel::set_budget(double budget) {
  cfg_.budget = budget;
  lp_.set_rhs(budget_row_, budget);
}

int MasterModel::od_index_of(int origin, int destination) const {
  auto it = od_index_.find({origin, destination});
  return it == od_index_.end() ? -1 : it->second;
}

std::vector<std::vector<int>> initial_shortest_routes(const Cgn& cgn, const Demand& demand) {
  std::vector<double> w(cgn.num_arcs());
  for (const CgnArc& a : cgn.arcs) w[a.id] = a.base_cost;
  // one Dijkstra per distinct origin
  std::vector<std::vector<int>> out(demand.size());
  std::map<int, SpTree> trees;
  for (int p = 0; p < demand.size(); ++p) {
    const OdPair& od = demand.od_pairs[p];
    auto it = trees.find(od.origin);
    if (it == trees.end()) {
      it = trees.emplace(od.origin,
                         shortest_paths_nonnegative(pricing_graph_all_destinations(cgn, od.origin), w))
               .first;
    }
    out[p] = it->second.route_to_station(cgn, od.destination);
    if (out[p].empty())
      throw ValidationError("OD pair " + std::to_string(od.origin) + "->" +
                            std::to_string(od.destination) + " is disconnected in the network");
  }
  return out;
}

}  // namespace lineplan
