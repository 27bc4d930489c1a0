#ifndef LINEPLAN_MASTER_HPP_
#define LINEPLAN_MASTER_HPP_

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "lineplan/cuts.hpp"
#include "lineplan/lp.hpp"
#include "lineplan/network.hpp"

namespace lineplan {

// One passenger route held by the restricted master: an arc path plus its LP
// column. Purged routes keep their slot (ids stay stable) but go dead.
struct Route {
  int id = -1;
  int od_index = -1;
  std::vector<int> arcs;
  double base_cost = 0;  // cached sum of arc costs
  int z_col = -1;
  bool live = false;
};

class RoutePool {
 public:
  int add(int od_index, std::vector<int> arcs, double base_cost, int z_col);
  void drop(int route_id);
  const Route& route(int id) const { return routes_.at(id); }
  bool contains(int od_index, const std::vector<int>& arcs) const;
  // live route ids
  std::vector<int> of_od(int od_index) const;
  std::vector<int> through_arc(int arc) const;
  std::vector<int> all() const;
  int live_count() const { return live_; }
  int live_count(int od_index) const;
  int size() const { return static_cast<int>(routes_.size()); }

 private:
  std::vector<Route> routes_;
  std::vector<std::vector<int>> by_od_;
  std::vector<std::vector<int>> by_arc_;  // lazily filtered by live flag
  std::map<std::pair<int, std::vector<int>>, int> index_;
  int live_ = 0;

  friend class MasterModel;
};

// Integral (or relaxed) line plan with its exact objective split.
struct LinePlan {
  std::vector<char> operated;     // by line
  std::vector<double> frequency;  // by line
  double travel_time = 0;         // sum c_a x_a
  double crowding = 0;            // sum gamma x^2 / y over operated travel arcs
  double perceived = 0;
  double transfers = 0;           // total transfer-arc flow
  bool budget_overrun = false;
};

struct TrueObjective {
  double perceived = 0;
  double travel = 0;
  double crowding = 0;
};

struct MasterConfig {
  double budget = 0;
  bool coverage = true;                      // emit edge coverage rows
  std::vector<int> coverage_exempt_edges;    // rows skipped for these edges
  LpOptions lp;
};

enum class AttachStatus : unsigned char { Added, Duplicate };

struct AttachResult {
  AttachStatus status = AttachStatus::Added;
  int route_id = -1;
  int z_col = -1;
};

// Restricted master problem over a route subset: budget, coverage, frequency
// window, per-arc flow coupling and per-OD demand rows, with the cone handled
// by tangent cuts added on the side. Line selections are relaxed to [0,1].
class MasterModel {
 public:
  MasterModel(const Ptn& ptn, const std::vector<Line>& pool, const Cgn& cgn, const Demand& demand,
              const MasterConfig& cfg, const std::vector<std::vector<int>>& initial_routes);

  LpSolution solve();

  AttachResult attach_route(int od_index, std::vector<int> arcs);
  // removes live nonbasic routes whose reduced cost exceeds threshold
  int purge_routes(const LpSolution& sol, double threshold);

  TrueObjective evaluate_true_objective(const LpSolution& sol) const;
  LinePlan extract_plan(const LpSolution& sol, double integrality_tol = 1e-6) const;

  // diving support
  void fix_line(int line, bool operated);
  bool line_fixed(int line) const { return fixed_[line] != 0; }
  void set_budget(double budget);
  double budget() const { return cfg_.budget; }

  int od_index_of(int origin, int destination) const;  // -1 if absent

  // id maps
  int y_col(int line) const { return y_col_[line]; }
  int w_col(int line) const { return w_col_[line]; }
  int x_col(int arc) const { return x_col_[arc]; }
  int theta_col(int arc) const { return theta_col_[arc]; }  // -1 on non-travel arcs
  int flow_row(int arc) const { return flow_row_[arc]; }
  int demand_row(int od_index) const { return demand_row_[od_index]; }
  int budget_row() const { return budget_row_; }
  int coverage_row(int edge) const { return cover_row_[edge]; }

  const RoutePool& routes() const { return routes_; }
  const CutPool& cut_pool() const { return cuts_; }
  CutPool& cut_pool() { return cuts_; }
  const LpProblem& lp() const { return lp_; }
  LpProblem& lp() { return lp_; }
  LpBasis& basis() { return basis_; }

  const Cgn& cgn() const { return *cgn_; }
  const Demand& demand() const { return *demand_; }
  const std::vector<Line>& lines() const { return *pool_; }

 private:
  const Ptn* ptn_;
  const std::vector<Line>* pool_;
  const Cgn* cgn_;
  const Demand* demand_;
  MasterConfig cfg_;

  LpProblem lp_;
  LpBasis basis_;
  RoutePool routes_;
  CutPool cuts_;

  std::vector<int> y_col_, w_col_, x_col_, theta_col_, flow_row_;
  std::vector<int> demand_row_, cover_row_, fmin_row_, fmax_row_;
  std::vector<char> fixed_;
  int budget_row_ = -1;
  std::map<std::pair<int, int>, int> od_index_;
};

// Cheapest-route initialization: the base-cost shortest route per OD pair.
std::vector<std::vector<int>> initial_shortest_routes(const Cgn& cgn, const Demand& demand);

}  // namespace lineplan

#endif  // LINEPLAN_MASTER_HPP_
