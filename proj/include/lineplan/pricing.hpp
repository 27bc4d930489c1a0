#ifndef LINEPLAN_PRICING_HPP_
#define LINEPLAN_PRICING_HPP_

#include <vector>

#include "lineplan/lp.hpp"
#include "lineplan/master.hpp"
#include "lineplan/network.hpp"

namespace lineplan {

// Immutable dual view used by a pricing sweep: flow-row duals per arc and
// demand-row duals per OD, either from an optimal basis or a Farkas ray.
struct DualSnapshot {
  std::vector<double> arc_dual;  // by arc id
  std::vector<double> od_dual;   // by od index
  bool farkas = false;
};

DualSnapshot duals_from(const MasterModel& m, const LpSolution& sol);
DualSnapshot farkas_from(const MasterModel& m, const LpSolution& sol);

struct PricedRoute {
  int od_index = -1;
  std::vector<int> arcs;
  double reduced_cost = 0;  // -od_dual + sum of arc duals along the route
};

struct PricingOptions {
  double tol = 1e-7;    // only routes with reduced cost < -tol are returned
  bool parallel = true; // fan out across origins
};

// Minimum-reduced-cost route per OD pair; one shortest-path run per origin
// serves all of that origin's ODs. Deterministic regardless of thread count.
std::vector<PricedRoute> price_all(const Cgn& cgn, const Demand& demand, const DualSnapshot& duals,
                                   const PricingOptions& opts = {});

// Same sweep against a Farkas ray; negative entries point at routes whose
// insertion can restore feasibility.
std::vector<PricedRoute> farkas_price(const Cgn& cgn, const Demand& demand,
                                      const DualSnapshot& farkas_duals,
                                      const PricingOptions& opts = {});

}  // namespace lineplan

#endif  // LINEPLAN_PRICING_HPP_
