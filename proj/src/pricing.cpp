#include "lineplan/pricing.hpp"

#include <algorithm>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lineplan/shortest_path.hpp"

namespace lineplan {

DualSnapshot duals_from(const MasterModel& m, const LpSolution& sol) {
  DualSnapshot d;
  const Cgn& g = m.cgn();
  d.arc_dual.assign(g.num_arcs(), 0.0);
  for (const CgnArc& a : g.arcs) d.arc_dual[a.id] = sol.dual[m.flow_row(a.id)];
  d.od_dual.assign(m.demand().size(), 0.0);
  for (int p = 0; p < m.demand().size(); ++p) d.od_dual[p] = sol.dual[m.demand_row(p)];
  return d;
}

DualSnapshot farkas_from(const MasterModel& m, const LpSolution& sol) {
  if (sol.farkas.empty()) throw ValidationError("farkas_from: solution carries no Farkas ray");
  DualSnapshot d;
  d.farkas = true;
  const Cgn& g = m.cgn();
  d.arc_dual.assign(g.num_arcs(), 0.0);
  for (const CgnArc& a : g.arcs) d.arc_dual[a.id] = sol.farkas[m.flow_row(a.id)];
  d.od_dual.assign(m.demand().size(), 0.0);
  for (int p = 0; p < m.demand().size(); ++p) d.od_dual[p] = sol.farkas[m.demand_row(p)];
  return d;
}

std::vector<PricedRoute> price_all(const Cgn& cgn, const Demand& demand, const DualSnapshot& duals,
                                   const PricingOptions& opts) {
  // group ODs by origin, keeping origin order stable
  std::map<int, std::vector<int>> by_origin;
  for (int p = 0; p < demand.size(); ++p) by_origin[demand.od_pairs[p].origin].push_back(p);
  std::vector<std::pair<int, std::vector<int>>> groups(by_origin.begin(), by_origin.end());
  const int G = static_cast<int>(groups.size());

  std::vector<std::vector<PricedRoute>> found(G);
  std::exception_ptr error;

  auto run_origin = [&](int gi) {
    const auto& [origin, ods] = groups[gi];
    SpTree tree = shortest_paths(pricing_graph_all_destinations(cgn, origin),
                                 std::span<const double>(duals.arc_dual));
    for (int p : ods) {
      int dest = demand.od_pairs[p].destination;
      double dist = tree.dist_to_station(cgn, dest);
      if (dist == kInf) continue;  // disconnected: nothing to price out
      double psi = -duals.od_dual[p] + dist;
      if (psi < -opts.tol) {
        PricedRoute pr;
        pr.od_index = p;
        pr.arcs = tree.route_to_station(cgn, dest);
        pr.reduced_cost = psi;
        found[gi].push_back(std::move(pr));
      }
    }
  };

#ifdef _OPENMP
  if (opts.parallel && G > 1) {
#pragma omp parallel for schedule(dynamic)
    for (int gi = 0; gi < G; ++gi) {
      try {
        run_origin(gi);
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
  } else {
    for (int gi = 0; gi < G; ++gi) run_origin(gi);
  }
#else
  for (int gi = 0; gi < G; ++gi) run_origin(gi);
#endif
  if (error) std::rethrow_exception(error);

  std::vector<PricedRoute> out;
  for (auto& f : found)
    for (auto& pr : f) out.push_back(std::move(pr));
  // by construction grouped by origin; order ODs within the result
  std::sort(out.begin(), out.end(),
            [](const PricedRoute& a, const PricedRoute& b) { return a.od_index < b.od_index; });
  return out;
}

std::vector<PricedRoute> farkas_price(const Cgn& cgn, const Demand& demand,
                                      const DualSnapshot& farkas_duals, const PricingOptions& opts) {
  if (!farkas_duals.farkas)
    throw ValidationError("farkas_price expects duals marked as a Farkas ray");
  return price_all(cgn, demand, farkas_duals, opts);
}

}  // namespace lineplan
