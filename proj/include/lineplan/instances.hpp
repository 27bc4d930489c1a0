#ifndef LINEPLAN_INSTANCES_HPP_
#define LINEPLAN_INSTANCES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "lineplan/network.hpp"

namespace lineplan {

struct Params {
  double transfer_penalty = 5.0;  // minutes
  double dwell = 1.0;             // minutes
  double gamma = 0.0;
  double budget = 0.0;
  bool bidirectional = true;
  std::vector<int> coverage_exempt_edges;
};

struct Instance {
  Ptn ptn;
  std::vector<Line> lines;
  Demand demand;
  Params params;

  void validate() const;
  Cgn make_cgn(std::vector<std::string>* warnings = nullptr) const;
};

// Seeded grid family: rows x cols stations, full horizontal and vertical
// lines plus L-shaped lines sampled up to the pool target. Costs follow the
// per-edge rule d = op_cost_per_edge * N and e = setup_cost_factor * d.
struct GridSpec {
  int rows = 5, cols = 5;
  double edge_run_time = 6.0;
  double dwell = 1.0;
  double transfer_penalty = 5.0;
  int pool_size = 120;
  double op_cost_per_edge = 8.0;
  double setup_cost_factor = 1.5;
  double f_min = 1.0, f_max = 5.0;
  int od_pairs = 567;
  int max_pax_per_od = 8;
  double gamma = 0.05;
  double budget_percent = 100.0;  // of the surrogate baseline budget
  std::uint64_t seed = 1;
};

Instance gen_grid(const GridSpec& spec);

// Greedy set-cover surrogate for the baseline budget: repeatedly picks the
// line with the best (setup + f_min * operating cost) per newly covered edge
// and returns the total cost of the chosen cover. Deterministic; reported as
// a surrogate, not as the cost-minimal plan value.
double surrogate_baseline_budget(const Instance& inst);

// Independent feasibility audit of an integral plan against the raw instance
// data: budget, edge coverage, frequency windows. Detached from the master
// model on purpose.
struct PlanAudit {
  bool budget_ok = true;
  bool coverage_ok = true;
  bool frequency_ok = true;
  double cost = 0;
  std::vector<int> uncovered_edges;
  std::vector<int> bad_frequency_lines;
  bool ok() const { return budget_ok && coverage_ok && frequency_ok; }
};

PlanAudit audit_plan(const Instance& inst, const std::vector<char>& operated,
                     const std::vector<double>& frequency);

}  // namespace lineplan

#endif  // LINEPLAN_INSTANCES_HPP_
