#ifndef LINEPLAN_ORCHESTRATOR_HPP_
#define LINEPLAN_ORCHESTRATOR_HPP_

#include <memory>
#include <string>
#include <vector>

#include "lineplan/cuts.hpp"
#include "lineplan/instances.hpp"
#include "lineplan/master.hpp"
#include "lineplan/pricing.hpp"

namespace lineplan {

// Iteration ordering of cut and column generation:
//   Fctp - cuts first, price only when no cut was added
//   Fptc - price first, cut only when no column was added
//   Apac - both every iteration
enum class Variant : unsigned char { Fctp, Fptc, Apac };

const char* to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct Controls {
  Variant variant = Variant::Fctp;
  // column pool management: purge when the average number of live routes per
  // OD exceeds delta1; purged are routes with reduced cost above delta2
  double delta1 = 5.0;
  double delta2 = 10.0;
  // early-stop schedule: stop a phase when the relative improvement over the
  // last `window` iterations falls below `eps`; per dive round the window
  // shrinks by window_step (floor window_min) and eps grows by eps_step
  int window0 = 20;
  double eps0 = 1e-4;  // 0.01%
  double eps_step = 5e-4;
  int window_step = 1;
  int window_min = 1;
  bool early_stop = true;

  double tol_violation = 1e-5;
  double tol_slack = 1e-6;
  double tol_reduced_cost = 1e-7;
  double eps_frequency = 1e-6;
  double integrality_tol = 1e-6;
  int max_phase_iterations = 2000;
  int max_farkas_rounds = 25;
  bool parallel = true;
  LpOptions lp;

  // wide-network preset: shorter window, coarser threshold
  static Controls large_instance_preset();

  CutConfig cut_config() const;
};

struct IterationLog {
  int dive_round = 0;
  int iteration = 0;
  double rmp_objective = 0;
  int cuts_added = 0, cuts_retired = 0;
  int cols_added = 0, cols_purged = 0;
  double rmp_seconds = 0, pricing_seconds = 0;
};

struct SolveReport {
  bool feasible = true;
  std::string infeasibility;
  std::vector<double> infeasibility_certificate;  // Farkas ray by row id, if any
  Variant variant = Variant::Fctp;

  double root_rmp_objective = 0;
  double lp_bound = 0;  // root RMP value plus the column-generation dual correction
  TrueObjective objective;
  double gap = 0;  // (perceived - lp_bound) / max(lp_bound, 1)
  bool budget_overrun = false;
  std::vector<int> repaired_lines;  // coverage repairs after the dive

  int colgen_iterations = 0;
  int dive_rounds = 0;
  int farkas_rounds = 0;
  int rmp_solves = 0;
  int pricing_rounds = 0;
  int cuts_added = 0, cuts_retired = 0, cols_added = 0, cols_purged = 0;
  double rmp_seconds = 0, pricing_seconds = 0, total_seconds = 0;
  std::vector<IterationLog> iterations;
  std::vector<double> per_round_objective;  // RMP value at the end of each dive round
};

struct RouteFlow {
  int origin = -1, destination = -1;
  std::vector<int> arcs;
  double flow = 0;
};

struct SolveResult {
  LinePlan plan;
  SolveReport report;
  std::vector<double> arc_flows;  // by arc id, final routing
  std::vector<RouteFlow> route_flows;
};

struct PhaseResult {
  LpSolution solution;
  bool infeasible = false;     // no Farkas repair could restore the master
  bool fully_converged = false;  // no violated cuts and no negative columns
  bool stagnated = false;
  int iterations = 0;
};

// Drives one master model through cut-and-column generation and the diving
// heuristic. Exposed stepwise for tests; `solve_lpp_c` runs the whole thing.
class CutColGenSolver {
 public:
  CutColGenSolver(const Instance& inst, const Controls& controls);

  PhaseResult colgen_phase(int dive_round, bool force_full_convergence = false);
  // one fixing step: picks the unfixed line with maximal frequency (budget
  // permitting), fixes it to 1; returns the line id or -1 when none qualifies
  int fix_next_line(const LpSolution& sol);
  bool plan_is_integral(const LpSolution& sol) const;

  SolveResult run();

  MasterModel& master() { return *master_; }
  const Cgn& cgn() const { return cgn_; }
  const Instance& instance() const { return *inst_; }
  SolveReport& report() { return report_; }

  double committed_cost(const LpSolution& sol) const;
  double lagrangian_bound(const LpSolution& sol);

 private:
  const Instance* inst_;
  Controls controls_;
  Cgn cgn_;
  std::unique_ptr<MasterModel> master_;
  SolveReport report_;
  std::vector<char> fixed_one_;  // lines fixed to 1 so far

  int cut_round(const LpSolution& sol);
  int price_round(const LpSolution& sol, double* min_psi = nullptr);
  LpSolution solve_master_timed();
};

SolveResult solve_lpp_c(const Instance& inst, const Controls& controls);

}  // namespace lineplan

#endif  // LINEPLAN_ORCHESTRATOR_HPP_
