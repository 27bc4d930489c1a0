#include "lineplan/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace lineplan {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

const char* to_string(Variant v) {
  switch (v) {
    case Variant::Fctp: return "fctp";
    case Variant::Fptc: return "fptc";
    case Variant::Apac: return "apac";
  }
  return "?";
}

Variant variant_from_string(const std::string& s) {
  if (s == "fctp") return Variant::Fctp;
  if (s == "fptc") return Variant::Fptc;
  if (s == "apac") return Variant::Apac;
  throw ValidationError("unknown variant '" + s + "' (expected fctp, fptc or apac)");
}

Controls Controls::large_instance_preset() {
  Controls c;
  c.window0 = 5;
  c.eps0 = 1e-2;
  c.eps_step = 2e-3;
  return c;
}

CutConfig Controls::cut_config() const {
  CutConfig cc;
  cc.tol_violation = tol_violation;
  cc.tol_slack = tol_slack;
  cc.eps_frequency = eps_frequency;
  cc.parallel = parallel;
  return cc;
}

CutColGenSolver::CutColGenSolver(const Instance& inst, const Controls& controls)
    : inst_(&inst), controls_(controls) {
  inst.validate();
  cgn_ = inst.make_cgn();
  MasterConfig mc;
  mc.budget = inst.params.budget;
  mc.coverage_exempt_edges = inst.params.coverage_exempt_edges;
  mc.lp = controls_.lp;
  master_ = std::make_unique<MasterModel>(inst.ptn, inst.lines, cgn_, inst.demand, mc,
                                          initial_shortest_routes(cgn_, inst.demand));
  fixed_one_.assign(inst.lines.size(), 0);
  report_.variant = controls_.variant;
}

LpSolution CutColGenSolver::solve_master_timed() {
  auto t0 = Clock::now();
  LpSolution sol = master_->solve();
  report_.rmp_seconds += seconds_since(t0);
  ++report_.rmp_solves;
  if (sol.status == LpStatus::Unbounded || sol.status == LpStatus::IterationLimit)
    throw SolveError(std::string("master LP solve failed: ") + to_string(sol.status) +
                     (sol.message.empty() ? "" : " - " + sol.message));
  return sol;
}

int CutColGenSolver::cut_round(const LpSolution& sol) {
  report_.cuts_retired += retire_slack_cuts(*master_, sol, controls_.tol_slack);
  auto violations = find_violations(*master_, sol, controls_.cut_config());
  int added = add_violated_cuts(*master_, violations, controls_.cut_config());
  report_.cuts_added += added;
  return added;
}

int CutColGenSolver::price_round(const LpSolution& sol, double* min_psi) {
  auto t0 = Clock::now();
  DualSnapshot duals = duals_from(*master_, sol);
  PricingOptions po;
  po.tol = controls_.tol_reduced_cost;
  po.parallel = controls_.parallel;
  auto priced = price_all(cgn_, inst_->demand, duals, po);
  report_.pricing_seconds += seconds_since(t0);
  ++report_.pricing_rounds;
  if (min_psi) {
    *min_psi = 0;
    for (const PricedRoute& pr : priced) *min_psi = std::min(*min_psi, pr.reduced_cost);
  }
  int added = 0;
  for (PricedRoute& pr : priced) {
    AttachResult res = master_->attach_route(pr.od_index, std::move(pr.arcs));
    if (res.status == AttachStatus::Added) ++added;
  }
  report_.cols_added += added;
  // pool management
  if (master_->routes().live_count() > controls_.delta1 * inst_->demand.size()) {
    int purged = master_->purge_routes(sol, controls_.delta2);
    report_.cols_purged += purged;
  }
  return added;
}

PhaseResult CutColGenSolver::colgen_phase(int dive_round, bool force_full_convergence) {
  const int window =
      std::max(controls_.window_min, controls_.window0 - dive_round * controls_.window_step);
  const double eps = controls_.eps0 + dive_round * controls_.eps_step;
  std::vector<double> history;

  PhaseResult out;
  for (int it = 0; it < controls_.max_phase_iterations; ++it) {
    LpSolution sol = solve_master_timed();
    // Farkas repair loop: price against the infeasibility ray until the
    // master becomes feasible or no new route can be added
    int farkas_round = 0;
    while (sol.status == LpStatus::Infeasible) {
      if (++farkas_round > controls_.max_farkas_rounds) break;
      ++report_.farkas_rounds;
      DualSnapshot ray = farkas_from(*master_, sol);
      PricingOptions po;
      po.tol = controls_.tol_reduced_cost;
      po.parallel = controls_.parallel;
      auto t0 = Clock::now();
      auto priced = farkas_price(cgn_, inst_->demand, ray, po);
      report_.pricing_seconds += seconds_since(t0);
      int added = 0;
      for (PricedRoute& pr : priced) {
        AttachResult res = master_->attach_route(pr.od_index, std::move(pr.arcs));
        if (res.status == AttachStatus::Added) ++added;
      }
      report_.cols_added += added;
      if (added == 0) break;
      sol = solve_master_timed();
    }
    if (sol.status == LpStatus::Infeasible) {
      out.solution = std::move(sol);
      out.infeasible = true;
      return out;
    }

    ++report_.colgen_iterations;
    ++out.iterations;
    history.push_back(sol.objective);

    IterationLog log;
    log.dive_round = dive_round;
    log.iteration = report_.colgen_iterations;
    log.rmp_objective = sol.objective;
    int cuts_before = report_.cuts_added, retired_before = report_.cuts_retired;
    int cols_before = report_.cols_added, purged_before = report_.cols_purged;
    double rmp_before = report_.rmp_seconds, pp_before = report_.pricing_seconds;

    int cuts_added = 0, cols_added = 0;
    bool did_cut = false, did_price = false;
    switch (controls_.variant) {
      case Variant::Fctp:
        did_cut = true;
        cuts_added = cut_round(sol);
        if (cuts_added == 0) {
          did_price = true;
          cols_added = price_round(sol);
        }
        break;
      case Variant::Fptc:
        did_price = true;
        cols_added = price_round(sol);
        if (cols_added == 0) {
          did_cut = true;
          cuts_added = cut_round(sol);
        }
        break;
      case Variant::Apac:
        did_cut = true;
        cuts_added = cut_round(sol);
        did_price = true;
        cols_added = price_round(sol);
        break;
    }

    log.cuts_added = report_.cuts_added - cuts_before;
    log.cuts_retired = report_.cuts_retired - retired_before;
    log.cols_added = report_.cols_added - cols_before;
    log.cols_purged = report_.cols_purged - purged_before;
    log.rmp_seconds = report_.rmp_seconds - rmp_before;
    log.pricing_seconds = report_.pricing_seconds - pp_before;
    report_.iterations.push_back(log);

    if (did_cut && did_price && cuts_added == 0 && cols_added == 0) {
      out.solution = std::move(sol);
      out.fully_converged = true;
      return out;
    }
    if (!force_full_convergence && controls_.early_stop &&
        static_cast<int>(history.size()) > window) {
      double prev = history[history.size() - 1 - window];
      double cur = history.back();
      double imp = std::max(0.0, prev - cur) / std::max(std::abs(prev), 1e-12);
      if (imp < eps) {
        out.solution = std::move(sol);
        out.stagnated = true;
        return out;
      }
    }
    out.solution = std::move(sol);
  }
  return out;  // iteration cap; not converged
}

double CutColGenSolver::committed_cost(const LpSolution& sol) const {
  double total = 0;
  for (const Line& l : inst_->lines) {
    if (!fixed_one_[l.id]) continue;
    double y = sol.primal[master_->y_col(l.id)];
    total += l.setup_cost + l.op_cost * std::max(l.f_min, y);
  }
  return total;
}

bool CutColGenSolver::plan_is_integral(const LpSolution& sol) const {
  for (const Line& l : inst_->lines) {
    double w = sol.primal[master_->w_col(l.id)];
    if (w > controls_.integrality_tol && w < 1.0 - controls_.integrality_tol) return false;
  }
  return true;
}

int CutColGenSolver::fix_next_line(const LpSolution& sol) {
  double committed = committed_cost(sol);
  double headroom = master_->budget() - committed;
  int pick = -1;
  double best_y = -1;
  for (const Line& l : inst_->lines) {
    if (fixed_one_[l.id] || master_->line_fixed(l.id)) continue;
    double w = sol.primal[master_->w_col(l.id)];
    if (w <= controls_.integrality_tol || w >= 1.0 - controls_.integrality_tol) continue;
    double y = sol.primal[master_->y_col(l.id)];
    double commit = l.setup_cost + l.op_cost * std::max(l.f_min, y);
    if (commit > headroom + 1e-9) continue;  // cannot afford rounding this one up
    if (y > best_y + 1e-12) {
      best_y = y;
      pick = l.id;
    }
  }
  if (pick >= 0) {
    fixed_one_[pick] = 1;
    master_->fix_line(pick, true);
  }
  return pick;
}

double CutColGenSolver::lagrangian_bound(const LpSolution& sol) {
  auto t0 = Clock::now();
  DualSnapshot duals = duals_from(*master_, sol);
  PricingOptions po;
  po.tol = controls_.tol_reduced_cost;
  po.parallel = controls_.parallel;
  auto priced = price_all(cgn_, inst_->demand, duals, po);
  report_.pricing_seconds += seconds_since(t0);
  double correction = 0;
  for (const PricedRoute& pr : priced)
    correction += inst_->demand.od_pairs[pr.od_index].passengers * pr.reduced_cost;
  return sol.objective + correction;
}

SolveResult CutColGenSolver::run() {
  auto t0 = Clock::now();
  SolveResult result;

  PhaseResult root = colgen_phase(0);
  if (root.infeasible) {
    report_.feasible = false;
    report_.infeasibility =
        "restricted master is infeasible and Farkas pricing found no repairing route "
        "(budget/coverage conflict or disconnected demand)";
    report_.infeasibility_certificate = root.solution.farkas;
    report_.total_seconds = seconds_since(t0);
    result.report = report_;
    return result;
  }
  report_.root_rmp_objective = root.solution.objective;
  report_.lp_bound = lagrangian_bound(root.solution);

  LpSolution sol = std::move(root.solution);
  // diving: fix the largest-frequency fractional line, then decide whether
  // the remaining budget still pays for another line at minimum frequency
  while (!plan_is_integral(sol)) {
    int fixed = fix_next_line(sol);
    if (fixed < 0) break;
    ++report_.dive_rounds;
    double committed = committed_cost(sol);
    bool budget_left = false;
    for (const Line& l : inst_->lines) {
      if (fixed_one_[l.id]) continue;
      if (l.setup_cost + l.op_cost * l.f_min <= master_->budget() - committed + 1e-9) {
        budget_left = true;
        break;
      }
    }
    if (!budget_left) break;
    PhaseResult phase = colgen_phase(report_.dive_rounds);
    if (phase.infeasible) {
      report_.feasible = false;
      report_.infeasibility = "master became infeasible after fixing line " +
                              std::to_string(fixed) + "; budget cannot carry the fixed lines";
      report_.infeasibility_certificate = phase.solution.farkas;
      report_.total_seconds = seconds_since(t0);
      result.report = report_;
      return result;
    }
    sol = std::move(phase.solution);
    report_.per_round_objective.push_back(sol.objective);
  }

  // everything not rounded up is shut down
  for (const Line& l : inst_->lines)
    if (!fixed_one_[l.id]) master_->fix_line(l.id, false);

  // coverage repair: cheapest line per uncovered edge
  {
    std::vector<char> operated(inst_->lines.size(), 0);
    for (const Line& l : inst_->lines) operated[l.id] = fixed_one_[l.id];
    std::vector<double> freq(inst_->lines.size(), 0.0);
    for (const Line& l : inst_->lines) freq[l.id] = operated[l.id] ? l.f_min : 0.0;
    PlanAudit audit = audit_plan(*inst_, operated, freq);
    for (int edge : audit.uncovered_edges) {
      int best = -1;
      double best_cost = 0;
      for (const Line& l : inst_->lines) {
        if (fixed_one_[l.id]) continue;
        bool covers = false;
        for (size_t k = 1; k < l.stations.size() && !covers; ++k)
          if (inst_->ptn.edge_between(l.stations[k - 1], l.stations[k]) == edge) covers = true;
        if (!covers) continue;
        double c = l.setup_cost + l.op_cost * l.f_min;
        if (best < 0 || c < best_cost - 1e-12) {
          best = l.id;
          best_cost = c;
        }
      }
      if (best >= 0 && !fixed_one_[best]) {
        fixed_one_[best] = 1;
        master_->fix_line(best, true);
        report_.repaired_lines.push_back(best);
      }
    }
    double min_spend = 0;
    for (const Line& l : inst_->lines)
      if (fixed_one_[l.id]) min_spend += l.setup_cost + l.op_cost * l.f_min;
    if (min_spend > master_->budget() + 1e-9) {
      report_.budget_overrun = true;
      master_->set_budget(min_spend);
    }
  }

  // final routing reoptimization under the fixed plan
  PhaseResult last = colgen_phase(std::max(report_.dive_rounds, 1), /*force_full=*/true);
  if (last.infeasible) {
    report_.feasible = false;
    report_.infeasibility = "fixed plan admits no feasible routing";
    report_.infeasibility_certificate = last.solution.farkas;
    report_.total_seconds = seconds_since(t0);
    result.report = report_;
    return result;
  }
  sol = std::move(last.solution);

  result.plan = master_->extract_plan(sol, controls_.integrality_tol);
  result.plan.budget_overrun = report_.budget_overrun;
  report_.objective = master_->evaluate_true_objective(sol);
  report_.gap = (report_.objective.perceived - report_.lp_bound) /
                std::max(1.0, std::abs(report_.lp_bound));
  result.arc_flows.assign(cgn_.num_arcs(), 0.0);
  for (const CgnArc& a : cgn_.arcs) result.arc_flows[a.id] = sol.primal[master_->x_col(a.id)];
  for (int id : master_->routes().all()) {
    const Route& r = master_->routes().route(id);
    double z = sol.primal[r.z_col];
    if (z > 1e-9) {
      const OdPair& od = inst_->demand.od_pairs[r.od_index];
      result.route_flows.push_back({od.origin, od.destination, r.arcs, z});
    }
  }
  report_.total_seconds = seconds_since(t0);
  result.report = report_;
  return result;
}

SolveResult solve_lpp_c(const Instance& inst, const Controls& controls) {
  CutColGenSolver solver(inst, controls);
  return solver.run();
}

}  // namespace lineplan
