#include "lineplan/cuts.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lineplan/master.hpp"

namespace lineplan {

TangentCut make_cut(int arc, double x_hat, double y_hat, double gamma) {
  if (!(y_hat > 0))
    throw ValidationError("tangent cut needs a positive anchor frequency (arc " +
                          std::to_string(arc) + ")");
  if (!(gamma > 0)) throw ValidationError("tangent cut needs gamma > 0");
  TangentCut c;
  c.arc = arc;
  c.anchor_x = x_hat;
  c.anchor_y = y_hat;
  c.gamma = gamma;
  return c;
}

std::vector<Violation> find_violations(const MasterModel& m, const LpSolution& sol,
                                       const CutConfig& cfg) {
  const Cgn& g = m.cgn();
  std::vector<int> travel = g.travel_arc_ids();
  const int n = static_cast<int>(travel.size());
  std::vector<Violation> slots(n);
  std::vector<char> hit(n, 0);

  auto scan_one = [&](int i) {
    const CgnArc& a = g.arcs[travel[i]];
    if (a.crowding_factor <= 0) return;
    double x = sol.primal[m.x_col(a.id)];
    double th = sol.primal[m.theta_col(a.id)];
    double y = sol.primal[m.y_col(a.line)];
    if (x <= 0) return;  // the zero point satisfies the cone
    double lhs = a.crowding_factor * x * x - th * y;
    if (lhs <= cfg.tol_violation * std::max(1.0, a.crowding_factor * x * x)) return;
    Violation v;
    v.arc = a.id;
    v.x_hat = x;
    v.y_hat = y > cfg.eps_frequency ? y : cfg.eps_frequency;
    v.amount = lhs;
    slots[i] = v;
    hit[i] = 1;
  };

#ifdef _OPENMP
  if (cfg.parallel && n > 256) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) scan_one(i);
  } else {
    for (int i = 0; i < n; ++i) scan_one(i);
  }
#else
  for (int i = 0; i < n; ++i) scan_one(i);
#endif

  std::vector<Violation> out;
  for (int i = 0; i < n; ++i)
    if (hit[i]) out.push_back(slots[i]);
  return out;
}

int add_violated_cuts(MasterModel& m, const std::vector<Violation>& violations,
                      const CutConfig& cfg) {
  CutPool& pool = m.cut_pool();
  int added = 0;
  for (const Violation& v : violations) {
    if (v.x_hat <= cfg.anchor_dedupe) continue;  // Theta >= 0 is already present
    bool dup = false;
    for (const TangentCut& c : pool.cuts) {
      if (c.arc != v.arc) continue;
      double dx = std::abs(c.anchor_x - v.x_hat), dy = std::abs(c.anchor_y - v.y_hat);
      if (dx <= cfg.anchor_dedupe * std::max(1.0, std::abs(v.x_hat)) &&
          dy <= cfg.anchor_dedupe * std::max(1.0, std::abs(v.y_hat))) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    const CgnArc& a = m.cgn().arcs[v.arc];
    TangentCut cut = make_cut(v.arc, v.x_hat, v.y_hat, a.crowding_factor);
    cut.row_id = m.lp().add_row(
        RowSense::GE, 0.0,
        {{m.theta_col(v.arc), cut.coeff_theta()},
         {m.x_col(v.arc), cut.coeff_x()},
         {m.y_col(a.line), cut.coeff_y()}});
    pool.cuts.push_back(cut);
    ++pool.added_total;
    ++added;
  }
  return added;
}

int retire_slack_cuts(MasterModel& m, const LpSolution& sol, double tol_slack) {
  CutPool& pool = m.cut_pool();
  int removed = 0;
  std::vector<TangentCut> keep;
  keep.reserve(pool.cuts.size());
  for (const TangentCut& c : pool.cuts) {
    const CgnArc& a = m.cgn().arcs[c.arc];
    double slack = c.lhs(sol.primal[m.theta_col(c.arc)], sol.primal[m.x_col(c.arc)],
                         sol.primal[m.y_col(a.line)]);
    if (slack > tol_slack) {
      m.lp().remove_row(c.row_id);
      ++removed;
      ++pool.retired_total;
    } else {
      keep.push_back(c);
    }
  }
  pool.cuts = std::move(keep);
  return removed;
}

}  // namespace lineplan
