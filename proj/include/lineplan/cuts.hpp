#ifndef LINEPLAN_CUTS_HPP_
#define LINEPLAN_CUTS_HPP_

#include <vector>

#include "lineplan/common.hpp"
#include "lineplan/lp.hpp"

namespace lineplan {

class MasterModel;

// Tangent outer approximation of the rotated cone Theta * y >= gamma * x^2,
// anchored at (x_hat, y_hat) with y_hat > 0:
//   Theta/gamma - (2 x_hat / y_hat) x + (x_hat^2 / y_hat^2) y >= 0.
// Tight at the anchor and valid for every cone point.
struct TangentCut {
  int arc = -1;
  double anchor_x = 0;
  double anchor_y = 0;
  double gamma = 0;
  int row_id = -1;  // LP row while attached

  double coeff_theta() const { return 1.0 / gamma; }
  double coeff_x() const { return -2.0 * anchor_x / anchor_y; }
  double coeff_y() const { return (anchor_x / anchor_y) * (anchor_x / anchor_y); }
  // left-hand side at a candidate point
  double lhs(double theta, double x, double y) const {
    return coeff_theta() * theta + coeff_x() * x + coeff_y() * y;
  }
};

TangentCut make_cut(int arc, double x_hat, double y_hat, double gamma);

struct CutPool {
  std::vector<TangentCut> cuts;  // live cuts only
  int added_total = 0;
  int retired_total = 0;
};

struct Violation {
  int arc = -1;
  double x_hat = 0;
  double y_hat = 0;  // epsilon-substituted when the line frequency is zero
  double amount = 0; // gamma x^2 - Theta y at the solution
};

struct CutConfig {
  double tol_violation = 1e-5;   // relative to max(1, gamma x^2)
  double eps_frequency = 1e-6;   // stand-in frequency when y = 0 and x > 0
  double tol_slack = 1e-6;       // absolute slack above which a cut retires
  double anchor_dedupe = 1e-9;   // relative anchor equality
  bool parallel = true;
};

// Scans travel arcs of a solved master for cone violations. Read-only and
// deterministic regardless of thread count.
std::vector<Violation> find_violations(const MasterModel& m, const LpSolution& sol,
                                       const CutConfig& cfg = {});

// One cut per violated arc, anchored at the current point; anchors already
// present on the arc (within tolerance) are skipped. Returns cuts added.
int add_violated_cuts(MasterModel& m, const std::vector<Violation>& violations,
                      const CutConfig& cfg = {});

// Drops cuts whose slack at the given solution exceeds tol_slack.
int retire_slack_cuts(MasterModel& m, const LpSolution& sol, double tol_slack = 1e-6);

}  // namespace lineplan

#endif  // LINEPLAN_CUTS_HPP_
