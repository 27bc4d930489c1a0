#include "lineplan/lp.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "lineplan/common.hpp"

using namespace lineplan;

namespace {

double activity(const LpProblem& p, int row, const LpSolution& s) {
  return p.row_activity(row, s.primal);
}

}  // namespace

TEST_CASE("one-variable LP: min x s.t. x >= 3") {
  LpProblem p;
  int x = p.add_column(1.0, 0.0, kInf);
  int r = p.add_row(RowSense::GE, 3.0, {{x, 1.0}});
  LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.primal[x] == doctest::Approx(3.0));
  CHECK(s.objective == doctest::Approx(3.0));
  CHECK(s.dual[r] == doctest::Approx(1.0));
}

TEST_CASE("redundant constraint has zero dual: max x s.t. x <= 1, x <= 2") {
  LpProblem p;
  int x = p.add_column(-1.0, 0.0, kInf);  // max x == min -x
  int r1 = p.add_row(RowSense::LE, 1.0, {{x, 1.0}});
  int r2 = p.add_row(RowSense::LE, 2.0, {{x, 1.0}});
  LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.primal[x] == doctest::Approx(1.0));
  CHECK(s.dual[r2] == doctest::Approx(0.0));
  CHECK(s.dual[r1] != doctest::Approx(0.0));
}

TEST_CASE("contradictory rows give a verified Farkas ray") {
  LpProblem p;
  int x = p.add_column(0.0, -kInf, kInf);
  p.add_row(RowSense::GE, 1.0, {{x, 1.0}});
  p.add_row(RowSense::LE, 0.0, {{x, 1.0}});
  LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::Infeasible);
  REQUIRE(s.farkas.size() == 2);
  CHECK(farkas_gap(p, s.farkas) > 0.0);
}

TEST_CASE("unbounded problem is reported") {
  LpProblem p;
  int x = p.add_column(-1.0, 0.0, kInf);
  p.add_row(RowSense::GE, 0.0, {{x, 1.0}});
  LpSolution s = solve_lp(p);
  CHECK(s.status == LpStatus::Unbounded);
}

TEST_CASE("equality rows and bounded variables") {
  // min  x + 2y  s.t.  x + y = 4,  x - y <= 1,  0 <= x <= 3, 0 <= y <= 5
  LpProblem p;
  int x = p.add_column(1.0, 0.0, 3.0);
  int y = p.add_column(2.0, 0.0, 5.0);
  int req = p.add_row(RowSense::EQ, 4.0, {{x, 1.0}, {y, 1.0}});
  p.add_row(RowSense::LE, 1.0, {{x, 1.0}, {y, -1.0}});
  LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::Optimal);
  // cheapest: max x, so x=2.5, y=1.5 by the second row
  CHECK(s.primal[x] == doctest::Approx(2.5));
  CHECK(s.primal[y] == doctest::Approx(1.5));
  CHECK(s.objective == doctest::Approx(5.5));
  CHECK(activity(p, req, s) == doctest::Approx(4.0));
}

TEST_CASE("strong duality and complementary slackness on a dense-ish LP") {
  // min c'x over Ax >= b style rows with assorted senses
  LpProblem p;
  int a = p.add_column(3.0, 0.0, kInf);
  int b = p.add_column(2.0, 0.0, kInf);
  int c = p.add_column(4.0, 0.0, kInf);
  int r1 = p.add_row(RowSense::GE, 10.0, {{a, 1.0}, {b, 1.0}, {c, 2.0}});
  int r2 = p.add_row(RowSense::GE, 6.0, {{a, 2.0}, {b, 1.0}});
  int r3 = p.add_row(RowSense::LE, 20.0, {{a, 1.0}, {b, 3.0}, {c, 1.0}});
  LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::Optimal);

  // dual objective: sum y_i * rhs_i must equal the primal objective
  double dual_obj = s.dual[r1] * 10.0 + s.dual[r2] * 6.0 + s.dual[r3] * 20.0;
  CHECK(std::abs(s.objective - dual_obj) <= 1e-6 * (1 + std::abs(s.objective)));

  // complementary slackness
  for (int r : {r1, r2, r3}) {
    double slack = p.rows()[r].rhs - activity(p, r, s);
    CHECK(std::abs(s.dual[r] * slack) < 1e-6);
  }
  for (int j : {a, b, c}) {
    CHECK(std::abs(s.reduced_cost[j] * s.primal[j]) < 1e-6);
    CHECK(s.reduced_cost[j] > -1e-7);  // at lower bound in a minimization
  }
}

TEST_CASE("incremental edits: rows tighten, columns improve, slack removal is neutral") {
  LpProblem p;
  LpBasis basis;
  int x = p.add_column(1.0, 0.0, kInf);
  int y = p.add_column(1.5, 0.0, kInf);
  p.add_row(RowSense::GE, 2.0, {{x, 1.0}, {y, 1.0}});
  LpSolution s1 = solve_lp(p, &basis);
  REQUIRE(s1.status == LpStatus::Optimal);
  CHECK(s1.objective == doctest::Approx(2.0));

  // a cut can only raise the minimum
  p.add_row(RowSense::GE, 3.0, {{y, 1.0}});
  LpSolution s2 = solve_lp(p, &basis);
  REQUIRE(s2.status == LpStatus::Optimal);
  CHECK(s2.objective >= s1.objective - 1e-9);
  CHECK(s2.objective == doctest::Approx(4.5));

  // a negative-reduced-cost column can only lower it; z covers both rows
  int z = p.add_column(0.5, 0.0, kInf, {{0, 1.0}, {1, 1.0}});
  LpSolution s3 = solve_lp(p, &basis);
  REQUIRE(s3.status == LpStatus::Optimal);
  CHECK(s3.objective <= s2.objective + 1e-9);
  CHECK(s3.primal[z] > 0.0);
  CHECK(s3.objective == doctest::Approx(1.5));

  // removing a non-binding row leaves the optimum unchanged
  int slack_row = p.add_row(RowSense::LE, 100.0, {{x, 1.0}, {z, 1.0}});
  LpSolution s4 = solve_lp(p, &basis);
  REQUIRE(s4.status == LpStatus::Optimal);
  p.remove_row(slack_row);
  LpSolution s5 = solve_lp(p, &basis);
  REQUIRE(s5.status == LpStatus::Optimal);
  CHECK(s5.objective == doctest::Approx(s4.objective));
}

TEST_CASE("re-solving an unchanged problem is deterministic") {
  Rng rng(7);
  LpProblem p;
  std::vector<int> cols;
  for (int j = 0; j < 12; ++j) cols.push_back(p.add_column(rng.next_double(0.5, 3.0), 0.0, rng.next_double(1.0, 8.0)));
  for (int i = 0; i < 8; ++i) {
    std::vector<LpEntry> e;
    for (int j = 0; j < 12; ++j)
      if (rng.next_double() < 0.4) e.push_back({cols[j], rng.next_double(-1.0, 2.0)});
    if (e.empty()) e.push_back({cols[0], 1.0});
    p.add_row(i % 2 ? RowSense::GE : RowSense::LE, rng.next_double(-2.0, 6.0), e);
  }
  LpSolution a = solve_lp(p);
  LpSolution b = solve_lp(p);
  REQUIRE(a.status == b.status);
  if (a.status == LpStatus::Optimal) CHECK(a.objective == b.objective);
}

TEST_CASE("randomized LPs agree with a brute-force vertex check") {
  // 2-variable LPs with box bounds: enumerate candidate vertices directly
  Rng rng(42);
  int optimal_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    double c1 = rng.next_double(-2, 2), c2 = rng.next_double(-2, 2);
    double ub1 = rng.next_double(1, 5), ub2 = rng.next_double(1, 5);
    struct RowDef { double a1, a2, rhs; RowSense sense; };
    std::vector<RowDef> rows;
    int nrows = rng.next_int(1, 4);
    for (int i = 0; i < nrows; ++i) {
      RowDef r{rng.next_double(-1, 2), rng.next_double(-1, 2), rng.next_double(-1, 4),
               rng.next_double() < 0.5 ? RowSense::LE : RowSense::GE};
      rows.push_back(r);
    }
    LpProblem p;
    int x1 = p.add_column(c1, 0.0, ub1);
    int x2 = p.add_column(c2, 0.0, ub2);
    for (auto& r : rows) p.add_row(r.sense, r.rhs, {{x1, r.a1}, {x2, r.a2}});
    LpSolution s = solve_lp(p);

    // brute force on a fine grid (coarse but sufficient with tolerances)
    double best = kInf;
    const int grid = 160;
    bool any_feasible = false;
    for (int i = 0; i <= grid; ++i) {
      for (int j = 0; j <= grid; ++j) {
        double v1 = ub1 * i / grid, v2 = ub2 * j / grid;
        bool ok = true;
        for (auto& r : rows) {
          double act = r.a1 * v1 + r.a2 * v2;
          if (r.sense == RowSense::LE && act > r.rhs + 1e-9) ok = false;
          if (r.sense == RowSense::GE && act < r.rhs - 1e-9) ok = false;
        }
        if (ok) {
          any_feasible = true;
          best = std::min(best, c1 * v1 + c2 * v2);
        }
      }
    }
    if (s.status == LpStatus::Optimal) {
      ++optimal_seen;
      REQUIRE(any_feasible);
      // the grid under-samples the polytope, so allow a grid-sized slack
      double cell = (ub1 + ub2) / grid * 6.0;
      CHECK(s.objective <= best + cell);
      // and the LP answer itself must be feasible
      for (auto& r : rows) {
        double act = r.a1 * s.primal[x1] + r.a2 * s.primal[x2];
        if (r.sense == RowSense::LE) CHECK(act <= r.rhs + 1e-6);
        if (r.sense == RowSense::GE) CHECK(act >= r.rhs - 1e-6);
      }
    } else if (s.status == LpStatus::Infeasible) {
      CHECK(farkas_gap(p, s.farkas) > 0.0);
    }
  }
  CHECK(optimal_seen >= 80);  // the sampler should mostly produce solvable LPs
}

TEST_CASE("free variables and negative bounds") {
  // min x + y, x free, -3 <= y <= -1, x + y >= -2
  LpProblem p;
  int x = p.add_column(1.0, -kInf, kInf);
  int y = p.add_column(1.0, -3.0, -1.0);
  p.add_row(RowSense::GE, -2.0, {{x, 1.0}, {y, 1.0}});
  LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-2.0));
}

TEST_CASE("LP dump round-trips through a textual form") {
  LpProblem p;
  int x = p.add_column(1.0, 0.0, 2.0);
  p.add_row(RowSense::GE, 1.0, {{x, 1.0}});
  std::ostringstream os;
  p.write_lp_format(os);
  std::string text = os.str();
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find(">= 1") != std::string::npos);
  CHECK(text.find("Bounds") != std::string::npos);
}

TEST_CASE("warm start after bound fixing keeps the problem solvable") {
  // mimic the diving pattern: binary-ish relaxed vars fixed one by one
  LpProblem p;
  LpBasis basis;
  int w1 = p.add_column(0.0, 0.0, 1.0);
  int w2 = p.add_column(0.0, 0.0, 1.0);
  int y1 = p.add_column(1.0, 0.0, 5.0);
  int y2 = p.add_column(2.0, 0.0, 5.0);
  p.add_row(RowSense::GE, 1.0, {{w1, 1.0}, {w2, 1.0}});       // coverage
  p.add_row(RowSense::GE, 0.0, {{y1, 1.0}, {w1, -1.0}});      // y1 >= w1
  p.add_row(RowSense::GE, 0.0, {{y2, 1.0}, {w2, -1.0}});
  p.add_row(RowSense::LE, 0.0, {{y1, 1.0}, {w1, -5.0}});      // y1 <= 5 w1
  p.add_row(RowSense::LE, 0.0, {{y2, 1.0}, {w2, -5.0}});
  p.add_row(RowSense::LE, 9.0, {{y1, 3.0}, {y2, 3.0}, {w1, 1.0}, {w2, 1.0}});
  LpSolution s = solve_lp(p, &basis);
  REQUIRE(s.status == LpStatus::Optimal);
  p.set_column_bounds(w1, 1.0, 1.0);
  LpSolution s2 = solve_lp(p, &basis);
  REQUIRE(s2.status == LpStatus::Optimal);
  CHECK(s2.primal[w1] == doctest::Approx(1.0));
  CHECK(s2.objective >= s.objective - 1e-9);
  p.set_column_bounds(w2, 0.0, 0.0);
  LpSolution s3 = solve_lp(p, &basis);
  REQUIRE(s3.status == LpStatus::Optimal);
  CHECK(s3.primal[y2] == doctest::Approx(0.0));
}

TEST_CASE("larger random LPs: primal feasibility and strong duality hold") {
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    LpProblem p;
    int n = rng.next_int(10, 40), m = rng.next_int(5, 25);
    std::vector<int> cols;
    for (int j = 0; j < n; ++j)
      cols.push_back(p.add_column(rng.next_double(-1, 3), 0.0,
                                  rng.next_double() < 0.3 ? kInf : rng.next_double(0.5, 4.0)));
    std::vector<int> rows;
    for (int i = 0; i < m; ++i) {
      std::vector<LpEntry> e;
      for (int j = 0; j < n; ++j)
        if (rng.next_double() < 0.25) e.push_back({cols[j], rng.next_double(-1, 2)});
      if (e.empty()) e.push_back({cols[rng.next_int(0, n - 1)], 1.0});
      double rhs = rng.next_double(0, 5);
      RowSense sense = rng.next_double() < 0.6 ? RowSense::LE : RowSense::GE;
      rows.push_back(p.add_row(sense, rhs, e));
    }
    LpSolution s = solve_lp(p);
    if (s.status == LpStatus::Infeasible) {
      CHECK(farkas_gap(p, s.farkas) > 0.0);
      continue;
    }
    if (s.status == LpStatus::Unbounded) continue;
    REQUIRE(s.status == LpStatus::Optimal);
    double dual_obj = 0;
    for (int r : rows) dual_obj += s.dual[r] * p.rows()[r].rhs;
    // bounded variables contribute their bound terms to the dual objective
    for (int j : cols) {
      double rcj = s.reduced_cost[j];
      const auto& c = p.col(j);
      if (rcj > 1e-9 && c.lo > -kInf) dual_obj += rcj * c.lo;
      if (rcj < -1e-9 && c.hi < kInf) dual_obj += rcj * c.hi;
    }
    CHECK(std::abs(s.objective - dual_obj) <= 1e-6 * (1 + std::abs(s.objective)));
    for (int r : rows) {
      double act = activity(p, r, s);
      if (p.rows()[r].sense == RowSense::LE) CHECK(act <= p.rows()[r].rhs + 1e-6);
      if (p.rows()[r].sense == RowSense::GE) CHECK(act >= p.rows()[r].rhs - 1e-6);
    }
  }
}
