#ifndef LINEPLAN_LP_HPP_
#define LINEPLAN_LP_HPP_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lineplan/common.hpp"

namespace lineplan {

enum class RowSense : unsigned char { LE, EQ, GE };
enum class LpStatus : unsigned char { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(LpStatus s);

struct LpEntry {
  int id = -1;  // row id inside a column, column id inside a row
  double value = 0;
};

// Sparse column-major LP with stable integer handles. Rows and columns can be
// added and removed between solves; removal leaves tombstones so handles of
// surviving rows/columns never move.
class LpProblem {
 public:
  struct Col {
    bool live = false;
    double obj = 0, lo = 0, hi = 0;
    std::vector<LpEntry> entries;  // (row id, coefficient), may hold dead rows
  };
  struct Row {
    bool live = false;
    RowSense sense = RowSense::LE;
    double rhs = 0;
  };

  int add_column(double obj, double lo, double hi, const std::vector<LpEntry>& row_entries = {});
  int add_row(RowSense sense, double rhs, const std::vector<LpEntry>& col_entries);
  void remove_row(int row_id);
  void remove_rows(std::span<const int> row_ids);
  void remove_column(int col_id);
  void remove_columns(std::span<const int> col_ids);

  void set_column_bounds(int col_id, double lo, double hi);
  void set_objective_coeff(int col_id, double obj);
  void set_rhs(int row_id, double rhs);

  int num_rows() const { return live_rows_; }
  int num_cols() const { return live_cols_; }
  int max_row_id() const { return static_cast<int>(rows_.size()); }
  int max_col_id() const { return static_cast<int>(cols_.size()); }
  bool row_alive(int id) const { return id >= 0 && id < max_row_id() && rows_[id].live; }
  bool col_alive(int id) const { return id >= 0 && id < max_col_id() && cols_[id].live; }
  const Row& row(int id) const;
  const Col& col(int id) const;

  // sum of live coefficients times primal values (indexed by column id)
  double row_activity(int row_id, std::span<const double> primal) const;

  // CPLEX-style textual LP dump for external verification
  void write_lp_format(std::ostream& os) const;

  const std::vector<Col>& cols() const { return cols_; }
  const std::vector<Row>& rows() const { return rows_; }

 private:
  std::vector<Col> cols_;
  std::vector<Row> rows_;
  int live_rows_ = 0, live_cols_ = 0;
};

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  double objective = 0;
  std::vector<double> primal;        // by column id
  std::vector<double> dual;          // by row id
  std::vector<double> reduced_cost;  // by column id
  // Infeasibility certificate by row id (empty unless Infeasible): with
  // sigma = ray^T A, sum_j max(sigma_j lo_j, sigma_j hi_j) is strictly less
  // than sum_i min(ray_i L_i, ray_i U_i) over the row activity ranges.
  std::vector<double> farkas;
  int iterations = 0;
  int phase1_iterations = 0;
  std::string message;
};

// Nonbasic/basic state per variable, persisted between solves for warm starts.
struct LpBasis {
  enum class State : unsigned char { None, Basic, AtLower, AtUpper, FreeZero };
  std::vector<State> col_state;  // by column id
  std::vector<State> row_state;  // by row id (state of the row's logical)
  bool empty() const { return col_state.empty() && row_state.empty(); }
};

struct LpOptions {
  double feas_tol = 1e-7;  // absolute, scaled by max(1,|bound|) per variable
  double opt_tol = 1e-7;   // reduced-cost tolerance
  int max_iterations = 0;  // 0: 20000 + 20*(rows+cols)
  int refactor_interval = 100;
  bool validate_farkas = true;
};

// Primal simplex on bounded variables. Returns basic optimal duals and
// reduced costs; on infeasibility the Farkas ray is taken from the optimal
// phase-1 duals and verified by direct multiplication before returning.
LpSolution solve_lp(const LpProblem& p, LpBasis* warm = nullptr, const LpOptions& opts = {});

// Checks the Farkas gap of a candidate ray: returns
//   sum_i min(y_i L_i, y_i U_i) - sum_j max(sigma_j lo_j, sigma_j hi_j),
// which is strictly positive for a valid certificate (-inf if some product
// diverges the wrong way).
double farkas_gap(const LpProblem& p, std::span<const double> ray);

}  // namespace lineplan

#endif  // LINEPLAN_LP_HPP_
