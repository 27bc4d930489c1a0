#include "lineplan/lp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace lineplan {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
    case LpStatus::IterationLimit: return "IterationLimit";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// LpProblem
// ---------------------------------------------------------------------------

int LpProblem::add_column(double obj, double lo, double hi, const std::vector<LpEntry>& row_entries) {
  if (lo > hi) throw ValidationError("column bounds must satisfy lower <= upper");
  for (const LpEntry& e : row_entries)
    if (!row_alive(e.id)) throw ValidationError("column entry references dead row " + std::to_string(e.id));
  Col c;
  c.live = true;
  c.obj = obj;
  c.lo = lo;
  c.hi = hi;
  c.entries = row_entries;
  cols_.push_back(std::move(c));
  ++live_cols_;
  return static_cast<int>(cols_.size()) - 1;
}

int LpProblem::add_row(RowSense sense, double rhs, const std::vector<LpEntry>& col_entries) {
  int id = static_cast<int>(rows_.size());
  for (const LpEntry& e : col_entries)
    if (!col_alive(e.id)) throw ValidationError("row entry references dead column " + std::to_string(e.id));
  Row r;
  r.live = true;
  r.sense = sense;
  r.rhs = rhs;
  rows_.push_back(r);
  ++live_rows_;
  for (const LpEntry& e : col_entries) cols_[e.id].entries.push_back({id, e.value});
  return id;
}

void LpProblem::remove_row(int row_id) {
  if (!row_alive(row_id)) throw ValidationError("remove_row: no live row " + std::to_string(row_id));
  rows_[row_id].live = false;
  --live_rows_;
}

void LpProblem::remove_rows(std::span<const int> row_ids) {
  for (int id : row_ids) remove_row(id);
}

void LpProblem::remove_column(int col_id) {
  if (!col_alive(col_id)) throw ValidationError("remove_column: no live column " + std::to_string(col_id));
  cols_[col_id].live = false;
  cols_[col_id].entries.clear();
  cols_[col_id].entries.shrink_to_fit();
  --live_cols_;
}

void LpProblem::remove_columns(std::span<const int> col_ids) {
  for (int id : col_ids) remove_column(id);
}

void LpProblem::set_column_bounds(int col_id, double lo, double hi) {
  if (!col_alive(col_id)) throw ValidationError("set_column_bounds: no live column " + std::to_string(col_id));
  if (lo > hi) throw ValidationError("column bounds must satisfy lower <= upper");
  cols_[col_id].lo = lo;
  cols_[col_id].hi = hi;
}

void LpProblem::set_objective_coeff(int col_id, double obj) {
  if (!col_alive(col_id)) throw ValidationError("set_objective_coeff: no live column " + std::to_string(col_id));
  cols_[col_id].obj = obj;
}

void LpProblem::set_rhs(int row_id, double rhs) {
  if (!row_alive(row_id)) throw ValidationError("set_rhs: no live row " + std::to_string(row_id));
  rows_[row_id].rhs = rhs;
}

const LpProblem::Row& LpProblem::row(int id) const {
  if (!row_alive(id)) throw ValidationError("no live row " + std::to_string(id));
  return rows_[id];
}

const LpProblem::Col& LpProblem::col(int id) const {
  if (!col_alive(id)) throw ValidationError("no live column " + std::to_string(id));
  return cols_[id];
}

double LpProblem::row_activity(int row_id, std::span<const double> primal) const {
  if (!row_alive(row_id)) throw ValidationError("no live row " + std::to_string(row_id));
  double act = 0;
  for (int j = 0; j < max_col_id(); ++j) {
    if (!cols_[j].live) continue;
    for (const LpEntry& e : cols_[j].entries)
      if (e.id == row_id) act += e.value * primal[j];
  }
  return act;
}

void LpProblem::write_lp_format(std::ostream& os) const {
  os << std::setprecision(17);
  os << "Minimize\n obj:";
  bool first = true;
  for (int j = 0; j < max_col_id(); ++j) {
    if (!cols_[j].live || cols_[j].obj == 0) continue;
    os << (cols_[j].obj >= 0 && !first ? " + " : " ") << cols_[j].obj << " x" << j;
    first = false;
  }
  if (first) os << " 0 x0";
  os << "\nSubject To\n";
  // gather row-major view
  std::vector<std::vector<std::pair<int, double>>> by_row(rows_.size());
  for (int j = 0; j < max_col_id(); ++j) {
    if (!cols_[j].live) continue;
    for (const LpEntry& e : cols_[j].entries)
      if (rows_[e.id].live) by_row[e.id].push_back({j, e.value});
  }
  for (int i = 0; i < max_row_id(); ++i) {
    if (!rows_[i].live) continue;
    os << " r" << i << ":";
    if (by_row[i].empty()) os << " 0 x0";
    for (auto& [j, v] : by_row[i]) os << (v >= 0 ? " + " : " - ") << std::abs(v) << " x" << j;
    switch (rows_[i].sense) {
      case RowSense::LE: os << " <= "; break;
      case RowSense::EQ: os << " = "; break;
      case RowSense::GE: os << " >= "; break;
    }
    os << rows_[i].rhs << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < max_col_id(); ++j) {
    if (!cols_[j].live) continue;
    const Col& c = cols_[j];
    if (c.lo == -kInf && c.hi == kInf) {
      os << " x" << j << " free\n";
    } else if (c.lo == -kInf) {
      os << " -inf <= x" << j << " <= " << c.hi << "\n";
    } else if (c.hi == kInf) {
      os << " x" << j << " >= " << c.lo << "\n";
    } else {
      os << " " << c.lo << " <= x" << j << " <= " << c.hi << "\n";
    }
  }
  os << "End\n";
}

namespace {

void row_bounds(const LpProblem::Row& r, double& lo, double& hi) {
  switch (r.sense) {
    case RowSense::LE: lo = -kInf; hi = r.rhs; break;
    case RowSense::EQ: lo = r.rhs; hi = r.rhs; break;
    case RowSense::GE: lo = r.rhs; hi = kInf; break;
  }
}

}  // namespace

double farkas_gap(const LpProblem& p, std::span<const double> ray) {
  constexpr double kZero = 1e-12;
  // sigma = ray^T A, accumulated column-wise
  double support = 0;  // sum over columns of box-max of sigma_j * x_j
  for (int j = 0; j < p.max_col_id(); ++j) {
    if (!p.col_alive(j)) continue;
    const auto& c = p.col(j);
    double sigma = 0;
    for (const LpEntry& e : c.entries)
      if (p.row_alive(e.id)) sigma += ray[e.id] * e.value;
    if (std::abs(sigma) <= kZero) continue;
    double hi_term = sigma > 0 ? sigma * c.hi : sigma * c.lo;
    if (std::isinf(hi_term) && hi_term > 0) return -kInf;
    support += hi_term;
  }
  double rhs_side = 0;  // sum over rows of box-min of ray_i * s_i
  for (int i = 0; i < p.max_row_id(); ++i) {
    if (!p.row_alive(i)) continue;
    double lo = -kInf, hi = kInf;
    row_bounds(p.rows()[i], lo, hi);
    double y = ray[i];
    if (std::abs(y) <= kZero) continue;
    double lo_term = y > 0 ? y * lo : y * hi;
    if (std::isinf(lo_term) && lo_term < 0) return -kInf;
    rhs_side += lo_term;
  }
  return rhs_side - support;
}

// ---------------------------------------------------------------------------
// Simplex internals
// ---------------------------------------------------------------------------

namespace {

using VS = LpBasis::State;

struct Entry {
  int row;
  double val;
};

// Sparse LU of the basis matrix with product-form eta updates appended by the
// simplex between refactorizations.
class BasisFactor {
 public:
  // columns[slot] = sparse basis column by row position; returns the list of
  // slots that were structurally/numerically unpivotable and must be replaced
  // by row logicals (slot, row). Throws SolveError when even the repair is
  // ambiguous; the caller then restarts from the all-logical basis.
  std::vector<std::pair<int, int>> factorize(int m, const std::vector<std::vector<Entry>>& columns);

  void ftran(std::vector<double>& work_by_row, std::vector<double>& out_by_slot) const;
  void btran(std::vector<double>& work_by_slot, std::vector<double>& out_by_row) const;

  void push_eta(int slot, std::vector<std::pair<int, double>> w_sparse, double pivot);
  int eta_count() const { return static_cast<int>(etas_.size()); }

 private:
  int m_ = 0;
  std::vector<int> prow_, pslot_;
  std::vector<double> pval_;
  std::vector<std::vector<std::pair<int, double>>> lcol_;   // step -> (orig row, mult)
  std::vector<std::vector<std::pair<int, double>>> urow_;   // step -> (later step, val)
  std::vector<std::vector<std::pair<int, double>>> ucol_;   // step -> (earlier step, val)
  std::vector<int> row_step_, slot_step_;

  struct Eta {
    int slot;
    double pivot;
    std::vector<std::pair<int, double>> w;  // by slot, excludes the pivot slot
  };
  std::vector<Eta> etas_;

  mutable std::vector<double> ybuf_, xbuf_;
};

std::vector<std::pair<int, int>> BasisFactor::factorize(int m, const std::vector<std::vector<Entry>>& columns) {
  m_ = m;
  prow_.clear(); pslot_.clear(); pval_.clear();
  lcol_.clear(); urow_.clear(); ucol_.clear();
  etas_.clear();
  prow_.reserve(m); pslot_.reserve(m); pval_.reserve(m);
  lcol_.reserve(m); urow_.reserve(m);
  row_step_.assign(m, -1);
  slot_step_.assign(m, -1);

  constexpr double kDrop = 1e-12;
  constexpr double kTinyPivot = 1e-11;

  // working copy, columns sorted by row
  std::vector<std::vector<std::pair<int, double>>> wcol(m);
  std::vector<int> colcount(m, 0), rowcount(m, 0);
  std::vector<std::vector<int>> row_cols(m);
  std::vector<char> col_done(m, 0), row_done(m, 0);
  for (int c = 0; c < m; ++c) {
    wcol[c].reserve(columns[c].size());
    for (const Entry& e : columns[c])
      if (std::abs(e.val) > kDrop) wcol[c].push_back({e.row, e.val});
    std::sort(wcol[c].begin(), wcol[c].end());
    colcount[c] = static_cast<int>(wcol[c].size());
    for (auto& [r, v] : wcol[c]) {
      rowcount[r]++;
      row_cols[r].push_back(c);
    }
  }

  auto col_find = [&](int c, int r) -> double* {
    auto it = std::lower_bound(wcol[c].begin(), wcol[c].end(), std::make_pair(r, -kInf));
    if (it != wcol[c].end() && it->first == r) return &it->second;
    return nullptr;
  };
  auto col_erase_row = [&](int c, int r) {
    auto it = std::lower_bound(wcol[c].begin(), wcol[c].end(), std::make_pair(r, -kInf));
    if (it != wcol[c].end() && it->first == r) {
      wcol[c].erase(it);
      colcount[c]--;
    }
  };

  std::vector<int> col_q, row_q;  // singleton candidates, rechecked at pop
  for (int c = 0; c < m; ++c)
    if (colcount[c] == 1) col_q.push_back(c);
  for (int r = 0; r < m; ++r)
    if (rowcount[r] == 1) row_q.push_back(r);

  std::vector<double> spa(m, 0.0);
  std::vector<char> spa_mark(m, 0);

  int steps = 0;
  auto do_pivot = [&](int r, int c, double pv) {
    int k = steps++;
    prow_.push_back(r);
    pslot_.push_back(c);
    pval_.push_back(pv);
    row_step_[r] = k;
    slot_step_[c] = k;
    row_done[r] = 1;
    col_done[c] = 1;
  };

  // records L multipliers from column c (excluding pivot row r), decrements
  // rowcounts for the removed column
  auto emit_lcol = [&](int r, int c, double pv) {
    std::vector<std::pair<int, double>> lc;
    for (auto& [i, v] : wcol[c]) {
      if (i == r) continue;
      lc.push_back({i, v / pv});
      rowcount[i]--;
      if (rowcount[i] == 1) row_q.push_back(i);
    }
    lcol_.push_back(std::move(lc));
  };

  // U row entries by column slot (converted to steps at the end)
  std::vector<std::vector<std::pair<int, double>>> urow_slot;
  urow_slot.reserve(m);

  while (steps < m) {
    // 1) column singletons: no L fill, removes its row from other columns
    bool advanced = false;
    while (!col_q.empty()) {
      int c = col_q.back();
      col_q.pop_back();
      if (col_done[c] || colcount[c] != 1) continue;
      int r = wcol[c][0].first;
      double pv = wcol[c][0].second;
      if (std::abs(pv) < kTinyPivot) continue;  // leave for repair
      std::vector<std::pair<int, double>> ur;
      for (int c2 : row_cols[r]) {
        if (col_done[c2] || c2 == c) continue;
        double* pv2 = col_find(c2, r);
        if (!pv2) continue;
        ur.push_back({c2, *pv2});
        col_erase_row(c2, r);
        if (colcount[c2] == 1) col_q.push_back(c2);
      }
      do_pivot(r, c, pv);
      lcol_.push_back({});
      urow_slot.push_back(std::move(ur));
      advanced = true;
    }
    if (steps == m) break;

    // 2) row singletons: no U fill beyond the pivot, column defines L
    while (!row_q.empty()) {
      int r = row_q.back();
      row_q.pop_back();
      if (row_done[r] || rowcount[r] != 1) continue;
      int c = -1;
      double pv = 0;
      for (int c2 : row_cols[r]) {
        if (col_done[c2]) continue;
        double* p = col_find(c2, r);
        if (p) {
          c = c2;
          pv = *p;
          break;
        }
      }
      if (c < 0 || std::abs(pv) < kTinyPivot) continue;
      do_pivot(r, c, pv);
      emit_lcol(r, c, pv);
      urow_slot.push_back({});
      advanced = true;
      break;  // re-run the singleton loops from the top
    }
    if (advanced) continue;
    if (steps == m) break;

    // 3) kernel pivot: threshold Markowitz over the remaining submatrix
    int best_c = -1, best_r = -1;
    double best_pv = 0;
    long long best_score = -1;
    for (int c = 0; c < m; ++c) {
      if (col_done[c] || wcol[c].empty()) continue;
      double cmax = 0;
      for (auto& [r, v] : wcol[c]) cmax = std::max(cmax, std::abs(v));
      if (cmax < kTinyPivot) continue;
      for (auto& [r, v] : wcol[c]) {
        if (std::abs(v) < 0.1 * cmax || std::abs(v) < kTinyPivot) continue;
        long long score = static_cast<long long>(colcount[c] - 1) * (rowcount[r] - 1);
        if (best_score < 0 || score < best_score ||
            (score == best_score && std::abs(v) > std::abs(best_pv))) {
          best_score = score;
          best_c = c;
          best_r = r;
          best_pv = v;
        }
      }
    }
    if (best_c < 0) break;  // nothing pivotable: repair the rest

    int r = best_r, c = best_c;
    double pv = best_pv;
    // update all remaining columns containing row r
    std::vector<std::pair<int, double>> ur;
    for (size_t idx = 0; idx < row_cols[r].size(); ++idx) {
      int c2 = row_cols[r][idx];
      if (col_done[c2] || c2 == c) continue;
      double* pv2p = col_find(c2, r);
      if (!pv2p) continue;
      double a_rc2 = *pv2p;
      ur.push_back({c2, a_rc2});
      double f = a_rc2 / pv;
      // scatter c2
      for (auto& [i, v] : wcol[c2]) {
        spa[i] = v;
        spa_mark[i] = 1;
      }
      // axpy with pivot column (skip pivot row r; it is being removed)
      for (auto& [i, v] : wcol[c]) {
        if (i == r) continue;
        if (!spa_mark[i]) {
          spa_mark[i] = 1;
          spa[i] = -f * v;
          rowcount[i]++;
          row_cols[i].push_back(c2);
        } else {
          spa[i] -= f * v;
        }
      }
      spa_mark[r] = 0;  // drop the pivot-row entry
      spa[r] = 0;
      // gather
      std::vector<std::pair<int, double>> fresh;
      fresh.reserve(wcol[c2].size() + wcol[c].size());
      for (auto& [i, v] : wcol[c2]) {
        if (i == r) continue;
        if (spa_mark[i]) {
          if (std::abs(spa[i]) > kDrop)
            fresh.push_back({i, spa[i]});
          else
            rowcount[i]--;
          spa_mark[i] = 0;
          spa[i] = 0;
        }
      }
      for (auto& [i, v] : wcol[c]) {
        if (i == r || !spa_mark[i]) continue;
        if (std::abs(spa[i]) > kDrop)
          fresh.push_back({i, spa[i]});
        else
          rowcount[i]--;
        spa_mark[i] = 0;
        spa[i] = 0;
      }
      std::sort(fresh.begin(), fresh.end());
      wcol[c2] = std::move(fresh);
      colcount[c2] = static_cast<int>(wcol[c2].size());
      if (colcount[c2] == 1) col_q.push_back(c2);
    }
    do_pivot(r, c, pv);
    emit_lcol(r, c, pv);
    urow_slot.push_back(std::move(ur));
    for (auto& [i, v] : wcol[c])
      if (i != r && rowcount[i] == 1) row_q.push_back(i);
  }

  // repair: remaining rows get their own logicals in the remaining slots
  std::vector<std::pair<int, int>> repairs;
  if (steps < m) {
    std::vector<int> rows_left, cols_left;
    for (int r = 0; r < m; ++r)
      if (!row_done[r]) rows_left.push_back(r);
    for (int c = 0; c < m; ++c)
      if (!col_done[c]) cols_left.push_back(c);
    if (rows_left.size() != cols_left.size())
      throw SolveError("basis factorization lost track of the active submatrix");
    for (size_t k = 0; k < rows_left.size(); ++k) {
      int r = rows_left[k], c = cols_left[k];
      // remove whatever the failed column still holds from the counts
      for (auto& [i, v] : wcol[c]) rowcount[i]--;
      wcol[c].clear();
      repairs.push_back({c, r});
      std::vector<std::pair<int, double>> ur;
      // the logical column is -e_r: clear row r from the other remaining slots
      for (size_t k2 = k + 1; k2 < rows_left.size(); ++k2) {
        int c2 = cols_left[k2];
        double* p = col_find(c2, r);
        if (p) {
          ur.push_back({c2, *p});
          col_erase_row(c2, r);
        }
      }
      do_pivot(r, c, -1.0);
      lcol_.push_back({});
      urow_slot.push_back(std::move(ur));
    }
  }

  // finalize U in step space
  urow_.assign(m, {});
  ucol_.assign(m, {});
  for (int k = 0; k < m; ++k) {
    for (auto& [slot, val] : urow_slot[k]) {
      int j = slot_step_[slot];
      if (j < 0) throw SolveError("basis factorization produced a dangling U entry");
      urow_[k].push_back({j, val});
      ucol_[j].push_back({k, val});
    }
  }
  for (auto& u : ucol_) std::sort(u.begin(), u.end());
  ybuf_.assign(m, 0.0);
  xbuf_.assign(m, 0.0);
  return repairs;
}

void BasisFactor::ftran(std::vector<double>& work_by_row, std::vector<double>& out_by_slot) const {
  const int m = m_;
  // L forward in original row space
  for (int k = 0; k < m; ++k) {
    double t = work_by_row[prow_[k]];
    ybuf_[k] = t;
    if (t != 0.0)
      for (auto& [i, mult] : lcol_[k]) work_by_row[i] -= mult * t;
  }
  // U backward in step space
  for (int k = m - 1; k >= 0; --k) {
    double acc = ybuf_[k];
    for (auto& [j, v] : urow_[k]) acc -= v * xbuf_[j];
    xbuf_[k] = acc / pval_[k];
  }
  for (int k = 0; k < m; ++k) out_by_slot[pslot_[k]] = xbuf_[k];
  // eta chain, in order
  for (const Eta& e : etas_) {
    double t = out_by_slot[e.slot] / e.pivot;
    out_by_slot[e.slot] = t;
    if (t != 0.0)
      for (auto& [s, v] : e.w) out_by_slot[s] -= v * t;
  }
}

void BasisFactor::btran(std::vector<double>& work_by_slot, std::vector<double>& out_by_row) const {
  const int m = m_;
  // eta chain in reverse
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double acc = work_by_slot[it->slot];
    for (auto& [s, v] : it->w) acc -= v * work_by_slot[s];
    work_by_slot[it->slot] = acc / it->pivot;
  }
  // U^T forward in step space
  for (int k = 0; k < m; ++k) {
    double acc = work_by_slot[pslot_[k]];
    for (auto& [j, v] : ucol_[k]) acc -= v * ybuf_[j];
    ybuf_[k] = acc / pval_[k];
  }
  // L^T backward
  for (int k = m - 1; k >= 0; --k) {
    double acc = ybuf_[k];
    for (auto& [i, mult] : lcol_[k]) acc -= mult * xbuf_[row_step_[i]];
    xbuf_[k] = acc;
  }
  for (int k = 0; k < m; ++k) out_by_row[prow_[k]] = xbuf_[k];
}

void BasisFactor::push_eta(int slot, std::vector<std::pair<int, double>> w_sparse, double pivot) {
  Eta e;
  e.slot = slot;
  e.pivot = pivot;
  e.w = std::move(w_sparse);
  etas_.push_back(std::move(e));
}

// ---------------------------------------------------------------------------

struct Simplex {
  const LpProblem& p;
  const LpOptions& opts;

  int n = 0, m = 0, nv = 0;  // structural, rows, total variables
  std::vector<int> col_ids, row_ids;          // position -> id
  std::vector<std::vector<Entry>> acol;       // structural columns, row positions
  std::vector<double> vlo, vhi, vcost, vtol;  // by variable
  std::vector<VS> vstat;
  std::vector<double> xval;
  std::vector<int> basic;     // slot -> variable
  std::vector<int> in_basis;  // variable -> slot or -1

  BasisFactor factor;
  bool factor_valid = false;

  std::vector<double> work_row, work_slot, wcol_dense, ybuf;
  std::vector<double> dual_row;  // current duals by row position

  int iterations = 0, phase1_iterations = 0;
  int degenerate_streak = 0;
  bool bland = false;
  std::string message;

  Simplex(const LpProblem& prob, const LpOptions& o) : p(prob), opts(o) {}

  const std::vector<Entry>& var_column(int j, std::vector<Entry>& logical_buf) const {
    if (j < n) return acol[j];
    logical_buf[0] = {j - n, -1.0};
    return logical_buf;
  }

  void build(const LpBasis* warm);
  bool refactorize();      // returns false only after a full reset also failed
  void recompute_xB();
  LpSolution run(LpBasis* warm_out);

  void set_nonbasic_value(int j) {
    if (vstat[j] == VS::AtLower)
      xval[j] = vlo[j];
    else if (vstat[j] == VS::AtUpper)
      xval[j] = vhi[j];
    else
      xval[j] = 0.0;
  }

  VS default_state(int j) const {
    if (vlo[j] > -kInf) return VS::AtLower;
    if (vhi[j] < kInf) return VS::AtUpper;
    return VS::FreeZero;
  }
};

void Simplex::build(const LpBasis* warm) {
  col_ids.clear();
  row_ids.clear();
  std::vector<int> row_pos(p.max_row_id(), -1);
  for (int i = 0; i < p.max_row_id(); ++i) {
    if (!p.row_alive(i)) continue;
    row_pos[i] = static_cast<int>(row_ids.size());
    row_ids.push_back(i);
  }
  m = static_cast<int>(row_ids.size());
  for (int j = 0; j < p.max_col_id(); ++j)
    if (p.col_alive(j)) col_ids.push_back(j);
  n = static_cast<int>(col_ids.size());
  nv = n + m;

  acol.assign(n, {});
  vlo.assign(nv, 0);
  vhi.assign(nv, 0);
  vcost.assign(nv, 0);
  vtol.assign(nv, 0);
  for (int jp = 0; jp < n; ++jp) {
    const auto& c = p.cols()[col_ids[jp]];
    vlo[jp] = c.lo;
    vhi[jp] = c.hi;
    vcost[jp] = c.obj;
    for (const LpEntry& e : c.entries)
      if (p.row_alive(e.id)) acol[jp].push_back({row_pos[e.id], e.value});
  }
  for (int ip = 0; ip < m; ++ip) {
    const auto& r = p.rows()[row_ids[ip]];
    row_bounds(r, vlo[n + ip], vhi[n + ip]);
  }
  for (int j = 0; j < nv; ++j) {
    double scale = 1.0;
    if (vlo[j] > -kInf) scale = std::max(scale, std::abs(vlo[j]));
    if (vhi[j] < kInf) scale = std::max(scale, std::abs(vhi[j]));
    vtol[j] = opts.feas_tol * scale;
  }

  // map warm states; default cold start: logicals basic, structurals at bound
  vstat.assign(nv, VS::None);
  if (warm && !warm->empty()) {
    for (int jp = 0; jp < n; ++jp) {
      int id = col_ids[jp];
      if (id < static_cast<int>(warm->col_state.size()) && warm->col_state[id] != VS::None)
        vstat[jp] = warm->col_state[id];
    }
    for (int ip = 0; ip < m; ++ip) {
      int id = row_ids[ip];
      if (id < static_cast<int>(warm->row_state.size()) && warm->row_state[id] != VS::None)
        vstat[n + ip] = warm->row_state[id];
    }
  }
  for (int j = 0; j < nv; ++j) {
    if (vstat[j] == VS::None) vstat[j] = j < n ? default_state(j) : VS::Basic;
    // bounds may have changed since the state was recorded
    if (vstat[j] == VS::AtLower && vlo[j] == -kInf) vstat[j] = default_state(j);
    if (vstat[j] == VS::AtUpper && vhi[j] == kInf) vstat[j] = default_state(j);
  }

  // collect basics; enforce exactly m of them
  basic.clear();
  in_basis.assign(nv, -1);
  for (int j = 0; j < nv && static_cast<int>(basic.size()) < m; ++j) {
    if (vstat[j] == VS::Basic) {
      in_basis[j] = static_cast<int>(basic.size());
      basic.push_back(j);
    }
  }
  for (int j = 0; j < nv; ++j)
    if (vstat[j] == VS::Basic && in_basis[j] < 0) vstat[j] = default_state(j);  // demote surplus
  for (int ip = 0; ip < m && static_cast<int>(basic.size()) < m; ++ip) {
    int j = n + ip;
    if (in_basis[j] < 0) {
      vstat[j] = VS::Basic;
      in_basis[j] = static_cast<int>(basic.size());
      basic.push_back(j);
    }
  }

  xval.assign(nv, 0);
  for (int j = 0; j < nv; ++j)
    if (vstat[j] != VS::Basic) set_nonbasic_value(j);

  work_row.assign(m, 0);
  work_slot.assign(m, 0);
  wcol_dense.assign(m, 0);
  ybuf.assign(m, 0);
  dual_row.assign(m, 0);
  factor_valid = false;
}

bool Simplex::refactorize() {
  std::vector<std::vector<Entry>> columns(m);
  std::vector<Entry> logical_buf(1);
  for (int s = 0; s < m; ++s) columns[s] = var_column(basic[s], logical_buf);
  std::vector<std::pair<int, int>> repairs;
  try {
    repairs = factor.factorize(m, columns);
  } catch (const SolveError&) {
    repairs.assign(1, {-1, -1});  // force the reset below
  }
  bool need_reset = false;
  for (auto& [slot, rowpos] : repairs) {
    if (slot < 0 || in_basis[n + rowpos] >= 0) {
      need_reset = true;
      break;
    }
  }
  if (!need_reset && !repairs.empty()) {
    for (auto& [slot, rowpos] : repairs) {
      int out = basic[slot], in = n + rowpos;
      vstat[out] = default_state(out);
      set_nonbasic_value(out);
      in_basis[out] = -1;
      vstat[in] = VS::Basic;
      in_basis[in] = slot;
      basic[slot] = in;
    }
    // factorization already pivoted the logicals in; nothing else to do
  }
  if (need_reset) {
    // all-logical restart; always factorizable
    for (int j = 0; j < nv; ++j) {
      vstat[j] = j < n ? default_state(j) : VS::Basic;
      set_nonbasic_value(j);
    }
    basic.clear();
    in_basis.assign(nv, -1);
    for (int ip = 0; ip < m; ++ip) {
      in_basis[n + ip] = ip;
      basic.push_back(n + ip);
    }
    std::vector<std::vector<Entry>> cols2(m);
    for (int s = 0; s < m; ++s) cols2[s] = {{s, -1.0}};
    if (!factor.factorize(m, cols2).empty()) return false;
  }
  factor_valid = true;
  recompute_xB();
  return true;
}

void Simplex::recompute_xB() {
  std::fill(work_row.begin(), work_row.end(), 0.0);
  std::vector<Entry> logical_buf(1);
  for (int j = 0; j < nv; ++j) {
    if (vstat[j] == VS::Basic || xval[j] == 0.0) continue;
    for (const Entry& e : var_column(j, logical_buf)) work_row[e.row] -= e.val * xval[j];
  }
  factor.ftran(work_row, work_slot);
  for (int s = 0; s < m; ++s) xval[basic[s]] = work_slot[s];
}

LpSolution Simplex::run(LpBasis* warm_out) {
  LpSolution sol;
  const int max_iter = opts.max_iterations > 0 ? opts.max_iterations : 20000 + 20 * (m + n);
  const int bland_trigger = 10 * (m + n);

  if (!refactorize()) {
    sol.status = LpStatus::IterationLimit;
    sol.message = "basis factorization failed";
    return sol;
  }

  std::vector<Entry> logical_buf(1);
  std::vector<double> rc(nv, 0.0);
  int since_refactor = 0;
  bool final_check_done = false;

  auto infeas_of = [&](int j) -> double {
    if (xval[j] < vlo[j] - vtol[j]) return vlo[j] - xval[j];
    if (xval[j] > vhi[j] + vtol[j]) return xval[j] - vhi[j];
    return 0.0;
  };

  while (true) {
    if (iterations >= max_iter) {
      sol.status = LpStatus::IterationLimit;
      sol.message = "iteration limit reached (" + std::to_string(iterations) + ")";
      break;
    }
    if (factor.eta_count() >= opts.refactor_interval) {
      if (!refactorize()) {
        sol.status = LpStatus::IterationLimit;
        sol.message = "basis refactorization failed";
        break;
      }
      since_refactor = 0;
    }

    // phase detection
    double total_infeas = 0;
    for (int s = 0; s < m; ++s) total_infeas += infeas_of(basic[s]);
    bool phase1 = total_infeas > 0;

    // duals for the current phase objective
    std::fill(work_slot.begin(), work_slot.end(), 0.0);
    for (int s = 0; s < m; ++s) {
      int j = basic[s];
      if (phase1) {
        if (xval[j] < vlo[j] - vtol[j])
          work_slot[s] = -1.0;
        else if (xval[j] > vhi[j] + vtol[j])
          work_slot[s] = 1.0;
      } else {
        work_slot[s] = vcost[j];
      }
    }
    factor.btran(work_slot, dual_row);

    // price nonbasic variables
    int enter = -1, enter_dir = 0;
    double best = opts.opt_tol;
    for (int j = 0; j < nv; ++j) {
      if (vstat[j] == VS::Basic) continue;
      if (vlo[j] == vhi[j]) continue;  // fixed
      double r = phase1 ? 0.0 : vcost[j];
      for (const Entry& e : var_column(j, logical_buf)) r -= dual_row[e.row] * e.val;
      rc[j] = r;
      bool up = (vstat[j] == VS::AtLower || vstat[j] == VS::FreeZero) && r < -opts.opt_tol;
      bool down = (vstat[j] == VS::AtUpper || vstat[j] == VS::FreeZero) && r > opts.opt_tol;
      if (!up && !down) continue;
      if (bland) {
        enter = j;
        enter_dir = up ? 1 : -1;
        break;
      }
      if (std::abs(r) > best) {
        best = std::abs(r);
        enter = j;
        enter_dir = up ? 1 : -1;
      }
    }

    if (enter < 0) {
      if (phase1) {
        // re-verify on a fresh factorization before declaring infeasibility
        if (since_refactor > 0) {
          if (!refactorize()) {
            sol.status = LpStatus::IterationLimit;
            sol.message = "refactorization failed during infeasibility check";
            break;
          }
          since_refactor = 0;
          continue;
        }
        sol.status = LpStatus::Infeasible;
        sol.message = "phase 1 stalled with total infeasibility " + std::to_string(total_infeas);
        // Farkas ray from the phase-1 duals
        sol.farkas.assign(p.max_row_id(), 0.0);
        double scale = 0;
        for (int i = 0; i < m; ++i) scale = std::max(scale, std::abs(dual_row[i]));
        if (scale <= 0) scale = 1;
        for (int i = 0; i < m; ++i) sol.farkas[row_ids[i]] = dual_row[i] / scale;
        break;
      }
      if (!final_check_done) {
        // guard against drift: refresh and re-run the optimality test once
        if (!refactorize()) {
          sol.status = LpStatus::IterationLimit;
          sol.message = "refactorization failed during optimality check";
          break;
        }
        since_refactor = 0;
        final_check_done = true;
        continue;
      }
      sol.status = LpStatus::Optimal;
      break;
    }
    final_check_done = false;

    // column of the entering variable through the basis
    std::fill(work_row.begin(), work_row.end(), 0.0);
    for (const Entry& e : var_column(enter, logical_buf)) work_row[e.row] = e.val;
    factor.ftran(work_row, wcol_dense);

    // ratio test
    const double dir = enter_dir;
    double limit = kInf;
    int leave_slot = -1;
    double leave_to_upper = false;
    double own_range = vhi[enter] - vlo[enter];  // may be inf
    const double ratio_tol = 1e-9;

    struct Cand {
      int slot;
      double ratio;
      double pivot;
      bool to_upper;
    };
    std::vector<Cand> cands;
    for (int s = 0; s < m; ++s) {
      double w = wcol_dense[s];
      if (std::abs(w) < 1e-11) continue;
      int j = basic[s];
      double g = dir * w;  // xval[j] moves at rate -g
      double x = xval[j];
      bool below = x < vlo[j] - vtol[j], above = x > vhi[j] + vtol[j];
      double ratio = kInf;
      bool to_upper = false;
      if (phase1) {
        if (below) {
          if (g < 0) {
            ratio = (x - vlo[j]) / g;  // rises onto its lower bound
            to_upper = false;
          }
        } else if (above) {
          if (g > 0) {
            ratio = (x - vhi[j]) / g;  // drops onto its upper bound
            to_upper = true;
          }
        } else {
          if (g > 0 && vlo[j] > -kInf) {
            ratio = (x - vlo[j]) / g;
            to_upper = false;
          } else if (g < 0 && vhi[j] < kInf) {
            ratio = (x - vhi[j]) / g;
            to_upper = true;
          }
        }
      } else {
        if (g > 0 && vlo[j] > -kInf) {
          ratio = (x - vlo[j]) / g;
          to_upper = false;
        } else if (g < 0 && vhi[j] < kInf) {
          ratio = (x - vhi[j]) / g;
          to_upper = true;
        }
      }
      if (ratio == kInf) continue;
      if (ratio < 0) ratio = 0;  // degenerate
      cands.push_back({s, ratio, w, to_upper});
      limit = std::min(limit, ratio);
    }

    if (own_range < kInf && own_range <= limit) {
      // entering variable runs to its opposite bound; no basis change
      double t = own_range;
      for (int s = 0; s < m; ++s) {
        if (wcol_dense[s] != 0.0) xval[basic[s]] -= dir * t * wcol_dense[s];
      }
      vstat[enter] = enter_dir > 0 ? VS::AtUpper : VS::AtLower;
      set_nonbasic_value(enter);
      ++iterations;
      if (phase1) ++phase1_iterations;
      continue;
    }

    if (limit == kInf) {
      if (phase1) {
        sol.status = LpStatus::IterationLimit;
        sol.message = "phase 1 detected an unbounded improving ray; numerical breakdown";
      } else {
        sol.status = LpStatus::Unbounded;
        sol.message = "objective unbounded along variable " +
                      std::to_string(enter < n ? col_ids[enter] : -1 - row_ids[enter - n]);
      }
      break;
    }

    // pick the leaving candidate: near-minimal ratio, then largest pivot
    double window = limit + ratio_tol * (1 + std::abs(limit));
    for (const Cand& c : cands) {
      if (c.ratio > window) continue;
      if (leave_slot < 0 || (!bland && std::abs(c.pivot) > std::abs(wcol_dense[leave_slot])) ||
          (bland && basic[c.slot] < basic[leave_slot])) {
        leave_slot = c.slot;
        leave_to_upper = c.to_upper;
      }
    }
    double t = limit;
    if (std::abs(wcol_dense[leave_slot]) < 1e-9) {
      // unstable pivot: refresh the factorization and retry the iteration
      if (since_refactor > 0) {
        if (!refactorize()) {
          sol.status = LpStatus::IterationLimit;
          sol.message = "refactorization failed on unstable pivot";
          break;
        }
        since_refactor = 0;
        continue;
      }
    }

    // apply the pivot
    int leave_var = basic[leave_slot];
    for (int s = 0; s < m; ++s)
      if (wcol_dense[s] != 0.0) xval[basic[s]] -= dir * t * wcol_dense[s];
    xval[enter] += dir * t;
    vstat[leave_var] = leave_to_upper ? VS::AtUpper : VS::AtLower;
    if (vlo[leave_var] == -kInf && vhi[leave_var] == kInf) vstat[leave_var] = VS::FreeZero;
    set_nonbasic_value(leave_var);
    in_basis[leave_var] = -1;
    vstat[enter] = VS::Basic;
    in_basis[enter] = leave_slot;
    basic[leave_slot] = enter;

    std::vector<std::pair<int, double>> wsp;
    for (int s = 0; s < m; ++s)
      if (s != leave_slot && std::abs(wcol_dense[s]) > 1e-12) wsp.push_back({s, wcol_dense[s]});
    factor.push_eta(leave_slot, std::move(wsp), wcol_dense[leave_slot]);

    ++iterations;
    ++since_refactor;
    if (phase1) ++phase1_iterations;
    if (t <= 1e-12) {
      if (++degenerate_streak >= bland_trigger) bland = true;
    } else {
      degenerate_streak = 0;
      bland = false;
    }
  }

  // report in id space
  sol.iterations = iterations;
  sol.phase1_iterations = phase1_iterations;
  sol.primal.assign(p.max_col_id(), 0.0);
  sol.reduced_cost.assign(p.max_col_id(), 0.0);
  sol.dual.assign(p.max_row_id(), 0.0);
  double obj = 0;
  for (int jp = 0; jp < n; ++jp) {
    sol.primal[col_ids[jp]] = xval[jp];
    obj += vcost[jp] * xval[jp];
  }
  sol.objective = obj;
  if (sol.status == LpStatus::Optimal) {
    // final duals/reduced costs with the real objective
    std::fill(work_slot.begin(), work_slot.end(), 0.0);
    for (int s = 0; s < m; ++s) work_slot[s] = vcost[basic[s]];
    factor.btran(work_slot, dual_row);
    for (int i = 0; i < m; ++i) sol.dual[row_ids[i]] = dual_row[i];
    std::vector<Entry> buf(1);
    for (int jp = 0; jp < n; ++jp) {
      if (vstat[jp] == VS::Basic) continue;
      double r = vcost[jp];
      for (const Entry& e : var_column(jp, buf)) r -= dual_row[e.row] * e.val;
      sol.reduced_cost[col_ids[jp]] = r;
    }
  }

  if (warm_out) {
    warm_out->col_state.assign(p.max_col_id(), VS::None);
    warm_out->row_state.assign(p.max_row_id(), VS::None);
    for (int jp = 0; jp < n; ++jp) warm_out->col_state[col_ids[jp]] = vstat[jp];
    for (int ip = 0; ip < m; ++ip) warm_out->row_state[row_ids[ip]] = vstat[n + ip];
  }
  return sol;
}

}  // namespace

LpSolution solve_lp(const LpProblem& p, LpBasis* warm, const LpOptions& opts) {
  Simplex s(p, opts);
  s.build(warm);
  LpSolution sol = s.run(warm);
  if (sol.status == LpStatus::Infeasible && opts.validate_farkas) {
    double gap = farkas_gap(p, sol.farkas);
    if (!(gap > 0)) {
      // one clean retry from scratch before giving up on the certificate
      Simplex s2(p, opts);
      s2.build(nullptr);
      LpSolution sol2 = s2.run(warm);
      if (sol2.status != LpStatus::Infeasible) return sol2;
      double gap2 = farkas_gap(p, sol2.farkas);
      if (!(gap2 > 0)) {
        sol2.status = LpStatus::IterationLimit;
        sol2.message = "infeasibility suspected but Farkas certificate failed verification (gap " +
                       std::to_string(gap2) + ")";
      }
      return sol2;
    }
  }
  return sol;
}

}  // namespace lineplan
