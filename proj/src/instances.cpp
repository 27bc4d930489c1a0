#include "lineplan/instances.hpp"

#include <algorithm>
#include <set>

#include "lineplan/common.hpp"

namespace lineplan {

void Instance::validate() const {
  ptn.validate();
  // line and station-coverage checks run inside the CGN build
  CgnConfig cfg;
  cfg.transfer_penalty = params.transfer_penalty;
  cfg.dwell = params.dwell;
  cfg.bidirectional = params.bidirectional;
  cfg.gamma = params.gamma;
  (void)build_cgn(ptn, lines, cfg);
  std::set<std::pair<int, int>> seen;
  for (const OdPair& od : demand.od_pairs) {
    if (od.origin < 0 || od.origin >= ptn.num_stations() || od.destination < 0 ||
        od.destination >= ptn.num_stations())
      throw ValidationError("demand references an unknown station");
    if (od.origin == od.destination)
      throw ValidationError("demand pair with origin == destination");
    if (od.passengers <= 0) throw ValidationError("demand pair with nonpositive passengers");
    if (!seen.insert({od.origin, od.destination}).second)
      throw ValidationError("duplicate demand pair " + std::to_string(od.origin) + "->" +
                            std::to_string(od.destination));
  }
  if (params.transfer_penalty < 0 || params.dwell < 0 || params.gamma < 0 || params.budget < 0)
    throw ValidationError("params must be nonnegative");
}

Cgn Instance::make_cgn(std::vector<std::string>* warnings) const {
  CgnConfig cfg;
  cfg.transfer_penalty = params.transfer_penalty;
  cfg.dwell = params.dwell;
  cfg.bidirectional = params.bidirectional;
  cfg.gamma = params.gamma;
  return build_cgn(ptn, lines, cfg, warnings);
}

Instance gen_grid(const GridSpec& spec) {
  if (spec.rows < 2 || spec.cols < 2) throw ValidationError("grid needs rows, cols >= 2");
  if (spec.pool_size < spec.rows + spec.cols)
    throw ValidationError("pool target " + std::to_string(spec.pool_size) +
                          " cannot cover the grid; need at least rows + cols lines");
  Instance inst;
  auto sid = [&](int r, int c) { return r * spec.cols + c; };
  for (int r = 0; r < spec.rows; ++r)
    for (int c = 0; c < spec.cols; ++c)
      inst.ptn.stations.push_back(
          {sid(r, c), "S" + std::to_string(r) + "_" + std::to_string(c)});
  int eid = 0;
  for (int r = 0; r < spec.rows; ++r)
    for (int c = 0; c + 1 < spec.cols; ++c)
      inst.ptn.edges.push_back({eid++, sid(r, c), sid(r, c + 1), spec.edge_run_time});
  for (int r = 0; r + 1 < spec.rows; ++r)
    for (int c = 0; c < spec.cols; ++c)
      inst.ptn.edges.push_back({eid++, sid(r, c), sid(r + 1, c), spec.edge_run_time});

  auto add_line = [&](const std::vector<int>& stations) {
    Line l;
    l.id = static_cast<int>(inst.lines.size());
    l.stations = stations;
    l.op_cost = spec.op_cost_per_edge * (static_cast<int>(stations.size()) - 1);
    l.setup_cost = spec.setup_cost_factor * l.op_cost;
    l.f_min = spec.f_min;
    l.f_max = spec.f_max;
    inst.lines.push_back(l);
  };

  // full horizontals and verticals cover every edge
  for (int r = 0; r < spec.rows; ++r) {
    std::vector<int> s;
    for (int c = 0; c < spec.cols; ++c) s.push_back(sid(r, c));
    add_line(s);
  }
  for (int c = 0; c < spec.cols; ++c) {
    std::vector<int> s;
    for (int r = 0; r < spec.rows; ++r) s.push_back(sid(r, c));
    add_line(s);
  }

  // L-shaped candidates: horizontal arm into a corner, then a vertical arm
  std::vector<std::vector<int>> ells;
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      for (int c2 = 0; c2 < spec.cols; ++c2) {
        if (c2 == c) continue;
        for (int r2 = 0; r2 < spec.rows; ++r2) {
          if (r2 == r) continue;
          std::vector<int> s;
          int step_c = c2 < c ? 1 : -1;
          for (int cc = c2; cc != c; cc += step_c) s.push_back(sid(r, cc));
          s.push_back(sid(r, c));
          int step_r = r2 > r ? 1 : -1;
          for (int rr = r + step_r;; rr += step_r) {
            s.push_back(sid(rr, c));
            if (rr == r2) break;
          }
          ells.push_back(std::move(s));
        }
      }
    }
  }
  Rng rng(spec.seed);
  // Fisher-Yates with the portable generator
  for (size_t i = ells.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng.next_below(i));
    std::swap(ells[i - 1], ells[j]);
  }
  for (const auto& s : ells) {
    if (static_cast<int>(inst.lines.size()) >= spec.pool_size) break;
    add_line(s);
  }
  if (static_cast<int>(inst.lines.size()) < spec.pool_size)
    throw ValidationError("grid pool exhausted at " + std::to_string(inst.lines.size()) +
                          " lines; lower the pool target");

  // seeded demand over distinct ordered pairs
  const int n = spec.rows * spec.cols;
  long long max_pairs = static_cast<long long>(n) * (n - 1);
  int want = static_cast<int>(std::min<long long>(spec.od_pairs, max_pairs));
  std::set<std::pair<int, int>> chosen;
  while (static_cast<int>(chosen.size()) < want) {
    int o = static_cast<int>(rng.next_below(n));
    int d = static_cast<int>(rng.next_below(n));
    if (o == d) continue;
    if (chosen.insert({o, d}).second) {
      double pax = 1.0 + static_cast<double>(rng.next_below(spec.max_pax_per_od));
      inst.demand.od_pairs.push_back({o, d, pax});
    }
  }

  inst.params.transfer_penalty = spec.transfer_penalty;
  inst.params.dwell = spec.dwell;
  inst.params.gamma = spec.gamma;
  inst.params.bidirectional = true;
  inst.params.budget = 0;
  inst.params.budget = spec.budget_percent / 100.0 * surrogate_baseline_budget(inst);
  inst.validate();
  return inst;
}

double surrogate_baseline_budget(const Instance& inst) {
  const int E = static_cast<int>(inst.ptn.edges.size());
  std::vector<char> covered(E, 0);
  std::vector<std::vector<int>> edges_of_line(inst.lines.size());
  for (const Line& l : inst.lines)
    for (size_t k = 1; k < l.stations.size(); ++k) {
      int e = inst.ptn.edge_between(l.stations[k - 1], l.stations[k]);
      if (e < 0) throw ValidationError("line " + std::to_string(l.id) + " leaves the track network");
      edges_of_line[l.id].push_back(e);
    }
  int remaining = E;
  double total = 0;
  while (remaining > 0) {
    int best = -1, best_gain = 0;
    double best_ratio = 0;
    for (const Line& l : inst.lines) {
      int gain = 0;
      for (int e : edges_of_line[l.id])
        if (!covered[e]) ++gain;
      if (gain == 0) continue;
      double cost = l.setup_cost + l.op_cost * l.f_min;
      double ratio = cost / gain;
      if (best < 0 || ratio < best_ratio - 1e-12 ||
          (std::abs(ratio - best_ratio) <= 1e-12 && l.id < best)) {
        best = l.id;
        best_ratio = ratio;
        best_gain = gain;
      }
    }
    if (best < 0) throw ValidationError("some track edge is covered by no line in the pool");
    total += inst.lines[best].setup_cost + inst.lines[best].op_cost * inst.lines[best].f_min;
    remaining -= best_gain;
    for (int e : edges_of_line[best]) covered[e] = 1;
  }
  return total;
}

PlanAudit audit_plan(const Instance& inst, const std::vector<char>& operated,
                     const std::vector<double>& frequency) {
  PlanAudit a;
  constexpr double kTol = 1e-6;
  for (const Line& l : inst.lines) {
    if (operated[l.id]) {
      a.cost += l.setup_cost + l.op_cost * frequency[l.id];
      if (frequency[l.id] < l.f_min - kTol || frequency[l.id] > l.f_max + kTol) {
        a.frequency_ok = false;
        a.bad_frequency_lines.push_back(l.id);
      }
    } else if (frequency[l.id] > kTol) {
      a.frequency_ok = false;
      a.bad_frequency_lines.push_back(l.id);
    }
  }
  if (a.cost > inst.params.budget * (1 + 1e-9) + kTol) a.budget_ok = false;
  for (const TrackEdge& e : inst.ptn.edges) {
    bool covered = false;
    for (const Line& l : inst.lines) {
      if (!operated[l.id]) continue;
      for (size_t k = 1; k < l.stations.size() && !covered; ++k)
        if (inst.ptn.edge_between(l.stations[k - 1], l.stations[k]) == e.id) covered = true;
      if (covered) break;
    }
    if (!covered &&
        std::find(inst.params.coverage_exempt_edges.begin(), inst.params.coverage_exempt_edges.end(),
                  e.id) == inst.params.coverage_exempt_edges.end()) {
      a.coverage_ok = false;
      a.uncovered_edges.push_back(e.id);
    }
  }
  return a;
}

}  // namespace lineplan
