#include "lineplan/json_io.hpp"

#include <fstream>

namespace lineplan {

using nlohmann::json;

json instance_to_json(const Instance& inst) {
  json j;
  j["stations"] = json::array();
  for (const Station& s : inst.ptn.stations) j["stations"].push_back({{"id", s.id}, {"name", s.name}});
  j["edges"] = json::array();
  for (const TrackEdge& e : inst.ptn.edges)
    j["edges"].push_back({{"id", e.id}, {"endpoints", {e.a, e.b}}, {"run_time", e.run_time}});
  j["lines"] = json::array();
  for (const Line& l : inst.lines)
    j["lines"].push_back({{"id", l.id},
                          {"stations", l.stations},
                          {"d", l.op_cost},
                          {"e", l.setup_cost},
                          {"f_min", l.f_min},
                          {"f_max", l.f_max}});
  j["demand"] = json::array();
  for (const OdPair& od : inst.demand.od_pairs)
    j["demand"].push_back(
        {{"origin", od.origin}, {"destination", od.destination}, {"passengers", od.passengers}});
  j["params"] = {{"transfer_penalty", inst.params.transfer_penalty},
                 {"dwell", inst.params.dwell},
                 {"gamma", inst.params.gamma},
                 {"budget", inst.params.budget},
                 {"bidirectional", inst.params.bidirectional}};
  if (!inst.params.coverage_exempt_edges.empty())
    j["params"]["coverage_exempt_edges"] = inst.params.coverage_exempt_edges;
  return j;
}

Instance instance_from_json(const json& j) {
  Instance inst;
  for (const auto& s : j.at("stations"))
    inst.ptn.stations.push_back({s.at("id").get<int>(), s.at("name").get<std::string>()});
  for (const auto& e : j.at("edges")) {
    TrackEdge t;
    t.id = e.at("id").get<int>();
    t.a = e.at("endpoints").at(0).get<int>();
    t.b = e.at("endpoints").at(1).get<int>();
    t.run_time = e.at("run_time").get<double>();
    inst.ptn.edges.push_back(t);
  }
  for (const auto& le : j.at("lines")) {
    Line l;
    l.id = le.at("id").get<int>();
    l.stations = le.at("stations").get<std::vector<int>>();
    l.op_cost = le.at("d").get<double>();
    l.setup_cost = le.at("e").get<double>();
    l.f_min = le.at("f_min").get<double>();
    l.f_max = le.at("f_max").get<double>();
    inst.lines.push_back(l);
  }
  for (const auto& d : j.at("demand"))
    inst.demand.od_pairs.push_back({d.at("origin").get<int>(), d.at("destination").get<int>(),
                                    d.at("passengers").get<double>()});
  const auto& p = j.at("params");
  inst.params.transfer_penalty = p.at("transfer_penalty").get<double>();
  inst.params.dwell = p.at("dwell").get<double>();
  inst.params.gamma = p.at("gamma").get<double>();
  inst.params.budget = p.at("budget").get<double>();
  inst.params.bidirectional = p.at("bidirectional").get<bool>();
  if (p.contains("coverage_exempt_edges"))
    inst.params.coverage_exempt_edges = p.at("coverage_exempt_edges").get<std::vector<int>>();
  return inst;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void save_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << j.dump(2) << "\n";
}

Instance load_instance(const std::string& path) { return instance_from_json(load_json(path)); }

void save_instance(const Instance& inst, const std::string& path) {
  save_json(instance_to_json(inst), path);
}

}  // namespace lineplan
