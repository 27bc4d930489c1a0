#ifndef LINEPLAN_JSON_IO_HPP_
#define LINEPLAN_JSON_IO_HPP_

#include <string>

#include "json.hpp"
#include "lineplan/instances.hpp"

namespace lineplan {

nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

nlohmann::json load_json(const std::string& path);
void save_json(const nlohmann::json& j, const std::string& path);

}  // namespace lineplan

#endif  // LINEPLAN_JSON_IO_HPP_
