#pragma once

#include <string>

#include "workbench/quiver.hpp"
#include "workbench/surface.hpp"

#include <nlohmann/json.hpp>

namespace workbench {

// JSON (de)serialization. Loaders throw SchemaError on malformed input.

nlohmann::json quiver_to_json(const Quiver& q);
Quiver quiver_from_json(const nlohmann::json& j);

nlohmann::json surface_to_json(const SurfaceSpec& s);
SurfaceSpec surface_from_json(const nlohmann::json& j);

nlohmann::json triangulation_to_json(const Triangulation& t);
Triangulation triangulation_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);
Triangulation load_triangulation_file(const std::string& path);

}  // namespace workbench
