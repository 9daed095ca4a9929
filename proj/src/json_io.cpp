#include "workbench/json_io.hpp"

#include <fstream>

#include "workbench/errors.hpp"

namespace workbench {

namespace {

const nlohmann::json& field(const nlohmann::json& j, const char* name) {
  require_schema(j.is_object(), "expected a JSON object");
  auto it = j.find(name);
  require_schema(it != j.end(), std::string("missing field '") + name + "'");
  return *it;
}

int int_field(const nlohmann::json& j, const char* name) {
  const auto& f = field(j, name);
  require_schema(f.is_number_integer(), std::string("field '") + name + "' must be an integer");
  return f.get<int>();
}

std::string str_of(const nlohmann::json& j, const char* what) {
  require_schema(j.is_string(), std::string(what) + " must be a string");
  return j.get<std::string>();
}

Tag tag_from(const nlohmann::json& j) {
  const std::string s = str_of(j, "tag");
  if (s == "plain") return Tag::plain;
  if (s == "notched") return Tag::notched;
  throw SchemaError("tag must be 'plain' or 'notched'");
}

EdgeRef edge_from(const nlohmann::json& j) {
  if (j.is_number_integer()) {
    const int id = j.get<int>();
    require_schema(id >= 1, "edge ids must be positive");
    return EdgeRef{id, ""};
  }
  if (j.is_string()) return EdgeRef{0, j.get<std::string>()};
  throw SchemaError("piece edge must be an arc id or a boundary segment name");
}

nlohmann::json edge_to(const EdgeRef& e) {
  if (e.is_boundary()) return e.boundary;
  return e.id;
}

}  // namespace

nlohmann::json quiver_to_json(const Quiver& q) {
  nlohmann::json j;
  j["n"] = q.n();
  if (q.n_mutable() != q.n()) j["n_mutable"] = q.n_mutable();
  nlohmann::json arrows = nlohmann::json::array();
  for (const auto& [st, mult] : q.arrows())
    for (int k = 0; k < mult; ++k) arrows.push_back({st.first, st.second});
  j["arrows"] = std::move(arrows);
  return j;
}

Quiver quiver_from_json(const nlohmann::json& j) {
  const int n = int_field(j, "n");
  require_schema(n >= 1, "quiver needs at least one vertex");
  int n_mut = n;
  if (j.contains("n_mutable")) n_mut = int_field(j, "n_mutable");
  require_schema(n_mut >= 1 && n_mut <= n, "mutable vertex count out of range");
  Quiver q(n, n_mut);
  const auto& arrows = field(j, "arrows");
  require_schema(arrows.is_array(), "field 'arrows' must be an array");
  for (const auto& a : arrows) {
    require_schema(a.is_array() && a.size() == 2 && a[0].is_number_integer() &&
                       a[1].is_number_integer(),
                   "each arrow must be a pair of vertex ids");
    q.add_arrow(a[0].get<int>(), a[1].get<int>());
  }
  q.validate();
  return q;
}

nlohmann::json surface_to_json(const SurfaceSpec& s) {
  return {{"genus", s.genus}, {"boundary", s.boundary}, {"punctures", s.punctures}};
}

SurfaceSpec surface_from_json(const nlohmann::json& j) {
  SurfaceSpec s;
  s.genus = int_field(j, "genus");
  const auto& b = field(j, "boundary");
  require_schema(b.is_array(), "field 'boundary' must be an array");
  for (const auto& k : b) {
    require_schema(k.is_number_integer(), "boundary entries must be integers");
    s.boundary.push_back(k.get<int>());
  }
  s.punctures = int_field(j, "punctures");
  s.validate();
  return s;
}

nlohmann::json triangulation_to_json(const Triangulation& t) {
  nlohmann::json j;
  j["surface"] = surface_to_json(t.surface);
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& [name, punc] : t.points) pts.push_back({{"id", name}, {"puncture", punc}});
  j["points"] = std::move(pts);
  nlohmann::json arcs = nlohmann::json::array();
  for (const Arc& a : t.arcs) {
    nlohmann::json aj;
    aj["id"] = a.id;
    aj["ends"] = {a.ends[0], a.ends[1]};
    aj["tags"] = {a.tags[0] == Tag::notched ? "notched" : "plain",
                  a.tags[1] == Tag::notched ? "notched" : "plain"};
    arcs.push_back(std::move(aj));
  }
  j["arcs"] = std::move(arcs);
  nlohmann::json pieces = nlohmann::json::array();
  for (const Piece& p : t.pieces) {
    nlohmann::json pj;
    if (p.kind == Piece::Kind::triangle) {
      pj["type"] = "triangle";
      pj["edges"] = {edge_to(p.edges[0]), edge_to(p.edges[1]), edge_to(p.edges[2])};
      pj["corners"] = {p.corners[0], p.corners[1], p.corners[2]};
    } else {
      pj["type"] = "monogon";
      pj["loop"] = p.loop;
      pj["base"] = p.base;
      pj["puncture"] = p.puncture;
      pj["pair"] = {p.pair[0], p.pair[1]};
    }
    pieces.push_back(std::move(pj));
  }
  j["pieces"] = std::move(pieces);
  j["boundary_segments"] = t.boundary_segments;
  if (!t.sigma.empty()) j["sigma"] = t.sigma;
  return j;
}

Triangulation triangulation_from_json(const nlohmann::json& j) {
  Triangulation t;
  t.surface = surface_from_json(field(j, "surface"));
  const auto& pts = field(j, "points");
  require_schema(pts.is_array(), "field 'points' must be an array");
  for (const auto& p : pts) {
    const std::string name = str_of(field(p, "id"), "point id");
    const auto& punc = field(p, "puncture");
    require_schema(punc.is_boolean(), "field 'puncture' must be a boolean");
    require_schema(t.points.emplace(name, punc.get<bool>()).second,
                   "duplicate marked point '" + name + "'");
  }
  const auto& arcs = field(j, "arcs");
  require_schema(arcs.is_array(), "field 'arcs' must be an array");
  for (const auto& aj : arcs) {
    Arc a;
    a.id = int_field(aj, "id");
    const auto& ends = field(aj, "ends");
    require_schema(ends.is_array() && ends.size() == 2, "arc ends must be a pair of point ids");
    a.ends = {str_of(ends[0], "arc end"), str_of(ends[1], "arc end")};
    if (aj.contains("tags")) {
      const auto& tags = aj["tags"];
      require_schema(tags.is_array() && tags.size() == 2, "arc tags must be a pair");
      a.tags = {tag_from(tags[0]), tag_from(tags[1])};
    }
    t.arcs.push_back(std::move(a));
  }
  std::sort(t.arcs.begin(), t.arcs.end(), [](const Arc& a, const Arc& b) { return a.id < b.id; });
  const auto& pieces = field(j, "pieces");
  require_schema(pieces.is_array(), "field 'pieces' must be an array");
  for (const auto& pj : pieces) {
    Piece p;
    const std::string kind = str_of(field(pj, "type"), "piece type");
    if (kind == "triangle") {
      p.kind = Piece::Kind::triangle;
      const auto& es = field(pj, "edges");
      const auto& cs = field(pj, "corners");
      require_schema(es.is_array() && es.size() == 3, "a triangle needs three edges");
      require_schema(cs.is_array() && cs.size() == 3, "a triangle needs three corners");
      for (int k = 0; k < 3; ++k) {
        p.edges[k] = edge_from(es[k]);
        p.corners[k] = str_of(cs[k], "triangle corner");
      }
    } else if (kind == "monogon") {
      p.kind = Piece::Kind::monogon;
      p.loop = int_field(pj, "loop");
      p.base = str_of(field(pj, "base"), "monogon base");
      p.puncture = str_of(field(pj, "puncture"), "monogon puncture");
      const auto& pr = field(pj, "pair");
      require_schema(pr.is_array() && pr.size() == 2 && pr[0].is_number_integer() &&
                         pr[1].is_number_integer(),
                     "monogon pair must be two arc ids");
      p.pair = {pr[0].get<int>(), pr[1].get<int>()};
    } else {
      throw SchemaError("piece type must be 'triangle' or 'monogon'");
    }
    t.pieces.push_back(std::move(p));
  }
  if (j.contains("boundary_segments")) {
    const auto& bs = j["boundary_segments"];
    require_schema(bs.is_array(), "field 'boundary_segments' must be an array");
    for (const auto& s : bs) t.boundary_segments.push_back(str_of(s, "boundary segment name"));
  }
  if (j.contains("sigma")) {
    const auto& sg = j["sigma"];
    require_schema(sg.is_array(), "field 'sigma' must be an array");
    for (const auto& s : sg) t.sigma.insert(str_of(s, "sigma entry"));
  }
  t.validate();
  return t;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  require_schema(in.good(), "cannot open file '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("invalid JSON in '" + path + "': " + e.what());
  }
}

Triangulation load_triangulation_file(const std::string& path) {
  return triangulation_from_json(load_json_file(path));
}

}  // namespace workbench
