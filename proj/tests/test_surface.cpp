#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "workbench/errors.hpp"
#include "workbench/json_io.hpp"
#include "workbench/quiver.hpp"
#include "workbench/surface.hpp"

using workbench::AngleRef;
using workbench::Arc;
using workbench::check_condition;
using workbench::classify;
using workbench::ClosureOptions;
using workbench::collision_witness;
using workbench::EdgeRef;
using workbench::flip;
using workbench::flip_closure;
using workbench::graph_GT;
using workbench::InvariantError;
using workbench::load_json_file;
using workbench::load_triangulation_file;
using workbench::NotchSolution;
using workbench::Piece;
using workbench::build_quiver;
using workbench::Quiver;
using workbench::SchemaError;
using workbench::solve_notch_counts;
using workbench::SurfaceSpec;
using workbench::Tag;
using workbench::TaggedGraph;
using workbench::Triangulation;
using workbench::UniquenessClass;

namespace {

std::string fx(const std::string& name) {
  return std::string(WORKBENCH_FIXTURE_DIR) + "/" + name + ".json";
}

Triangulation load_fx(const std::string& name) { return load_triangulation_file(fx(name)); }

const std::vector<std::string> kFixtures = {
    "monogon3", "monogon3_mu5", "square1p", "torus1p",
    "digon1p",  "hexagon",      "annulus11", "genus2_1p"};

SurfaceSpec spec(int g, std::vector<int> b, int p) {
  SurfaceSpec s;
  s.genus = g;
  s.boundary = std::move(b);
  s.punctures = p;
  return s;
}

// Every triangulated surface carries a corner system: following successors
// walks counterclockwise around a marked point, cycling at punctures and
// chaining between boundary segments at boundary points.
void check_angles(const Triangulation& t) {
  const auto angles = t.all_angles();
  std::map<std::string, std::vector<AngleRef>> by_point;
  for (const auto& a : angles) by_point[t.point_of(a)].push_back(a);

  const auto enclosed = t.enclosed_punctures();
  for (const auto& p : enclosed) CHECK(by_point.count(p) == 0);
  for (const auto& [pt, punc] : t.points) {
    (void)punc;
    if (!enclosed.count(pt)) CHECK(by_point.count(pt) == 1);
  }

  for (const auto& a : angles) {
    auto s = t.successor(a);
    CHECK(s.has_value() == !t.cw_ray(a).is_boundary());
    if (s) {
      CHECK(t.point_of(*s) == t.point_of(a));
      auto back = t.predecessor(*s);
      REQUIRE(back.has_value());
      CHECK(*back == a);
    }
    auto pr = t.predecessor(a);
    CHECK(pr.has_value() == !t.ccw_ray(a).is_boundary());
    if (pr) {
      auto fwd = t.successor(*pr);
      REQUIRE(fwd.has_value());
      CHECK(*fwd == a);
    }
  }

  for (const auto& [pt, group] : by_point) {
    if (t.points.at(pt)) {
      std::set<AngleRef> seen;
      AngleRef cur = group[0];
      for (std::size_t i = 0; i < group.size(); ++i) {
        CHECK(seen.insert(cur).second);
        auto nx = t.successor(cur);
        REQUIRE(nx.has_value());
        cur = *nx;
      }
      CHECK(cur == group[0]);
      CHECK(seen.size() == group.size());
    } else {
      std::vector<AngleRef> starts;
      for (const auto& a : group)
        if (!t.predecessor(a).has_value()) starts.push_back(a);
      REQUIRE(starts.size() == 1);
      std::set<AngleRef> seen;
      std::optional<AngleRef> cur = starts[0];
      while (cur) {
        CHECK(t.point_of(*cur) == pt);
        CHECK(seen.insert(*cur).second);
        cur = t.successor(*cur);
      }
      CHECK(seen.size() == group.size());
    }
  }
}

TaggedGraph::Edge edge_of(const TaggedGraph& g, int id) {
  for (const auto& e : g.edges)
    if (e.id == id) return e;
  REQUIRE(false);
  return {};
}

std::map<std::string, int> vertex_load(const TaggedGraph& g, const std::map<int, int>& mult) {
  std::map<std::string, int> load;
  for (const auto& [id, m] : mult) {
    const auto e = edge_of(g, id);
    load[e.p] += m;
    load[e.q] += m;
  }
  return load;
}

}  // namespace

TEST_CASE("surface ranks and exclusions") {
  CHECK(spec(0, {1}, 3).rank() == 7);
  CHECK(spec(0, {4}, 1).rank() == 4);
  CHECK(spec(1, {}, 1).rank() == 3);
  CHECK(spec(0, {2}, 1).rank() == 2);
  CHECK(spec(0, {6}, 0).rank() == 3);
  CHECK(spec(0, {1, 1}, 0).rank() == 2);
  CHECK(spec(2, {}, 1).rank() == 9);

  CHECK_NOTHROW(spec(0, {1}, 3).validate());
  CHECK_NOTHROW(spec(0, {1}, 2).validate());
  CHECK_NOTHROW(spec(0, {}, 4).validate());
  CHECK_THROWS_AS(spec(0, {1}, 1).validate(), SchemaError);
  CHECK_THROWS_AS(spec(0, {2}, 0).validate(), SchemaError);
  CHECK_THROWS_AS(spec(0, {3}, 0).validate(), SchemaError);
  CHECK_THROWS_AS(spec(0, {}, 3).validate(), SchemaError);
  CHECK_THROWS_AS(spec(1, {}, 0).validate(), SchemaError);
  CHECK_THROWS_AS(spec(2, {}, 0).validate(), SchemaError);
  CHECK_THROWS_AS(spec(0, {0}, 2).validate(), SchemaError);
  CHECK_THROWS_AS(spec(-1, {1}, 3).validate(), SchemaError);
}

TEST_CASE("classification of marked surfaces") {
  CHECK(classify(spec(0, {6}, 0)) == UniquenessClass::ALL);
  CHECK(classify(spec(0, {1, 1}, 0)) == UniquenessClass::ALL);
  CHECK(classify(spec(0, {4}, 1)) == UniquenessClass::ALL);
  CHECK(classify(spec(0, {2}, 1)) == UniquenessClass::ALL);
  CHECK(classify(spec(0, {1}, 2)) == UniquenessClass::ALL);
  CHECK(classify(spec(0, {1, 1}, 1)) == UniquenessClass::ALL);

  CHECK(classify(spec(0, {1}, 3)) == UniquenessClass::SOME);
  CHECK(classify(spec(0, {1, 1}, 2)) == UniquenessClass::SOME);
  CHECK(classify(spec(0, {1, 1, 1}, 1)) == UniquenessClass::SOME);
  CHECK(classify(spec(1, {1}, 1)) == UniquenessClass::SOME);

  CHECK(classify(spec(1, {}, 1)) == UniquenessClass::NONE);
  CHECK(classify(spec(1, {}, 2)) == UniquenessClass::NONE);
  CHECK(classify(spec(0, {}, 4)) == UniquenessClass::NONE);
  CHECK(classify(spec(2, {}, 1)) == UniquenessClass::NONE);

  CHECK(workbench::to_string(UniquenessClass::ALL) == "all");
  CHECK(workbench::to_string(UniquenessClass::SOME) == "some");
  CHECK(workbench::to_string(UniquenessClass::NONE) == "none");
}

TEST_CASE("bundled triangulations load and validate") {
  const std::map<std::string, int> ranks = {
      {"monogon3", 7}, {"monogon3_mu5", 7}, {"square1p", 4}, {"torus1p", 3},
      {"digon1p", 2},  {"hexagon", 3},      {"annulus11", 2}, {"genus2_1p", 9}};
  for (const auto& name : kFixtures) {
    CAPTURE(name);
    const Triangulation t = load_fx(name);
    CHECK(t.rank() == ranks.at(name));
    CHECK_NOTHROW(t.validate());
    check_angles(t);
  }
}

TEST_CASE("loops, pairs, and enclosed punctures") {
  const Triangulation t = load_fx("monogon3");
  CHECK(t.is_loop(8));
  CHECK(t.is_loop(9));
  CHECK(!t.is_loop(1));
  CHECK(t.pieces[t.monogon_of_loop(8)].puncture == "l");
  CHECK(t.pieces[t.monogon_of_loop(9)].puncture == "r");
  CHECK(t.enclosed_punctures() == std::set<std::string>{"l", "r"});
  CHECK(t.omega_ids() == std::vector<int>{1, 2, 3, 8, 9});
  CHECK(t.omega_ends(8) == std::array<std::string, 2>{"d", "d"});
  CHECK(t.omega_ends(1) == std::array<std::string, 2>{"z", "d"});

  const Triangulation m = load_fx("monogon3_mu5");
  CHECK(m.omega_ids() == std::vector<int>{1, 2, 3, 4, 5, 9});
  CHECK(m.enclosed_punctures() == std::set<std::string>{"r"});
}

TEST_CASE("corner walk around the central puncture") {
  const Triangulation t = load_fx("monogon3");
  // Pieces load in file order: three triangles, then the two monogons.
  const std::vector<AngleRef> cycle = {{0, 0}, {1, 2}, {4, 0}, {1, 0}, {2, 2}, {0, 2}, {3, 0}};
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    CHECK(t.point_of(cycle[i]) == "d");
    auto nx = t.successor(cycle[i]);
    REQUIRE(nx.has_value());
    CHECK(*nx == cycle[(i + 1) % cycle.size()]);
  }

  const std::vector<AngleRef> chain = {{2, 1}, {1, 1}, {0, 1}, {2, 0}};
  CHECK(!t.predecessor(chain.front()).has_value());
  CHECK(!t.successor(chain.back()).has_value());
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    CHECK(t.point_of(chain[i]) == "z");
    auto nx = t.successor(chain[i]);
    REQUIRE(nx.has_value());
    CHECK(*nx == chain[i + 1]);
  }
}

TEST_CASE("quivers of the bundled triangulations") {
  auto expect = [](int n, std::vector<std::pair<int, int>> arrows) {
    Quiver q = Quiver::all_mutable(n);
    for (const auto& [s, t] : arrows) q.add_arrow(s, t);
    return q;
  };

  CHECK(build_quiver(load_fx("monogon3")) ==
        expect(7, {{2, 1}, {1, 4}, {4, 2}, {1, 5}, {5, 2}, {3, 2}, {2, 6}, {6, 3}, {2, 7},
                   {7, 3}, {3, 1}}));
  CHECK(build_quiver(load_fx("square1p")) == expect(4, {{2, 1}, {3, 2}, {4, 3}, {1, 4}}));
  CHECK(build_quiver(load_fx("hexagon")) == expect(3, {{2, 1}, {3, 2}}));
  CHECK(build_quiver(load_fx("annulus11")) == expect(2, {{1, 2}, {1, 2}}));
  CHECK(build_quiver(load_fx("torus1p")) ==
        expect(3, {{1, 3}, {1, 3}, {3, 2}, {3, 2}, {2, 1}, {2, 1}}));
  CHECK(build_quiver(load_fx("digon1p")) == expect(2, {}));

  Quiver mu5 = build_quiver(load_fx("monogon3"));
  mu5.mutate(5);
  CHECK(build_quiver(load_fx("monogon3_mu5")) == mu5);
}

TEST_CASE("flips are involutions") {
  for (const auto& name : kFixtures) {
    CAPTURE(name);
    const Triangulation t = load_fx(name);
    const std::string key = t.exact_key();
    for (int k = 1; k <= t.rank(); ++k) {
      CAPTURE(k);
      const Triangulation f = flip(t, k);
      CHECK(f.exact_key() != key);
      CHECK(flip(f, k).exact_key() == key);
    }
  }
}

TEST_CASE("flipping the notched pair member opens the monogon") {
  const Triangulation t = load_fx("monogon3");
  const Triangulation f = flip(t, 5);
  CHECK(f.exact_key() == load_fx("monogon3_mu5").exact_key());
  CHECK(flip(load_fx("monogon3_mu5"), 5).exact_key() == t.exact_key());
}

TEST_CASE("flipping the plain pair member records the tag toggle") {
  const Triangulation t = load_fx("monogon3");
  const Triangulation f = flip(t, 4);
  CHECK(f.sigma == std::set<std::string>{"l"});
  const Arc& a4 = f.arc(4);
  CHECK(std::set<std::string>{a4.ends[0], a4.ends[1]} == std::set<std::string>{"l", "z"});
  CHECK(a4.tags == std::array<Tag, 2>{Tag::plain, Tag::plain});
  CHECK(f.enclosed_punctures() == std::set<std::string>{"r"});
  // The notched companion keeps its id but is now a plain arc from d to l.
  const Arc& a5 = f.arc(5);
  CHECK(a5.tags == std::array<Tag, 2>{Tag::plain, Tag::plain});
  CHECK(flip(f, 4).exact_key() == t.exact_key());
}

TEST_CASE("flip closures") {
  // States are labeled: arc ids ride along through flips, so symmetric
  // surfaces reach each shape once per reachable labeling.
  ClosureOptions opt;
  const auto sq = flip_closure(load_fx("square1p"), opt);
  CHECK(sq.closed);
  CHECK(sq.reached.size() == 1200);

  const auto hex = flip_closure(load_fx("hexagon"), opt);
  CHECK(hex.closed);
  CHECK(hex.reached.size() == 84);

  const auto dig = flip_closure(load_fx("digon1p"), opt);
  CHECK(dig.closed);
  CHECK(dig.reached.size() == 4);
  CHECK(dig.depth_counts == std::vector<std::size_t>{1, 2, 1});

  // Closed surfaces have few gluing patterns even when the exchange graph
  // of seeds is infinite; the combinatorial closure is tiny.
  const auto tor = flip_closure(load_fx("torus1p"), opt);
  CHECK(tor.closed);
  CHECK(tor.reached.size() == 2);
  const auto ann = flip_closure(load_fx("annulus11"), opt);
  CHECK(ann.closed);
  CHECK(ann.reached.size() == 2);
}

TEST_CASE("flip closure caps and depth limits") {
  ClosureOptions opt;
  opt.cap = 20;
  const auto capped = flip_closure(load_fx("hexagon"), opt);
  CHECK(!capped.closed);
  CHECK(capped.reached.size() == 20);

  ClosureOptions depth_only;
  depth_only.max_depth = 1;
  const auto shallow = flip_closure(load_fx("hexagon"), depth_only);
  CHECK(!shallow.closed);
  CHECK(shallow.depth_counts == std::vector<std::size_t>{1, 3});

  // A depth limit beyond the closure depth still reports a closed result.
  ClosureOptions deep;
  deep.max_depth = 5;
  CHECK(flip_closure(load_fx("digon1p"), deep).closed);
}

TEST_CASE("flips and quiver mutation commute to depth two") {
  for (const auto& name : kFixtures) {
    CAPTURE(name);
    const Triangulation t0 = load_fx(name);
    const Quiver q0 = build_quiver(t0);
    for (int k = 1; k <= t0.rank(); ++k) {
      CAPTURE(k);
      const Triangulation t1 = flip(t0, k);
      Quiver q1 = q0;
      q1.mutate(k);
      CHECK(build_quiver(t1) == q1);
      for (int k2 = 1; k2 <= t0.rank(); ++k2) {
        CAPTURE(k2);
        Quiver q2 = q1;
        q2.mutate(k2);
        CHECK(build_quiver(flip(t1, k2)) == q2);
      }
    }
  }
}

TEST_CASE("puncture graphs of the bundled triangulations") {
  const TaggedGraph g = graph_GT(load_fx("monogon3"));
  CHECK(g.vertices == std::vector<std::string>{"d"});
  REQUIRE(g.edges.size() == 2);
  CHECK(edge_of(g, 8).is_loop());
  CHECK(edge_of(g, 9).is_loop());
  CHECK(!check_condition(g));

  const TaggedGraph gm = graph_GT(load_fx("monogon3_mu5"));
  CHECK(gm.vertices == std::vector<std::string>{"d", "l"});
  REQUIRE(gm.edges.size() == 2);
  CHECK(!edge_of(gm, 4).is_loop());
  CHECK(edge_of(gm, 9).is_loop());
  CHECK(check_condition(gm));

  const TaggedGraph gs = graph_GT(load_fx("square1p"));
  CHECK(gs.vertices == std::vector<std::string>{"p"});
  CHECK(gs.edges.empty());
  CHECK(check_condition(gs));

  const TaggedGraph gt = graph_GT(load_fx("torus1p"));
  CHECK(gt.vertices == std::vector<std::string>{"p"});
  CHECK(gt.edges.size() == 3);
  CHECK(!check_condition(gt));

  CHECK(graph_GT(load_fx("hexagon")).vertices.empty());
  CHECK(check_condition(graph_GT(load_fx("hexagon"))));
}

TEST_CASE("notch count systems") {
  const TaggedGraph g = graph_GT(load_fx("monogon3"));
  auto r = solve_notch_counts(g, {{"d", 2}});
  CHECK(r.status == NotchSolution::Status::not_unique);
  r = solve_notch_counts(g, {{"d", 3}});
  CHECK(r.status == NotchSolution::Status::no_solution);
  r = solve_notch_counts(g, {{"d", 0}});
  CHECK(r.status == NotchSolution::Status::unique);
  CHECK(r.multiplicities == std::map<int, int>{{8, 0}, {9, 0}});

  const TaggedGraph gm = graph_GT(load_fx("monogon3_mu5"));
  r = solve_notch_counts(gm, {{"d", 4}, {"l", 2}});
  CHECK(r.status == NotchSolution::Status::unique);
  CHECK(r.multiplicities == std::map<int, int>{{4, 2}, {9, 1}});
  r = solve_notch_counts(gm, {{"d", 3}, {"l", 2}});
  CHECK(r.status == NotchSolution::Status::no_solution);

  const TaggedGraph gs = graph_GT(load_fx("square1p"));
  r = solve_notch_counts(gs, {{"p", 0}});
  CHECK(r.status == NotchSolution::Status::unique);
  CHECK(r.multiplicities.empty());
  r = solve_notch_counts(gs, {{"p", 1}});
  CHECK(r.status == NotchSolution::Status::no_solution);

  CHECK_THROWS_AS(solve_notch_counts(gs, {{"nowhere", 1}}), SchemaError);
}

TEST_CASE("collision witnesses") {
  const TaggedGraph g = graph_GT(load_fx("monogon3"));
  const auto w = collision_witness(g);
  REQUIRE(w.has_value());
  CHECK(w->first == std::map<int, int>{{9, 1}});
  CHECK(w->second == std::map<int, int>{{8, 1}});
  CHECK(vertex_load(g, w->first) == vertex_load(g, w->second));
  // Both sides of the witness satisfy the same count system.
  std::map<std::string, int> counts;
  for (const auto& [v, m] : vertex_load(g, w->first)) counts[v] = m;
  CHECK(solve_notch_counts(g, counts).status == NotchSolution::Status::not_unique);

  const TaggedGraph gt = graph_GT(load_fx("torus1p"));
  const auto wt = collision_witness(gt);
  REQUIRE(wt.has_value());
  CHECK(!wt->first.empty());
  CHECK(!wt->second.empty());
  CHECK(vertex_load(gt, wt->first) == vertex_load(gt, wt->second));

  CHECK(!collision_witness(graph_GT(load_fx("square1p"))).has_value());
  CHECK(!collision_witness(graph_GT(load_fx("monogon3_mu5"))).has_value());
  CHECK(!collision_witness(graph_GT(load_fx("hexagon"))).has_value());

  // Witness existence is the negation of the graph condition on every fixture.
  for (const auto& name : kFixtures) {
    CAPTURE(name);
    const TaggedGraph gr = graph_GT(load_fx(name));
    CHECK(collision_witness(gr).has_value() == !check_condition(gr));
  }
}

TEST_CASE("broken triangulations are rejected") {
  const nlohmann::json base = load_json_file(fx("monogon3"));
  auto rejected = [&](auto&& mutate_json) {
    nlohmann::json j = base;
    mutate_json(j);
    CHECK_THROWS_AS(workbench::triangulation_from_json(j), SchemaError);
  };

  rejected([](nlohmann::json& j) { j["pieces"].erase(2); });
  rejected([](nlohmann::json& j) { j["pieces"][0]["corners"] = {"z", "d", "d"}; });
  rejected([](nlohmann::json& j) { j["arcs"][4]["tags"] = {"plain", "plain"}; });
  rejected([](nlohmann::json& j) { j["sigma"] = {"l"}; });
  rejected([](nlohmann::json& j) { j["sigma"] = {"z"}; });
  rejected([](nlohmann::json& j) { j["pieces"][2]["edges"] = {3, 3, "bz"}; });
  rejected([](nlohmann::json& j) { j["arcs"][6]["id"] = 9; });
  rejected([](nlohmann::json& j) { j["surface"]["punctures"] = 2; });
  rejected([](nlohmann::json& j) { j["arcs"][0]["tags"] = {"notched", "plain"}; });
  rejected([](nlohmann::json& j) { j["pieces"][0]["edges"] = {1, 12, 2}; });
  rejected([](nlohmann::json& j) { j.erase("arcs"); });
  rejected([](nlohmann::json& j) { j["points"][1]["puncture"] = false; });
  rejected([](nlohmann::json& j) { j["pieces"][0]["type"] = "pentagon"; });
  rejected([](nlohmann::json& j) { j["boundary_segments"] = {"bz", "bz"}; });
  rejected([](nlohmann::json& j) { j["pieces"][3]["pair"] = {4, 4}; });
  rejected([](nlohmann::json& j) { j["pieces"][3]["loop"] = 7; });

  CHECK_THROWS_AS(load_json_file(fx("does_not_exist")), SchemaError);
  const std::string bad = "bad_tmp.json";
  {
    std::ofstream out(bad);
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_json_file(bad), SchemaError);
}

TEST_CASE("JSON round trips") {
  for (const auto& name : kFixtures) {
    CAPTURE(name);
    const Triangulation t = load_fx(name);
    const Triangulation back = workbench::triangulation_from_json(workbench::triangulation_to_json(t));
    CHECK(back.exact_key() == t.exact_key());
  }
  // A state with a recorded tag toggle keeps it through serialization.
  const Triangulation toggled = flip(load_fx("monogon3"), 4);
  REQUIRE(!toggled.sigma.empty());
  const Triangulation back = workbench::triangulation_from_json(workbench::triangulation_to_json(toggled));
  CHECK(back.exact_key() == toggled.exact_key());

  const Quiver q = build_quiver(load_fx("monogon3"));
  CHECK(workbench::quiver_from_json(workbench::quiver_to_json(q)) == q);
  const Quiver framed = Quiver::framed(q);
  CHECK(workbench::quiver_from_json(workbench::quiver_to_json(framed)) == framed);

  const SurfaceSpec s = spec(1, {2, 3}, 2);
  CHECK(workbench::surface_from_json(workbench::surface_to_json(s)) == s);
}
