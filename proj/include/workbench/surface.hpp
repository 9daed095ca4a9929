#pragma once

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "workbench/quiver.hpp"

namespace workbench {

// ---------------------------------------------------------------------------
// Surface specification and the uniqueness classification
// ---------------------------------------------------------------------------

// Compact oriented surface with marked points: genus, marked point count per
// boundary component, and interior punctures.
struct SurfaceSpec {
  int genus = 0;
  std::vector<int> boundary;  // marked points per boundary component, each >= 1
  int punctures = 0;

  int boundary_components() const { return static_cast<int>(boundary.size()); }
  int boundary_points() const;
  // Number of arcs in any tagged triangulation.
  int rank() const;
  // Throws SchemaError for malformed data and for the excluded surfaces that
  // admit no (or a degenerate) tagged triangulation: monogon with at most one
  // puncture, unpunctured digon or triangle, sphere with at most three
  // punctures, and closed surfaces without punctures.
  void validate() const;

  bool closed() const { return boundary.empty(); }
  bool operator==(const SurfaceSpec&) const = default;
};

// For how many tagged triangulations T of the surface the intersection-vector
// map U -> Int_T(U) is injective on multi-sets disjoint from T:
// every T, some T, or no T.
enum class UniquenessClass { ALL, SOME, NONE };

UniquenessClass classify(const SurfaceSpec& s);
std::string to_string(UniquenessClass c);

// ---------------------------------------------------------------------------
// Tagged triangulations in normal form
// ---------------------------------------------------------------------------

enum class Tag { plain, notched };

// A tagged arc: endpoints are marked point ids; tags[k] decorates ends[k]
// (always plain at boundary points).
struct Arc {
  int id = 0;
  std::array<std::string, 2> ends;
  std::array<Tag, 2> tags{Tag::plain, Tag::plain};

  bool operator==(const Arc&) const = default;
};

// An edge of a puzzle piece: either an arc/loop id (> 0) or a named boundary
// segment.
struct EdgeRef {
  int id = 0;            // arc or loop id when positive
  std::string boundary;  // non-empty iff this is a boundary segment

  bool is_boundary() const { return id == 0; }
  auto operator<=>(const EdgeRef&) const = default;
};

// Puzzle piece of the decomposition. Triangles list their edges in
// counterclockwise order with corners[i] the marked point opposite edges[i],
// so edges[i] runs counterclockwise from corners[(i+1)%3] to corners[(i+2)%3].
// A monogon piece is the interior of a punctured loop: the loop id, the
// marked point the loop is based at, the single puncture inside, and the
// conjugate pair of arcs joining base to puncture (pair[0] plain at both
// ends, pair[1] notched exactly at the puncture).
struct Piece {
  enum class Kind { triangle, monogon };
  Kind kind = Kind::triangle;

  // triangle
  std::array<EdgeRef, 3> edges{};
  std::array<std::string, 3> corners{};

  // monogon
  int loop = 0;
  std::string base;
  std::string puncture;
  std::array<int, 2> pair{0, 0};  // {plain member, notched member}

  bool operator==(const Piece&) const = default;
};

// Identifies one of a piece's angles. Triangles have three (angle i sits at
// corners[i]); a monogon has exactly one, at its base (corner == 0).
struct AngleRef {
  int piece = -1;
  int corner = 0;
  auto operator<=>(const AngleRef&) const = default;
};

// One side of an edge: triangles expose slot pos 0..2 (the edges index), a
// monogon exposes pos 0, its side of the loop. Every arc of the complex has
// exactly two slots, every boundary segment one.
struct SlotRef {
  int piece = -1;
  int pos = 0;
  auto operator<=>(const SlotRef&) const = default;
};

// A tagged triangulation, stored in normal form: the arcs are plain except
// that each monogon's second pair member is notched at the enclosed puncture,
// and `sigma` lists punctures at which every tag of the actual triangulation
// is toggled relative to the stored arcs. Canonically sigma contains no
// enclosed puncture (toggling there is absorbed by swapping the pair roles).
struct Triangulation {
  SurfaceSpec surface;
  std::map<std::string, bool> points;  // marked point id -> is puncture
  std::vector<Arc> arcs;               // sorted by id; ids are exactly 1..rank
  std::vector<Piece> pieces;
  std::vector<std::string> boundary_segments;
  std::set<std::string> sigma;

  int rank() const { return static_cast<int>(arcs.size()); }

  // Full consistency check; throws SchemaError with a diagnostic. Verifies
  // the surface spec, id ranges, tag normal form, that every arc has exactly
  // two slots traversed in opposite directions, slot/corner agreement,
  // boundary segment chains matching the declared components, the Euler
  // characteristic, and the sigma canonical form.
  void validate() const;

  const Arc& arc(int id) const;
  bool is_loop(int id) const;                 // id names a monogon's loop
  int monogon_of_loop(int loop_id) const;     // piece index
  // Ids of the combined multi-set: plain (non-pair) arcs plus loops, sorted.
  std::vector<int> omega_ids() const;
  // Endpoints of an omega id: the arc's ends, or {base, base} for a loop.
  std::array<std::string, 2> omega_ends(int id) const;
  std::set<std::string> enclosed_punctures() const;

  // --- angle system -------------------------------------------------------
  std::vector<AngleRef> all_angles() const;
  const std::string& point_of(const AngleRef& a) const;
  // Rays of an angle: the two piece edges meeting at it. For a monogon both
  // rays are the loop.
  EdgeRef cw_ray(const AngleRef& a) const;
  EdgeRef ccw_ray(const AngleRef& a) const;
  // The edge opposite a triangle angle.
  EdgeRef opposite(const AngleRef& a) const;
  // Both sides of an edge id (two slots), or the single slot of a boundary
  // segment name.
  std::vector<SlotRef> slots(const EdgeRef& e) const;
  // The angle reached when crossing into a piece through an edge slot while
  // rotating clockwise (the crossed edge becomes the new angle's
  // counterclockwise ray) or counterclockwise (it becomes the clockwise ray).
  AngleRef entry_angle_cw(const SlotRef& s) const;
  AngleRef entry_angle_ccw(const SlotRef& s) const;
  // Next angle clockwise around the same marked point: cross the cw ray.
  // Empty when the cw ray is a boundary segment.
  std::optional<AngleRef> successor(const AngleRef& a) const;
  std::optional<AngleRef> predecessor(const AngleRef& a) const;

  // Canonical identity string of the tagged triangulation: sorted arc
  // descriptors, canonically rotated piece descriptors with loop ids replaced
  // by their pair tokens, and sigma. Two normal forms describe the same
  // tagged triangulation iff their keys agree.
  std::string exact_key() const;
};

// The quiver of a triangulation: one vertex per arc (vertex i <-> arc id i),
// one arrow per consecutive edge pair of each triangle with boundary edges
// skipped and loop edges expanded to both pair members, then 2-cycles
// cancelled. Monogons contribute nothing beyond their loop's expansion.
Quiver build_quiver(const Triangulation& t);

// Flip at the arc with the given id (never a loop id). Returns the unique
// tagged triangulation exchanging that arc, in normal form with the flipped
// arc reusing the same id. Fresh loop ids are allocated above every id in
// use.
Triangulation flip(const Triangulation& t, int arc_id);

struct ClosureOptions {
  int max_depth = -1;  // -1: run to closure (or until cap)
  std::size_t cap = 100000;
};

struct ClosureResult {
  bool closed = false;
  std::vector<std::size_t> depth_counts;  // new triangulations per depth
  std::vector<Triangulation> reached;     // breadth-first discovery order
};

// Breadth-first closure of the flip graph from t, deduplicating by
// exact_key.
ClosureResult flip_closure(const Triangulation& t, const ClosureOptions& opt);

// ---------------------------------------------------------------------------
// The puncture graph and unique decodability of notch counts
// ---------------------------------------------------------------------------

// Multigraph on the punctures incident to the combined multi-set: one edge
// per omega id whose endpoints are both punctures (loops allowed).
struct TaggedGraph {
  struct Edge {
    int id = 0;  // omega id
    std::string p, q;
    bool is_loop() const { return p == q; }
  };
  std::vector<std::string> vertices;  // sorted
  std::vector<Edge> edges;            // sorted by id
};

TaggedGraph graph_GT(const Triangulation& t);

// Each connected component has at most one odd cycle and no even cycle.
bool check_condition(const TaggedGraph& g);

// Solve, over nonnegative integers, the per-vertex equations
//   sum of multiplicities of incident non-loop edges
//   + twice the multiplicities of incident loops  =  counts[p].
// Unique solutions only arise when check_condition holds.
struct NotchSolution {
  enum class Status { unique, not_unique, no_solution } status;
  std::map<int, int> multiplicities;  // by edge id, when unique
};

NotchSolution solve_notch_counts(const TaggedGraph& g,
                                 const std::map<std::string, int>& counts);

// When check_condition fails, produce two distinct edge-multiplicity vectors
// with identical per-vertex counts (an even cycle's alternating pair, or the
// two-odd-cycles pattern). first/second map edge id -> multiplicity.
struct CollisionWitness {
  std::map<int, int> first, second;
};

std::optional<CollisionWitness> collision_witness(const TaggedGraph& g);

}  // namespace workbench
