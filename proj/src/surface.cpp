#include "workbench/surface.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <functional>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "workbench/errors.hpp"

namespace workbench {

namespace mp = boost::multiprecision;

// ---------------------------------------------------------------------------
// SurfaceSpec
// ---------------------------------------------------------------------------

int SurfaceSpec::boundary_points() const {
  int c = 0;
  for (int k : boundary) c += k;
  return c;
}

int SurfaceSpec::rank() const {
  return 6 * genus + 3 * boundary_components() + 3 * punctures + boundary_points() - 6;
}

void SurfaceSpec::validate() const {
  require_schema(genus >= 0, "genus must be nonnegative");
  require_schema(punctures >= 0, "puncture count must be nonnegative");
  for (int k : boundary)
    require_schema(k >= 1, "every boundary component needs at least one marked point");
  const int b = boundary_components();
  const int c = boundary_points();
  if (b == 0) {
    require_schema(punctures >= 1, "a closed surface needs at least one puncture");
    if (genus == 0) require_schema(punctures >= 4, "a sphere needs at least four punctures");
  }
  if (genus == 0 && b == 1) {
    if (c == 1) require_schema(punctures >= 2, "a monogon needs at least two punctures");
    if (c == 2 || c == 3)
      require_schema(punctures >= 1, "digons and triangles need at least one puncture");
  }
  require(rank() >= 1, "surface admits no arcs");
}

UniquenessClass classify(const SurfaceSpec& s) {
  s.validate();
  if (s.punctures == 0) return UniquenessClass::ALL;
  if (s.closed()) return UniquenessClass::NONE;
  if (s.genus == 0 && s.boundary_components() == 1 && s.punctures <= 2)
    return UniquenessClass::ALL;
  if (s.genus == 0 && s.boundary_components() == 2 && s.punctures <= 1)
    return UniquenessClass::ALL;
  return UniquenessClass::SOME;
}

std::string to_string(UniquenessClass c) {
  switch (c) {
    case UniquenessClass::ALL: return "all";
    case UniquenessClass::SOME: return "some";
    case UniquenessClass::NONE: return "none";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Triangulation: lookups
// ---------------------------------------------------------------------------

const Arc& Triangulation::arc(int id) const {
  for (const Arc& a : arcs)
    if (a.id == id) return a;
  throw SchemaError("unknown arc id " + std::to_string(id));
}

bool Triangulation::is_loop(int id) const {
  for (const Piece& p : pieces)
    if (p.kind == Piece::Kind::monogon && p.loop == id) return true;
  return false;
}

int Triangulation::monogon_of_loop(int loop_id) const {
  for (int i = 0; i < static_cast<int>(pieces.size()); ++i)
    if (pieces[i].kind == Piece::Kind::monogon && pieces[i].loop == loop_id) return i;
  throw SchemaError("unknown loop id " + std::to_string(loop_id));
}

std::vector<int> Triangulation::omega_ids() const {
  std::set<int> pair_members;
  std::vector<int> out;
  for (const Piece& p : pieces)
    if (p.kind == Piece::Kind::monogon) {
      pair_members.insert(p.pair[0]);
      pair_members.insert(p.pair[1]);
      out.push_back(p.loop);
    }
  for (const Arc& a : arcs)
    if (!pair_members.count(a.id)) out.push_back(a.id);
  std::sort(out.begin(), out.end());
  return out;
}

std::array<std::string, 2> Triangulation::omega_ends(int id) const {
  if (is_loop(id)) {
    const Piece& m = pieces[monogon_of_loop(id)];
    return {m.base, m.base};
  }
  return arc(id).ends;
}

std::set<std::string> Triangulation::enclosed_punctures() const {
  std::set<std::string> out;
  for (const Piece& p : pieces)
    if (p.kind == Piece::Kind::monogon) out.insert(p.puncture);
  return out;
}

// ---------------------------------------------------------------------------
// Triangulation: angle system
// ---------------------------------------------------------------------------

std::vector<AngleRef> Triangulation::all_angles() const {
  std::vector<AngleRef> out;
  for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
    if (pieces[i].kind == Piece::Kind::triangle)
      for (int c = 0; c < 3; ++c) out.push_back({i, c});
    else
      out.push_back({i, 0});
  }
  return out;
}

const std::string& Triangulation::point_of(const AngleRef& a) const {
  const Piece& p = pieces.at(a.piece);
  return p.kind == Piece::Kind::triangle ? p.corners[a.corner] : p.base;
}

EdgeRef Triangulation::cw_ray(const AngleRef& a) const {
  const Piece& p = pieces.at(a.piece);
  if (p.kind == Piece::Kind::triangle) return p.edges[(a.corner + 2) % 3];
  return EdgeRef{p.loop, ""};
}

EdgeRef Triangulation::ccw_ray(const AngleRef& a) const {
  const Piece& p = pieces.at(a.piece);
  if (p.kind == Piece::Kind::triangle) return p.edges[(a.corner + 1) % 3];
  return EdgeRef{p.loop, ""};
}

EdgeRef Triangulation::opposite(const AngleRef& a) const {
  const Piece& p = pieces.at(a.piece);
  require(p.kind == Piece::Kind::triangle, "a monogon angle has no opposite edge");
  return p.edges[a.corner];
}

std::vector<SlotRef> Triangulation::slots(const EdgeRef& e) const {
  std::vector<SlotRef> out;
  for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
    const Piece& p = pieces[i];
    if (p.kind == Piece::Kind::triangle) {
      for (int k = 0; k < 3; ++k)
        if (p.edges[k] == e) out.push_back({i, k});
    } else if (!e.is_boundary() && e.id == p.loop) {
      out.push_back({i, 0});
    }
  }
  return out;
}

AngleRef Triangulation::entry_angle_cw(const SlotRef& s) const {
  const Piece& p = pieces.at(s.piece);
  if (p.kind == Piece::Kind::triangle) return {s.piece, (s.pos + 2) % 3};
  return {s.piece, 0};
}

AngleRef Triangulation::entry_angle_ccw(const SlotRef& s) const {
  const Piece& p = pieces.at(s.piece);
  if (p.kind == Piece::Kind::triangle) return {s.piece, (s.pos + 1) % 3};
  return {s.piece, 0};
}

namespace {

std::optional<AngleRef> cross_ray(const Triangulation& t, const AngleRef& a, bool clockwise) {
  EdgeRef e = clockwise ? t.cw_ray(a) : t.ccw_ray(a);
  if (e.is_boundary()) return std::nullopt;
  const Piece& p = t.pieces.at(a.piece);
  SlotRef ours{a.piece, 0};
  if (p.kind == Piece::Kind::triangle)
    ours.pos = (a.corner + (clockwise ? 2 : 1)) % 3;
  auto ss = t.slots(e);
  require(ss.size() == 2, "edge does not have two sides");
  SlotRef other;
  if (ss[0] == ours) {
    other = ss[1];
  } else {
    require(ss[1] == ours, "angle ray slot not found");
    other = ss[0];
  }
  return clockwise ? t.entry_angle_cw(other) : t.entry_angle_ccw(other);
}

}  // namespace

std::optional<AngleRef> Triangulation::successor(const AngleRef& a) const {
  return cross_ray(*this, a, true);
}

std::optional<AngleRef> Triangulation::predecessor(const AngleRef& a) const {
  return cross_ray(*this, a, false);
}

// ---------------------------------------------------------------------------
// Triangulation: canonical key
// ---------------------------------------------------------------------------

namespace {

Piece rotated(const Piece& p, int j) {
  Piece r = p;
  for (int k = 0; k < 3; ++k) {
    r.edges[k] = p.edges[(j + k) % 3];
    r.corners[k] = p.corners[(j + k) % 3];
  }
  return r;
}

char tag_letter(Tag t) { return t == Tag::notched ? 'n' : 'p'; }

}  // namespace

std::string Triangulation::exact_key() const {
  std::map<int, std::array<int, 2>> loop_pairs;
  for (const Piece& p : pieces)
    if (p.kind == Piece::Kind::monogon) loop_pairs[p.loop] = p.pair;

  auto edge_token = [&](const EdgeRef& e) -> std::string {
    if (e.is_boundary()) return "b(" + e.boundary + ")";
    auto it = loop_pairs.find(e.id);
    if (it != loop_pairs.end())
      return "L(" + std::to_string(it->second[0]) + "," + std::to_string(it->second[1]) + ")";
    return "a" + std::to_string(e.id);
  };

  std::ostringstream key;
  key << "arcs:";
  for (const Arc& a : arcs) {
    std::string t0 = a.ends[0] + "/" + tag_letter(a.tags[0]);
    std::string t1 = a.ends[1] + "/" + tag_letter(a.tags[1]);
    if (t1 < t0) std::swap(t0, t1);
    key << "A" << a.id << "{" << t0 << "," << t1 << "}";
  }
  std::vector<std::string> piece_tokens;
  for (const Piece& p : pieces) {
    if (p.kind == Piece::Kind::monogon) {
      piece_tokens.push_back("M[" + p.base + ";" + p.puncture + ";" +
                             std::to_string(p.pair[0]) + "," + std::to_string(p.pair[1]) + "]");
      continue;
    }
    std::string best;
    for (int j = 0; j < 3; ++j) {
      Piece r = rotated(p, j);
      std::ostringstream os;
      os << "T[";
      for (int k = 0; k < 3; ++k)
        os << edge_token(r.edges[k]) << "|" << r.corners[k] << (k < 2 ? ";" : "]");
      if (best.empty() || os.str() < best) best = os.str();
    }
    piece_tokens.push_back(best);
  }
  std::sort(piece_tokens.begin(), piece_tokens.end());
  key << " pieces:";
  for (const auto& s : piece_tokens) key << s;
  key << " sigma:{";
  bool first = true;
  for (const auto& s : sigma) {
    if (!first) key << ",";
    first = false;
    key << s;
  }
  key << "}";
  return key.str();
}

// ---------------------------------------------------------------------------
// Triangulation: validation
// ---------------------------------------------------------------------------

void Triangulation::validate() const {
  surface.validate();
  const int n = surface.rank();

  require_schema(!points.empty(), "triangulation has no marked points");
  int puncture_count = 0, boundary_count = 0;
  for (const auto& [name, punc] : points) {
    require_schema(!name.empty(), "empty point name");
    (punc ? puncture_count : boundary_count)++;
  }
  require_schema(puncture_count == surface.punctures, "puncture count does not match the surface");
  require_schema(boundary_count == surface.boundary_points(),
                 "boundary point count does not match the surface");

  auto is_puncture = [&](const std::string& p) {
    auto it = points.find(p);
    require_schema(it != points.end(), "unknown marked point '" + p + "'");
    return it->second;
  };

  require_schema(static_cast<int>(arcs.size()) == n, "arc count does not match the surface");
  for (int i = 0; i < n; ++i) {
    const Arc& a = arcs[i];
    require_schema(a.id == i + 1, "arc ids must be exactly 1..n in order");
    for (int k = 0; k < 2; ++k)
      if (!is_puncture(a.ends[k]))
        require_schema(a.tags[k] == Tag::plain, "tags at boundary points must be plain");
  }

  // Monogons and their conjugate pairs.
  std::set<int> loop_ids;
  std::map<int, int> pair_member_of;  // arc id -> monogon piece index
  std::set<std::string> enclosed;
  int n_tri = 0, n_mono = 0;
  for (int pi = 0; pi < static_cast<int>(pieces.size()); ++pi) {
    const Piece& p = pieces[pi];
    if (p.kind == Piece::Kind::triangle) {
      ++n_tri;
      continue;
    }
    ++n_mono;
    require_schema(p.loop > n, "loop ids must lie above all arc ids");
    require_schema(loop_ids.insert(p.loop).second, "duplicate loop id");
    require_schema(points.count(p.base) > 0, "monogon base is not a marked point");
    require_schema(is_puncture(p.puncture), "a monogon must enclose a puncture");
    require_schema(p.base != p.puncture, "monogon base cannot be its enclosed puncture");
    require_schema(enclosed.insert(p.puncture).second, "puncture enclosed by two monogons");
    require_schema(p.pair[0] != p.pair[1], "a conjugate pair needs two distinct arcs");
    for (int k = 0; k < 2; ++k) {
      const int id = p.pair[k];
      require_schema(id >= 1 && id <= n, "conjugate pair member is not an arc");
      require_schema(pair_member_of.emplace(id, pi).second, "arc belongs to two conjugate pairs");
      const Arc& a = arc(id);
      const bool fwd = a.ends[0] == p.base && a.ends[1] == p.puncture;
      const bool rev = a.ends[0] == p.puncture && a.ends[1] == p.base;
      require_schema(fwd || rev, "conjugate pair members join the base to the puncture");
      const Tag at_base = fwd ? a.tags[0] : a.tags[1];
      const Tag at_punc = fwd ? a.tags[1] : a.tags[0];
      require_schema(at_base == Tag::plain, "conjugate pair tags must be plain at the base");
      if (k == 0)
        require_schema(at_punc == Tag::plain, "first pair member must be plain everywhere");
      else
        require_schema(at_punc == Tag::notched, "second pair member must be notched at the puncture");
    }
  }
  require_schema(n_tri + n_mono > 0, "triangulation has no pieces");

  for (const Arc& a : arcs)
    if (!pair_member_of.count(a.id)) {
      require_schema(a.tags[0] == Tag::plain && a.tags[1] == Tag::plain,
                     "a notched arc must be the second member of a conjugate pair");
      for (const auto& e : a.ends)
        require_schema(!enclosed.count(e), "enclosed punctures touch only their conjugate pair");
    }

  std::set<std::string> bsegs(boundary_segments.begin(), boundary_segments.end());
  require_schema(bsegs.size() == boundary_segments.size(), "duplicate boundary segment name");
  for (const auto& s : bsegs) require_schema(!s.empty(), "empty boundary segment name");

  // Slot accounting and per-piece sanity.
  std::map<int, int> edge_slots;          // arc or loop id -> triangle slots
  std::map<std::string, int> bseg_slots;  // boundary name -> triangle slots
  for (const Piece& p : pieces) {
    if (p.kind != Piece::Kind::triangle) continue;
    for (int k = 0; k < 3; ++k) {
      for (int k2 = k + 1; k2 < 3; ++k2)
        require_schema(!(p.edges[k] == p.edges[k2]), "triangle edges must be pairwise distinct");
      const EdgeRef& e = p.edges[k];
      if (e.is_boundary()) {
        require_schema(bsegs.count(e.boundary) > 0, "unknown boundary segment");
        ++bseg_slots[e.boundary];
      } else {
        const bool looped = loop_ids.count(e.id) > 0;
        require_schema(looped || (e.id >= 1 && e.id <= n),
                       "triangle edge is not an arc, loop, or boundary segment");
        if (!looped)
          require_schema(!pair_member_of.count(e.id),
                         "conjugate pair members stay inside their monogon");
        ++edge_slots[e.id];
      }
    }
    for (int k = 0; k < 3; ++k) {
      require_schema(points.count(p.corners[k]) > 0, "triangle corner is not a marked point");
      require_schema(!enclosed.count(p.corners[k]), "triangle corner at an enclosed puncture");
    }
  }
  for (const Piece& p : pieces)
    if (p.kind == Piece::Kind::monogon)
      require_schema(!enclosed.count(p.base), "monogon based at an enclosed puncture");
  for (const Arc& a : arcs) {
    const int want = pair_member_of.count(a.id) ? 0 : 2;
    const auto it = edge_slots.find(a.id);
    const int got = it == edge_slots.end() ? 0 : it->second;
    require_schema(got == want, want == 2 ? "every arc must border exactly two triangle sides"
                                          : "conjugate pair members stay inside their monogon");
  }
  for (int lid : loop_ids) {
    const auto it = edge_slots.find(lid);
    require_schema(it != edge_slots.end() && it->second == 1,
                   "every loop bounds its monogon and exactly one triangle side");
  }
  for (const auto& s : bsegs) {
    const auto it = bseg_slots.find(s);
    require_schema(it != bseg_slots.end() && it->second == 1,
                   "every boundary segment borders exactly one triangle");
  }

  // Corner adjacency and traversal directions. Edge k of a triangle runs
  // counterclockwise from corners[k+1] to corners[k+2].
  std::map<int, std::vector<std::pair<std::string, std::string>>> traversals;
  std::map<std::string, std::pair<std::string, std::string>> bseg_dir;
  for (const Piece& p : pieces) {
    if (p.kind != Piece::Kind::triangle) continue;
    for (int k = 0; k < 3; ++k) {
      const EdgeRef& e = p.edges[k];
      const std::string& from = p.corners[(k + 1) % 3];
      const std::string& to = p.corners[(k + 2) % 3];
      if (e.is_boundary()) {
        require_schema(!is_puncture(from) && !is_puncture(to),
                       "boundary segments touch only boundary points");
        bseg_dir[e.boundary] = {from, to};
      } else if (loop_ids.count(e.id)) {
        const Piece& m = pieces[monogon_of_loop(e.id)];
        require_schema(from == m.base && to == m.base,
                       "corners along a loop must sit at the monogon base");
      } else {
        const Arc& a = arc(e.id);
        const bool match = (a.ends[0] == from && a.ends[1] == to) ||
                           (a.ends[0] == to && a.ends[1] == from);
        require_schema(match, "triangle corners must match the endpoints of adjacent arcs");
        traversals[e.id].push_back({from, to});
      }
    }
  }
  for (const auto& [id, trs] : traversals) {
    if (trs.size() != 2) continue;
    const Arc& a = arc(id);
    if (a.ends[0] == a.ends[1]) continue;  // direction not visible from names
    require_schema(trs[0].first == trs[1].second && trs[0].second == trs[1].first,
                   "the two sides of an arc must traverse it in opposite directions");
  }

  // Boundary segments chain into the declared boundary components.
  std::map<std::string, int> outd, ind;
  std::map<std::string, std::string> next_pt;
  for (const auto& [name, dir] : bseg_dir) {
    ++outd[dir.first];
    ++ind[dir.second];
    next_pt[dir.first] = dir.second;
  }
  for (const auto& [pt, punc] : points) {
    if (punc) {
      require_schema(!outd.count(pt) && !ind.count(pt), "punctures cannot lie on the boundary");
    } else {
      require_schema(outd.count(pt) && outd.at(pt) == 1 && ind.count(pt) && ind.at(pt) == 1,
                     "each boundary point needs one incoming and one outgoing boundary segment");
    }
  }
  std::multiset<int> cycle_lengths;
  std::set<std::string> seen_pts;
  for (const auto& [pt, nxt] : next_pt) {
    (void)nxt;
    if (seen_pts.count(pt)) continue;
    int len = 0;
    std::string cur = pt;
    do {
      seen_pts.insert(cur);
      cur = next_pt.at(cur);
      ++len;
    } while (cur != pt);
    cycle_lengths.insert(len);
  }
  const std::multiset<int> want_cycles(surface.boundary.begin(), surface.boundary.end());
  require_schema(cycle_lengths == want_cycles,
                 "boundary segments do not chain into the declared boundary components");

  // Euler characteristic.
  const int V = static_cast<int>(points.size());
  const int E = n + static_cast<int>(loop_ids.size()) + static_cast<int>(bsegs.size());
  const int F = n_tri + 2 * n_mono;
  require_schema(V - E + F == 2 - 2 * surface.genus - surface.boundary_components(),
                 "piece counts violate the Euler characteristic");

  // Every marked point is used.
  std::set<std::string> used;
  for (const Arc& a : arcs) {
    used.insert(a.ends[0]);
    used.insert(a.ends[1]);
  }
  for (const Piece& p : pieces) {
    if (p.kind == Piece::Kind::triangle)
      for (const auto& c : p.corners) used.insert(c);
    else {
      used.insert(p.base);
      used.insert(p.puncture);
    }
  }
  for (const auto& [pt, punc] : points) {
    (void)punc;
    require_schema(used.count(pt) > 0, "marked point not used by the triangulation");
  }

  for (const auto& s : sigma) {
    require_schema(is_puncture(s), "sigma may only contain punctures");
    require_schema(!enclosed.count(s), "sigma may not contain enclosed punctures");
  }
}

// ---------------------------------------------------------------------------
// Quiver of a triangulation
// ---------------------------------------------------------------------------

Quiver build_quiver(const Triangulation& t) {
  const int n = t.rank();
  std::map<int, std::array<int, 2>> loop_pairs;
  for (const Piece& p : t.pieces)
    if (p.kind == Piece::Kind::monogon) loop_pairs[p.loop] = p.pair;
  auto members = [&](const EdgeRef& e) -> std::vector<int> {
    if (e.is_boundary()) return {};
    auto it = loop_pairs.find(e.id);
    if (it != loop_pairs.end()) return {it->second[0], it->second[1]};
    return {e.id};
  };
  std::map<std::pair<int, int>, int> raw;
  for (const Piece& p : t.pieces) {
    if (p.kind != Piece::Kind::triangle) continue;
    for (int k = 0; k < 3; ++k)
      for (int x : members(p.edges[k]))
        for (int y : members(p.edges[(k + 1) % 3])) {
          require(x != y, "triangulation would give a quiver loop");
          ++raw[{x, y}];
        }
  }
  Quiver q = Quiver::all_mutable(n);
  for (const auto& [st, m] : raw) {
    const auto rev_it = raw.find({st.second, st.first});
    const int rev = rev_it == raw.end() ? 0 : rev_it->second;
    if (st.first > st.second && rev > 0) continue;  // handled from the other side
    const int net = m - rev;
    if (net > 0)
      q.add_arrow(st.first, st.second, net);
    else if (net < 0)
      q.add_arrow(st.second, st.first, -net);
  }
  q.validate();
  return q;
}

// ---------------------------------------------------------------------------
// Flips
// ---------------------------------------------------------------------------

namespace {

Arc& arc_ref(Triangulation& t, int id) {
  for (Arc& a : t.arcs)
    if (a.id == id) return a;
  throw SchemaError("unknown arc id " + std::to_string(id));
}

// Rewrite both pair arcs' tags from their roles: pair[0] plain everywhere,
// pair[1] notched exactly at the enclosed puncture.
void set_pair_tags(Triangulation& t, const Piece& m) {
  for (int k = 0; k < 2; ++k) {
    Arc& a = arc_ref(t, m.pair[k]);
    a.tags = {Tag::plain, Tag::plain};
    if (k == 1) {
      require(a.ends[0] == m.puncture || a.ends[1] == m.puncture,
              "pair member does not reach the enclosed puncture");
      a.tags[a.ends[0] == m.puncture ? 0 : 1] = Tag::notched;
    }
  }
}

int fresh_loop_id(const Triangulation& t) {
  int mx = t.rank();
  for (const Piece& p : t.pieces)
    if (p.kind == Piece::Kind::monogon) mx = std::max(mx, p.loop);
  return mx + 1;
}

void toggle(std::set<std::string>& s, const std::string& x) {
  if (!s.erase(x)) s.insert(x);
}

EdgeRef arc_edge(int id) { return EdgeRef{id, ""}; }

Piece make_triangle(std::array<EdgeRef, 3> e, std::array<std::string, 3> c) {
  Piece p;
  p.kind = Piece::Kind::triangle;
  p.edges = e;
  p.corners = c;
  return p;
}

void replace_pieces(Triangulation& t, int i1, int i2, std::vector<Piece> with) {
  std::vector<Piece> np;
  for (int i = 0; i < static_cast<int>(t.pieces.size()); ++i)
    if (i != i1 && i != i2) np.push_back(t.pieces[i]);
  for (Piece& p : with) np.push_back(std::move(p));
  t.pieces = std::move(np);
}

// Flip of a conjugate-pair member: the monogon opens into two triangles
// spanning the loop's outer triangle.
void flip_pair_member(Triangulation& r, int mono, int k) {
  Piece& M = r.pieces[mono];
  if (M.pair[0] == k) {
    // Flipping the plain member equals flipping the notched member of the
    // triangulation with all tags at the enclosed puncture toggled; record
    // the toggle and swap the roles.
    toggle(r.sigma, M.puncture);
    std::swap(M.pair[0], M.pair[1]);
    set_pair_tags(r, M);
  }
  const int stays = M.pair[0];
  const std::string base = M.base, q = M.puncture;
  SlotRef tri_slot{-1, 0};
  for (const SlotRef& s : r.slots(EdgeRef{M.loop, ""}))
    if (r.pieces[s.piece].kind == Piece::Kind::triangle) tri_slot = s;
  require(tri_slot.piece >= 0, "loop without an outer triangle");
  const Piece delta = rotated(r.pieces[tri_slot.piece], tri_slot.pos);
  const EdgeRef s_e = delta.edges[1], t_e = delta.edges[2];
  const std::string w = delta.corners[0];

  Arc& fa = arc_ref(r, k);
  fa.ends = {q, w};
  fa.tags = {Tag::plain, Tag::plain};
  arc_ref(r, stays).tags = {Tag::plain, Tag::plain};

  replace_pieces(r, mono, tri_slot.piece,
                 {make_triangle({arc_edge(k), t_e, arc_edge(stays)}, {base, q, w}),
                  make_triangle({arc_edge(k), arc_edge(stays), s_e}, {base, w, q})});
}

// Flip of a regular arc: exchange the diagonal of the surrounding
// quadrilateral, or fold into a monogon when two quad sides coincide.
void flip_regular(Triangulation& r, int k) {
  const auto ss = r.slots(arc_edge(k));
  require(ss.size() == 2, "arc without two triangle sides");
  require(ss[0].piece != ss[1].piece, "arc bounding one triangle twice");
  const Piece d1 = rotated(r.pieces[ss[0].piece], ss[0].pos);
  const Piece d2 = rotated(r.pieces[ss[1].piece], ss[1].pos);
  const EdgeRef b = d1.edges[1], c = d1.edges[2], d = d2.edges[1], e = d2.edges[2];
  const std::string A = d1.corners[0], Q = d1.corners[1], P = d1.corners[2], W = d2.corners[0];
  const bool fold_cd = c == d, fold_be = b == e;
  require(!(fold_cd && fold_be), "flip cannot fold on both sides");

  if (!fold_cd && !fold_be) {
    Arc& fa = arc_ref(r, k);
    fa.ends = {A, W};
    fa.tags = {Tag::plain, Tag::plain};
    replace_pieces(r, ss[0].piece, ss[1].piece,
                   {make_triangle({c, d, arc_edge(k)}, {W, A, Q}),
                    make_triangle({b, arc_edge(k), e}, {W, P, A})});
    return;
  }

  const EdgeRef folded = fold_cd ? c : b;
  const std::string enclosed_pt = fold_cd ? Q : P;
  require(folded.id >= 1, "fold side must be an arc");
  require(A == W, "fold corners must coincide");
  require(A != enclosed_pt, "fold cannot enclose its own base");
  require(r.points.at(enclosed_pt), "fold must enclose a puncture");

  Piece M;
  M.kind = Piece::Kind::monogon;
  M.loop = fresh_loop_id(r);
  M.base = A;
  M.puncture = enclosed_pt;
  M.pair = {folded.id, k};
  Arc& fa = arc_ref(r, k);
  fa.ends = {A, enclosed_pt};
  if (r.sigma.erase(enclosed_pt)) std::swap(M.pair[0], M.pair[1]);
  set_pair_tags(r, M);

  const Piece outer = fold_cd ? make_triangle({EdgeRef{M.loop, ""}, e, b}, {P, A, A})
                              : make_triangle({EdgeRef{M.loop, ""}, c, d}, {Q, W, W});
  replace_pieces(r, ss[0].piece, ss[1].piece, {M, outer});
}

}  // namespace

Triangulation flip(const Triangulation& t, int arc_id) {
  require_schema(arc_id >= 1 && arc_id <= t.rank(), "flip index out of range");
  Triangulation r = t;
  int mono = -1;
  for (int i = 0; i < static_cast<int>(r.pieces.size()); ++i) {
    const Piece& p = r.pieces[i];
    if (p.kind == Piece::Kind::monogon && (p.pair[0] == arc_id || p.pair[1] == arc_id)) {
      mono = i;
      break;
    }
  }
  if (mono >= 0)
    flip_pair_member(r, mono, arc_id);
  else
    flip_regular(r, arc_id);
  r.validate();
  return r;
}

ClosureResult flip_closure(const Triangulation& t, const ClosureOptions& opt) {
  ClosureResult res;
  std::map<std::string, int> seen;
  std::deque<std::pair<int, int>> queue;  // (index into reached, depth)
  res.reached.push_back(t);
  seen[t.exact_key()] = 0;
  res.depth_counts = {1};
  queue.push_back({0, 0});
  bool capped = false, cut = false;
  while (!queue.empty() && !capped) {
    const auto [idx, dep] = queue.front();
    queue.pop_front();
    if (opt.max_depth >= 0 && dep >= opt.max_depth) {
      cut = true;
      continue;
    }
    const Triangulation cur = res.reached[idx];
    for (int k = 1; k <= cur.rank(); ++k) {
      Triangulation f = flip(cur, k);
      std::string key = f.exact_key();
      if (seen.count(key)) continue;
      if (res.reached.size() >= opt.cap) {
        capped = true;
        break;
      }
      seen[key] = static_cast<int>(res.reached.size());
      res.reached.push_back(std::move(f));
      if (static_cast<int>(res.depth_counts.size()) <= dep + 1) res.depth_counts.resize(dep + 2, 0);
      ++res.depth_counts[dep + 1];
      queue.push_back({static_cast<int>(res.reached.size()) - 1, dep + 1});
    }
  }
  res.closed = !capped && !cut;
  return res;
}

// ---------------------------------------------------------------------------
// Puncture graph
// ---------------------------------------------------------------------------

TaggedGraph graph_GT(const Triangulation& t) {
  TaggedGraph g;
  std::set<std::string> vs;
  for (int id : t.omega_ids()) {
    const auto ends = t.omega_ends(id);
    const bool p0 = t.points.at(ends[0]), p1 = t.points.at(ends[1]);
    if (p0) vs.insert(ends[0]);
    if (p1) vs.insert(ends[1]);
    if (p0 && p1) g.edges.push_back({id, ends[0], ends[1]});
  }
  g.vertices.assign(vs.begin(), vs.end());
  return g;
}

bool check_condition(const TaggedGraph& g) {
  const int nv = static_cast<int>(g.vertices.size());
  std::map<std::string, int> vi;
  for (int i = 0; i < nv; ++i) vi[g.vertices[i]] = i;

  std::vector<int> parent(nv);
  for (int i = 0; i < nv; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::vector<std::pair<int, int>>> adj(nv);  // (neighbor, edge idx)
  std::vector<bool> comp_loop(nv, false);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    const int u = vi.at(g.edges[e].p), v = vi.at(g.edges[e].q);
    parent[find(u)] = find(v);
    if (u == v)
      comp_loop[u] = true;
    else {
      adj[u].push_back({v, e});
      adj[v].push_back({u, e});
    }
  }

  std::map<int, int> comp_v, comp_e;
  std::map<int, bool> comp_odd;
  for (int i = 0; i < nv; ++i) ++comp_v[find(i)];
  for (const auto& e : g.edges) ++comp_e[find(vi.at(e.p))];
  for (int i = 0; i < nv; ++i)
    if (comp_loop[i]) comp_odd[find(i)] = true;

  // 2-coloring over non-loop edges; an odd cycle marks the component.
  std::vector<int> color(nv, -1);
  for (int s = 0; s < nv; ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::deque<int> bfs{s};
    while (!bfs.empty()) {
      const int u = bfs.front();
      bfs.pop_front();
      for (const auto& [v, e] : adj[u]) {
        (void)e;
        if (color[v] == -1) {
          color[v] = color[u] ^ 1;
          bfs.push_back(v);
        } else if (color[v] == color[u]) {
          comp_odd[find(u)] = true;
        }
      }
    }
  }

  for (const auto& [root, vcount] : comp_v) {
    const int ecount = comp_e.count(root) ? comp_e.at(root) : 0;
    const bool odd = comp_odd.count(root) ? comp_odd.at(root) : false;
    if (ecount == vcount - 1) continue;        // tree
    if (ecount == vcount && odd) continue;     // exactly one cycle, odd
    return false;
  }
  return true;
}

NotchSolution solve_notch_counts(const TaggedGraph& g, const std::map<std::string, int>& counts) {
  NotchSolution out;
  out.status = NotchSolution::Status::unique;
  const std::set<std::string> vset(g.vertices.begin(), g.vertices.end());
  std::map<std::string, long long> c;
  for (const auto& [k, v] : counts) {
    require_schema(vset.count(k) > 0, "count given for a point outside the puncture graph");
    require_schema(v >= 0, "counts must be nonnegative");
    c[k] = v;
  }
  for (const auto& v : g.vertices) c.emplace(v, 0);

  const int ne = static_cast<int>(g.edges.size());
  std::vector<bool> active(ne, true);
  std::map<std::string, std::vector<int>> adj;
  for (const auto& v : g.vertices) adj[v];
  for (int i = 0; i < ne; ++i) {
    adj[g.edges[i].p].push_back(i);
    if (!g.edges[i].is_loop()) adj[g.edges[i].q].push_back(i);
  }
  std::map<int, long long> m;

  auto fail = [&] {
    out.status = NotchSolution::Status::no_solution;
    out.multiplicities.clear();
    return out;
  };

  // Strip leaves, isolated vertices, and single loops.
  std::set<std::string> live(g.vertices.begin(), g.vertices.end());
  bool progress = true;
  while (progress) {
    progress = false;
    for (auto it = live.begin(); it != live.end();) {
      const std::string v = *it;
      std::vector<int> inc;
      for (int e : adj[v])
        if (active[e]) inc.push_back(e);
      if (inc.empty()) {
        if (c[v] != 0) return fail();
        it = live.erase(it);
        progress = true;
        continue;
      }
      if (inc.size() == 1) {
        const TaggedGraph::Edge& E = g.edges[inc[0]];
        if (E.is_loop()) {
          if (c[v] % 2 != 0) return fail();
          m[E.id] = c[v] / 2;
        } else {
          m[E.id] = c[v];
          const std::string& u = E.p == v ? E.q : E.p;
          c[u] -= c[v];
          if (c[u] < 0) return fail();
        }
        c[v] = 0;
        active[inc[0]] = false;
        it = live.erase(it);
        progress = true;
        continue;
      }
      ++it;
    }
  }

  // Residual components: every live vertex has at least two active slots.
  std::set<int> done_edges;
  bool ambiguous = false;
  for (const std::string& start : std::vector<std::string>(live.begin(), live.end())) {
    if (!live.count(start)) continue;
    // Gather this component.
    std::set<std::string> cv;
    std::set<int> ce;
    std::deque<std::string> bfs{start};
    cv.insert(start);
    while (!bfs.empty()) {
      const std::string u = bfs.front();
      bfs.pop_front();
      for (int e : adj[u]) {
        if (!active[e]) continue;
        ce.insert(e);
        for (const std::string& w : {g.edges[e].p, g.edges[e].q})
          if (cv.insert(w).second) bfs.push_back(w);
      }
    }
    for (const auto& v : cv) live.erase(v);

    bool pure_cycle = true;
    for (const auto& v : cv) {
      int deg = 0;
      bool has_loop = false;
      for (int e : adj[v])
        if (active[e] && ce.count(e)) {
          ++deg;
          if (g.edges[e].is_loop()) has_loop = true;
        }
      if (deg != 2 || has_loop) pure_cycle = false;
    }

    if (pure_cycle) {
      // Walk the cycle and solve the alternating system.
      const std::string v0 = *cv.begin();
      std::vector<int> ceo;
      std::vector<std::string> cvo;
      std::string cur = v0;
      int prev = -1;
      do {
        cvo.push_back(cur);
        int chosen = -1;
        for (int e : adj[cur])
          if (active[e] && ce.count(e) && e != prev) {
            chosen = e;
            break;
          }
        require(chosen >= 0, "cycle walk failed");
        ceo.push_back(chosen);
        cur = g.edges[chosen].p == cur ? g.edges[chosen].q : g.edges[chosen].p;
        prev = chosen;
      } while (cur != v0);
      const int L = static_cast<int>(ceo.size());
      std::vector<long long> a(L);
      std::vector<int> s(L);
      a[0] = 0;
      s[0] = 1;
      for (int i = 1; i < L; ++i) {
        a[i] = c[cvo[i]] - a[i - 1];
        s[i] = -s[i - 1];
      }
      if (L % 2 == 1) {
        const long long twot = c[v0] - a[L - 1];
        if (twot % 2 != 0) return fail();
        const long long t = twot / 2;
        for (int i = 0; i < L; ++i) {
          const long long mi = a[i] + s[i] * t;
          if (mi < 0) return fail();
          m[g.edges[ceo[i]].id] = mi;
        }
      } else {
        if (a[L - 1] != c[v0]) return fail();
        long long lo = 0, hi = LLONG_MAX;
        for (int i = 0; i < L; ++i) {
          if (s[i] == 1)
            lo = std::max(lo, -a[i]);
          else
            hi = std::min(hi, a[i]);
        }
        if (lo > hi) return fail();
        if (lo < hi) {
          ambiguous = true;
        } else {
          for (int i = 0; i < L; ++i) m[g.edges[ceo[i]].id] = a[i] + s[i] * lo;
        }
      }
      for (int e : ceo) active[e] = false;
      continue;
    }

    // General residual component: bounded exhaustive search, stopping at the
    // second solution.
    const std::vector<int> edges(ce.begin(), ce.end());
    std::map<std::string, long long> res;
    for (const auto& v : cv) res[v] = c[v];
    long long budget = 1000000;
    int found = 0;
    std::map<int, long long> sol, trial;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (found >= 2) return;
      require(budget-- > 0, "notch count search budget exceeded");
      if (i == edges.size()) {
        for (const auto& [v, rc] : res)
          if (rc != 0) return;
        if (++found == 1) sol = trial;
        return;
      }
      const TaggedGraph::Edge& E = g.edges[edges[i]];
      const long long cap =
          E.is_loop() ? res[E.p] / 2 : std::min(res[E.p], res[E.q]);
      for (long long val = 0; val <= cap && found < 2; ++val) {
        if (E.is_loop())
          res[E.p] -= 2 * val;
        else {
          res[E.p] -= val;
          res[E.q] -= val;
        }
        trial[edges[i]] = val;
        if (res[E.p] >= 0 && (E.is_loop() || res[E.q] >= 0)) rec(i + 1);
        if (E.is_loop())
          res[E.p] += 2 * val;
        else {
          res[E.p] += val;
          res[E.q] += val;
        }
      }
      trial.erase(edges[i]);
    };
    rec(0);
    if (found == 0) return fail();
    if (found >= 2)
      ambiguous = true;
    else
      for (const auto& [e, val] : sol) m[g.edges[e].id] = val;
    for (int e : edges) active[e] = false;
  }

  if (ambiguous) {
    out.status = NotchSolution::Status::not_unique;
    out.multiplicities.clear();
    return out;
  }
  for (const auto& [id, val] : m) out.multiplicities[id] = static_cast<int>(val);
  return out;
}

std::optional<CollisionWitness> collision_witness(const TaggedGraph& g) {
  const int nv = static_cast<int>(g.vertices.size());
  const int ne = static_cast<int>(g.edges.size());
  if (ne == 0) return std::nullopt;
  std::map<std::string, int> vi;
  for (int i = 0; i < nv; ++i) vi[g.vertices[i]] = i;

  using Rat = mp::cpp_rational;
  std::vector<std::vector<Rat>> A(nv, std::vector<Rat>(ne, 0));
  for (int e = 0; e < ne; ++e) {
    A[vi.at(g.edges[e].p)][e] += 1;
    A[vi.at(g.edges[e].q)][e] += 1;
  }

  std::vector<int> pivot_col;
  int r = 0;
  for (int col = 0; col < ne && r < nv; ++col) {
    int pr = -1;
    for (int i = r; i < nv; ++i)
      if (A[i][col] != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(A[r], A[pr]);
    const Rat inv = A[r][col];
    for (int j = col; j < ne; ++j) A[r][j] /= inv;
    for (int i = 0; i < nv; ++i) {
      if (i == r || A[i][col] == 0) continue;
      const Rat f = A[i][col];
      for (int j = col; j < ne; ++j) A[i][j] -= f * A[r][j];
    }
    pivot_col.push_back(col);
    ++r;
  }
  const std::set<int> pivots(pivot_col.begin(), pivot_col.end());
  int free_col = -1;
  for (int j = 0; j < ne; ++j)
    if (!pivots.count(j)) {
      free_col = j;
      break;
    }
  if (free_col < 0) return std::nullopt;

  std::vector<Rat> z(ne, 0);
  z[free_col] = 1;
  for (int i = 0; i < static_cast<int>(pivot_col.size()); ++i) z[pivot_col[i]] = -A[i][free_col];

  mp::cpp_int scale = 1;
  for (const Rat& x : z) scale = mp::lcm(scale, mp::cpp_int(mp::denominator(x)));
  std::vector<mp::cpp_int> zi(ne);
  mp::cpp_int common = 0;
  for (int j = 0; j < ne; ++j) {
    zi[j] = mp::cpp_int(mp::numerator(z[j])) * (scale / mp::cpp_int(mp::denominator(z[j])));
    common = mp::gcd(common, mp::abs(zi[j]));
  }
  require(common > 0, "kernel vector vanished");

  CollisionWitness w;
  for (int j = 0; j < ne; ++j) {
    const long long v = (zi[j] / common).convert_to<long long>();
    if (v > 0)
      w.first[g.edges[j].id] = static_cast<int>(v);
    else if (v < 0)
      w.second[g.edges[j].id] = static_cast<int>(-v);
  }
  return w;
}

}  // namespace workbench
