#include "workbench/modification.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

#include "workbench/errors.hpp"

namespace workbench {

namespace {

int get(const SegCounts& c, const Segment& s) {
  const auto it = c.find(s);
  return it == c.end() ? 0 : it->second;
}

void add(SegCounts& c, const Segment& s, int delta) {
  if (delta == 0) return;
  const int next = get(c, s) + delta;
  require(next >= 0, "a segment multiplicity would become negative");
  if (next == 0)
    c.erase(s);
  else
    c[s] = next;
}

bool is_triangle(const Triangulation& t, int piece) {
  return t.pieces.at(piece).kind == Piece::Kind::triangle;
}

// Row layout for triangle moves:
//   (e_c, e_{c+1}, e_{c+2}, h_c, h_{c+1}, h_{c+2}, v_c, v_{c+1}, v_{c+2}, y)
// where c is the angle's corner and indices are mod 3.
constexpr int kTriPhiDelta[7][10] = {
    {0, -1, -1, -1, 0, 0, 0, 0, 0, 0},   // case 1
    {0, -1, 0, -1, +1, 0, -1, 0, 0, 0},  // case 2
    {0, -1, 0, -1, 0, 0, 0, 0, +1, 0},   // case 3
    {0, 0, -1, -1, 0, +1, -1, 0, 0, 0},  // case 4
    {0, 0, -1, -1, 0, 0, 0, +1, 0, 0},   // case 5
    {0, 0, 0, -1, +1, +1, -2, 0, 0, 0},  // case 6
    {0, 0, 0, -1, 0, 0, -1, 0, 0, +1},   // case 7
};

// Row layout for monogon moves: (f, fn, h, i, in).
constexpr int kMonoPhiDelta[2][5] = {
    {-1, 0, -1, +2, 0},  // case 1
    {0, -1, -1, 0, +2},  // case 2
};

void apply_tri_delta(SegCounts& c, int corner, const int (&row)[10], int sign) {
  for (int k = 0; k < 3; ++k) {
    add(c, tri_e((corner + k) % 3), sign * row[k]);
    add(c, tri_h((corner + k) % 3), sign * row[3 + k]);
    add(c, tri_v((corner + k) % 3), sign * row[6 + k]);
  }
  add(c, tri_y(), sign * row[9]);
}

void apply_mono_delta(SegCounts& c, const int (&row)[5], int sign) {
  add(c, mono_f(), sign * row[0]);
  add(c, mono_fn(), sign * row[1]);
  add(c, mono_h(), sign * row[2]);
  add(c, mono_i(), sign * row[3]);
  add(c, mono_in(), sign * row[4]);
}

// All positive-multiplicity unordered pairs {s,t} (including s == t when the
// multiplicity is at least two) with pair_int(s,t) > 0.
template <typename Fn>
bool for_each_crossing(const SegCounts& c, Fn&& fn) {
  for (auto i = c.begin(); i != c.end(); ++i) {
    for (auto j = i; j != c.end(); ++j) {
      if (i == j && i->second < 2) continue;
      if (pair_int(i->first, j->first) == 0) continue;
      if (!fn(i->first, j->first)) return false;
    }
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

State empty_state(const Triangulation& t) {
  State s;
  s.pieces.resize(t.pieces.size());
  return s;
}

std::string state_text(const Triangulation& t, const State& s) {
  std::ostringstream out;
  for (std::size_t i = 0; i < t.pieces.size(); ++i) {
    const Piece& p = t.pieces[i];
    out << "p" << i;
    if (p.kind == Piece::Kind::triangle) {
      out << "[tri ";
      for (int k = 0; k < 3; ++k) {
        if (k) out << ",";
        if (p.edges[k].is_boundary())
          out << p.edges[k].boundary;
        else
          out << p.edges[k].id;
      }
      out << "]";
    } else {
      out << "[mono " << p.loop << "]";
    }
    out << ": " << counts_text(i < s.pieces.size() ? s.pieces[i] : SegCounts{}) << "\n";
  }
  return out.str();
}

void validate_state(const Triangulation& t, const State& s) {
  require(s.pieces.size() == t.pieces.size(),
          "state does not have one multiset per piece");
  for (std::size_t i = 0; i < s.pieces.size(); ++i)
    validate_counts(s.pieces[i], t.pieces[i].kind == Piece::Kind::monogon);
}

// ---------------------------------------------------------------------------
// Angles and their segments
// ---------------------------------------------------------------------------

Segment h_of(const Triangulation& t, const AngleRef& a) {
  return is_triangle(t, a.piece) ? tri_h(a.corner) : mono_h();
}

std::vector<AngleRef> angles_at(const Triangulation& t, const std::string& point) {
  std::vector<AngleRef> out;
  for (const AngleRef& a : t.all_angles())
    if (t.point_of(a) == point) out.push_back(a);
  return out;
}

// ---------------------------------------------------------------------------
// Single-angle moves
// ---------------------------------------------------------------------------

std::optional<int> classify_phi(const Triangulation& t, const State& s,
                                const AngleRef& a) {
  const SegCounts& c = s.pieces.at(a.piece);
  if (!is_triangle(t, a.piece)) {
    if (get(c, mono_h()) == 0) return std::nullopt;
    const int f = get(c, mono_f());
    const int fn = get(c, mono_fn());
    if (f > 0 && fn == 0) return 1;
    if (fn > 0 && f == 0) return 2;
    return std::nullopt;
  }
  const int corner = a.corner;
  if (get(c, tri_h(corner)) == 0) return std::nullopt;
  const int el = get(c, tri_e((corner + 1) % 3));
  const int er = get(c, tri_e((corner + 2) % 3));
  const int va = get(c, tri_v(corner));
  if (el + er + va == 0) return std::nullopt;
  if (el > 0 && er > 0) return 1;
  if (el > 0 && va > 0) return 2;
  if (el > 0) return 3;
  if (er > 0 && va > 0) return 4;
  if (er > 0) return 5;
  if (va >= 2) return 6;
  return 7;
}

std::optional<int> classify_psi(const Triangulation& t, const State& s,
                                const AngleRef& a) {
  const SegCounts& c = s.pieces.at(a.piece);
  if (!is_triangle(t, a.piece)) {
    const int i = get(c, mono_i());
    const int in = get(c, mono_in());
    if (i >= 2 && in == 0) return 1;
    if (in >= 2 && i == 0) return 2;
    return std::nullopt;
  }
  const int corner = a.corner;
  const Segment ha = tri_h(corner);
  const Segment va = tri_v(corner);
  // Every crossing among segments (edge copies exempt) must be {h_a, v_a}.
  const bool clean = for_each_crossing(c, [&](const Segment& x, const Segment& y) {
    if (x.kind == SegKind::e || y.kind == SegKind::e) return true;
    return (x == ha && y == va) || (x == va && y == ha);
  });
  if (!clean) return std::nullopt;
  const int hl = get(c, tri_h((corner + 1) % 3));
  const int hr = get(c, tri_h((corner + 2) % 3));
  const int vl = get(c, tri_v((corner + 1) % 3));
  const int vr = get(c, tri_v((corner + 2) % 3));
  const int y = get(c, tri_y());
  if (hl == 0 && hr == 0 && vl == 0 && vr == 0 && y == 0) return 1;
  if (vr > 0) return 3;
  if (vl > 0) return 5;
  if (y > 0) return 7;
  if (hl > 0 && hr > 0) return 6;
  if (hl > 0) return 2;
  return 4;
}

namespace {

State apply_move(const Triangulation& t, const State& s, const AngleRef& a,
                 bool forward) {
  const std::optional<int> k =
      forward ? classify_phi(t, s, a) : classify_psi(t, s, a);
  require(k.has_value(), forward ? "the forward move does not apply here"
                                 : "the backward move does not apply here");
  State out = s;
  SegCounts& c = out.pieces.at(a.piece);
  const int sign = forward ? +1 : -1;
  if (is_triangle(t, a.piece))
    apply_tri_delta(c, a.corner, kTriPhiDelta[*k - 1], sign);
  else
    apply_mono_delta(c, kMonoPhiDelta[*k - 1], sign);
  return out;
}

}  // namespace

State apply_phi(const Triangulation& t, const State& s, const AngleRef& a) {
  return apply_move(t, s, a, true);
}

State apply_psi(const Triangulation& t, const State& s, const AngleRef& a) {
  return apply_move(t, s, a, false);
}

bool check_star(const Triangulation& t, const State& s, const AngleRef& a) {
  const SegCounts& c = s.pieces.at(a.piece);
  const Segment ha = h_of(t, a);
  if (!is_triangle(t, a.piece)) {
    // Every crossing in the piece must involve h.
    return for_each_crossing(c, [&](const Segment& x, const Segment& y) {
      return x == ha || y == ha;
    });
  }
  const Segment el = tri_e((a.corner + 1) % 3);
  const Segment er = tri_e((a.corner + 2) % 3);
  const Segment va = tri_v(a.corner);
  // Crossings that involve the angle's side edge copies or its corner-to-edge
  // segment must have h as the other element.
  return for_each_crossing(c, [&](const Segment& x, const Segment& y) {
    const bool xs = (x == el || x == er || x == va);
    const bool ys = (y == el || y == er || y == va);
    if (!xs && !ys) return true;
    return (xs && y == ha) || (ys && x == ha);
  });
}

// ---------------------------------------------------------------------------
// Puncture-level composites
// ---------------------------------------------------------------------------

int closed_weight(const Triangulation& t, const State& s, const std::string& p) {
  int m = -1;
  for (const AngleRef& a : angles_at(t, p)) {
    const int h = get(s.pieces.at(a.piece), h_of(t, a));
    if (m < 0 || h < m) m = h;
  }
  return m < 0 ? 0 : m;
}

std::vector<AngleRef> phi_angles(const Triangulation& t, const State& s,
                                 const std::string& p) {
  std::vector<AngleRef> out;
  for (const AngleRef& a : angles_at(t, p))
    if (classify_phi(t, s, a)) out.push_back(a);
  return out;
}

std::vector<AngleRef> min_angles(const Triangulation& t, const State& s,
                                 const std::string& p) {
  std::vector<AngleRef> out;
  const int m = closed_weight(t, s, p);
  for (const AngleRef& a : angles_at(t, p))
    if (get(s.pieces.at(a.piece), h_of(t, a)) == m) out.push_back(a);
  return out;
}

namespace {

// Composite of the single-angle moves over `as`: requires every move to be
// defined on the input, every ordered pair to commute (apply one, the other
// must stay defined and the two orders must agree), and the two sweep orders
// to produce the same result.  Returns nullopt when any of this fails.
std::optional<State> try_compose(const Triangulation& t, const State& s,
                                 const std::vector<AngleRef>& as, bool forward) {
  if (as.empty()) return std::nullopt;
  const auto cls = forward ? classify_phi : classify_psi;
  for (const AngleRef& a : as)
    if (!cls(t, s, a)) return std::nullopt;
  for (std::size_t i = 0; i < as.size(); ++i) {
    for (std::size_t j = i + 1; j < as.size(); ++j) {
      const State si = apply_move(t, s, as[i], forward);
      if (!cls(t, si, as[j])) return std::nullopt;
      const State sij = apply_move(t, si, as[j], forward);
      const State sj = apply_move(t, s, as[j], forward);
      if (!cls(t, sj, as[i])) return std::nullopt;
      if (apply_move(t, sj, as[i], forward) != sij) return std::nullopt;
    }
  }
  State fwd = s;
  for (const AngleRef& a : as) {
    if (!cls(t, fwd, a)) return std::nullopt;
    fwd = apply_move(t, fwd, a, forward);
  }
  State rev = s;
  for (auto it = as.rbegin(); it != as.rend(); ++it) {
    if (!cls(t, rev, *it)) return std::nullopt;
    rev = apply_move(t, rev, *it, forward);
  }
  if (fwd != rev) return std::nullopt;
  return fwd;
}

std::optional<State> try_phi_p(const Triangulation& t, const State& s,
                               const std::string& p) {
  return try_compose(t, s, phi_angles(t, s, p), true);
}

std::optional<State> try_psi_p(const Triangulation& t, const State& s,
                               const std::string& p) {
  return try_compose(t, s, min_angles(t, s, p), false);
}

}  // namespace

bool check_phi_p(const Triangulation& t, const State& s, const std::string& p) {
  return try_phi_p(t, s, p).has_value();
}

bool check_psi_p(const Triangulation& t, const State& s, const std::string& p) {
  return try_psi_p(t, s, p).has_value();
}

bool check_star1_p(const Triangulation& t, const State& s, const std::string& p) {
  const int m = closed_weight(t, s, p);
  for (const AngleRef& a : phi_angles(t, s, p))
    if (get(s.pieces.at(a.piece), h_of(t, a)) != m) return false;
  return true;
}

bool check_star2_p(const Triangulation& t, const State& s, const std::string& p) {
  for (const AngleRef& a : phi_angles(t, s, p))
    if (!check_star(t, s, a)) return false;
  return true;
}

bool check_star_p(const Triangulation& t, const State& s, const std::string& p) {
  return check_star1_p(t, s, p) && check_star2_p(t, s, p);
}

State phi_p(const Triangulation& t, const State& s, const std::string& p) {
  auto r = try_phi_p(t, s, p);
  require(r.has_value(), "the forward move does not apply at " + p);
  return *r;
}

State psi_p(const Triangulation& t, const State& s, const std::string& p) {
  auto r = try_psi_p(t, s, p);
  require(r.has_value(), "the backward move does not apply at " + p);
  return *r;
}

// ---------------------------------------------------------------------------
// Maximal modification
// ---------------------------------------------------------------------------

namespace {

bool counts_compatible(const SegCounts& c) {
  return for_each_crossing(c, [](const Segment&, const Segment&) { return false; });
}

std::optional<AngleRef> first_guarded_angle(const Triangulation& t, const State& s) {
  for (const AngleRef& a : t.all_angles())
    if (classify_phi(t, s, a) && check_star(t, s, a)) return a;
  return std::nullopt;
}

}  // namespace

bool is_a_modifiable(const Triangulation& t, const State& s) {
  for (std::size_t i = 0; i < t.pieces.size(); ++i) {
    bool guarded = false;
    const int corners = t.pieces[i].kind == Piece::Kind::triangle ? 3 : 1;
    for (int c = 0; c < corners && !guarded; ++c) {
      const AngleRef a{static_cast<int>(i), c};
      guarded = classify_phi(t, s, a).has_value() && check_star(t, s, a);
    }
    if (!guarded && !counts_compatible(s.pieces.at(i))) return false;
  }
  return true;
}

State maximal_modification(const Triangulation& t, const State& s) {
  require(is_a_modifiable(t, s), "the state admits no sequence of forward moves "
                                 "ending in a compatible state");
  // Strictly decreasing weight: total multiplicity with both monogon
  // endpoint-to-endpoint kinds counted twice.
  long bound = 1;
  for (const SegCounts& c : s.pieces)
    for (const auto& [seg, m] : c)
      bound += (seg.kind == SegKind::f || seg.kind == SegKind::fn) ? 2L * m : m;
  State cur = s;
  for (long step = 0; step <= bound; ++step) {
    const auto a = first_guarded_angle(t, cur);
    if (!a) {
      for (const SegCounts& c : cur.pieces)
        require(counts_compatible(c), "forward moves stopped at an incompatible state");
      return cur;
    }
    cur = apply_phi(t, cur, *a);
  }
  throw InvariantError("forward moves did not terminate");
}

// ---------------------------------------------------------------------------
// Glueability and metrics
// ---------------------------------------------------------------------------

namespace {

// Edge copy of the shared edge as seen from angle a, on the clockwise (true)
// or counterclockwise (false) ray.
Segment shared_edge_copy(const Triangulation& t, const AngleRef& a, bool cw) {
  if (!is_triangle(t, a.piece)) return mono_e();
  return tri_e((a.corner + (cw ? 2 : 1)) % 3);
}

}  // namespace

bool is_glueable(const Triangulation& t, const State& s) {
  for (const AngleRef& a : t.all_angles()) {
    const auto b = t.successor(a);
    if (!b) continue;
    const Segment ea = shared_edge_copy(t, a, true);
    const Segment eb = shared_edge_copy(t, *b, false);
    const SegCounts& ca = s.pieces.at(a.piece);
    const SegCounts& cb = s.pieces.at(b->piece);
    if (int_with(ea, ca) != int_with(eb, cb)) return false;
    if (get(ca, ea) != get(cb, eb)) return false;
  }
  return true;
}

int int_closed(const Triangulation& t, const State& s, const std::string& p) {
  int total2 = 0;
  for (const AngleRef& a : angles_at(t, p)) {
    const SegCounts& c = s.pieces.at(a.piece);
    const Segment ha = h_of(t, a);
    for (const auto& [seg, m] : c) {
      const int w = pair_int(ha, seg) * m;
      total2 += (seg.kind == SegKind::e) ? w : 2 * w;
    }
  }
  require(total2 % 2 == 0, "odd crossing total for a puncture circle");
  return total2 / 2;
}

int int_omega(const Triangulation& t, const State& s, int omega_id) {
  const auto sl = t.slots(EdgeRef{omega_id, ""});
  require(!sl.empty(), "no slots for the requested curve");
  int total = 0;
  for (const SlotRef& sr : sl) {
    const Segment e = is_triangle(t, sr.piece) ? tri_e(sr.pos) : mono_e();
    total += int_with(e, s.pieces.at(sr.piece));
  }
  require(total % 2 == 0, "sides of an edge disagree on crossings");
  return total / 2;
}

std::map<std::string, PunctureMetrics> metrics(const Triangulation& t,
                                               const State& s, int n) {
  std::map<std::string, PunctureMetrics> out;
  for (const auto& [pt, punc] : t.points) {
    if (!punc || angles_at(t, pt).empty()) continue;
    PunctureMetrics m;
    m.closed_weight = closed_weight(t, s, pt);
    m.int_closed = int_closed(t, s, pt);
    m.d = m.closed_weight - (m.closed_weight > 0 ? n * m.int_closed : 0);
    out[pt] = m;
  }
  return out;
}

int d_metric(const Triangulation& t, const State& s, const std::string& p, int n) {
  const int m = closed_weight(t, s, p);
  return m - (m > 0 ? n * int_closed(t, s, p) : 0);
}

bool is_enclosed(const Triangulation& t, const std::string& p, const State& before,
                 const State& after) {
  require(phi_p(t, before, p) == after,
          "the second state is not the forward image of the first");
  return int_closed(t, after, p) == int_closed(t, before, p) - 1;
}

bool enclosed_in(const Triangulation& t, const State& s, const std::string& p) {
  const auto prev = try_psi_p(t, s, p);
  if (!prev) return false;
  if (!is_glueable(t, *prev)) return false;
  if (!check_star_p(t, *prev, p)) return false;
  const auto fwd = try_phi_p(t, *prev, p);
  if (!fwd || *fwd != s) return false;
  return int_closed(t, s, p) == int_closed(t, *prev, p) - 1;
}

// ---------------------------------------------------------------------------
// Recoverability and reverse search
// ---------------------------------------------------------------------------

bool is_characterized(const Triangulation& t, const State& s) {
  const auto mets = metrics(t, s);
  const TaggedGraph g = graph_GT(t);
  std::map<std::string, int> counts;
  for (const std::string& v : g.vertices) {
    const auto it = mets.find(v);
    const int d = it == mets.end() ? 0 : it->second.d;
    if (d < 0) return false;
    counts[v] = d;
  }
  // Punctures carrying a deficit but not connected by any eligible curve
  // cannot be balanced.
  for (const auto& [pt, m] : mets)
    if (m.d != 0 && !counts.count(pt)) return false;
  TaggedGraph filtered;
  filtered.vertices = g.vertices;
  for (const TaggedGraph::Edge& e : g.edges) {
    const auto mp = mets.find(e.p);
    const auto mq = mets.find(e.q);
    const int wp = mp == mets.end() ? 0 : mp->second.closed_weight;
    const int wq = mq == mets.end() ? 0 : mq->second.closed_weight;
    if (int_omega(t, s, e.id) == wp + wq) filtered.edges.push_back(e);
  }
  return solve_notch_counts(filtered, counts).status !=
         NotchSolution::Status::no_solution;
}

bool is_p_recoverable(const Triangulation& t, const State& s) {
  std::vector<std::string> punctures;
  for (const auto& [pt, punc] : t.points)
    if (punc && !angles_at(t, pt).empty()) punctures.push_back(pt);
  for (const std::string& p : punctures)
    if (!check_star1_p(t, s, p)) return false;
  if (!is_glueable(t, s)) return false;
  for (const std::string& p : punctures)
    if (enclosed_in(t, s, p)) return false;
  return is_characterized(t, s);
}

State recover(const Triangulation& t, const State& s, const RecoverOptions& opts) {
  std::vector<std::string> punctures;
  for (const auto& [pt, punc] : t.points)
    if (punc && !angles_at(t, pt).empty()) punctures.push_back(pt);
  std::set<State> seen{s};
  std::deque<State> queue{s};
  std::vector<State> candidates;
  while (!queue.empty()) {
    const State cur = queue.front();
    queue.pop_front();
    if (is_p_recoverable(t, cur)) candidates.push_back(cur);
    for (const std::string& p : punctures) {
      if (!check_star_p(t, cur, p)) continue;
      const auto prev = try_psi_p(t, cur, p);
      if (!prev || seen.count(*prev)) continue;
      // Only accept predecessors whose forward composite actually returns
      // to the current state under both composite conditions.
      if (!check_star_p(t, *prev, p)) continue;
      const auto fwd = try_phi_p(t, *prev, p);
      if (!fwd || *fwd != cur) continue;
      // Every state between a recoverable source and its forward image keeps
      // all defect numbers non-negative, so branches that drive one below
      // zero can never lead back to a source and are dropped.  States whose
      // circle crossing count is odd cannot be glued and are dropped for the
      // same reason.
      bool viable = true;
      try {
        for (const std::string& q : punctures)
          if (d_metric(t, *prev, q) < 0) { viable = false; break; }
      } catch (const InvariantError&) {
        viable = false;
      }
      if (!viable) continue;
      require(seen.size() < opts.budget, "reverse search budget exhausted");
      seen.insert(*prev);
      queue.push_back(*prev);
    }
  }
  require(!candidates.empty(), "no recoverable source state found");
  require(candidates.size() == 1, "the recoverable source state is not unique");
  return candidates.front();
}

State recover_n(const Triangulation& t, const State& s, int n,
                const RecoverOptions& opts) {
  require(n >= 1, "the weight must be positive");
  std::vector<std::string> punctures;
  for (const auto& [pt, punc] : t.points)
    if (punc && !angles_at(t, pt).empty()) punctures.push_back(pt);
  require(punctures.size() == 1, "weighted recovery needs exactly one puncture");
  const std::string& p = punctures.front();
  State cur = s;
  for (std::size_t step = 0; step < opts.budget; ++step) {
    if (d_metric(t, cur, p, n) == 0) return cur;
    if (!check_star_p(t, cur, p)) return cur;
    const auto prev = try_psi_p(t, cur, p);
    if (!prev) return cur;
    cur = *prev;
  }
  throw InvariantError("reverse search budget exhausted");
}

// ---------------------------------------------------------------------------
// Gluing
// ---------------------------------------------------------------------------

std::string GluedCurve::text() const {
  const auto render = [](const std::string& a, Tag ta, const std::vector<int>& xs,
                         const std::string& b, Tag tb) {
    std::string out = a;
    if (ta == Tag::notched) out += "*";
    for (int x : xs) out += "-" + std::to_string(x);
    out += "-" + b;
    if (tb == Tag::notched) out += "*";
    return out;
  };
  std::vector<int> rev(crossings.rbegin(), crossings.rend());
  const std::string fwd = render(ends[0], tags[0], crossings, ends[1], tags[1]);
  const std::string bwd = render(ends[1], tags[1], rev, ends[0], tags[0]);
  return std::min(fwd, bwd);
}

namespace {

struct GlueExt {
  bool port = false;
  std::string point;  // terminals
  Tag tag = Tag::plain;
  int partner = -1;  // ports, filled during pairing
  int cross = 0;     // id of the crossed edge
};

struct GlueInst {
  int piece = 0;
  Segment seg;
};

struct GlueWork {
  std::vector<GlueInst> insts;
  std::vector<GlueExt> exts;  // 2 per instance
  std::map<std::pair<int, Segment>, int> first_inst;
};

// Instantiates every non-edge segment with its two extremities.
GlueWork make_instances(const Triangulation& t, const State& s) {
  GlueWork w;
  for (std::size_t pi = 0; pi < t.pieces.size(); ++pi) {
    const Piece& P = t.pieces[pi];
    for (const auto& [seg, m] : s.pieces[pi]) {
      if (seg.kind == SegKind::e) continue;
      require(seg.kind != SegKind::y,
              "a three-pronged segment cannot be part of a glued curve");
      w.first_inst[{static_cast<int>(pi), seg}] = static_cast<int>(w.insts.size());
      for (int copy = 0; copy < m; ++copy) {
        w.insts.push_back({static_cast<int>(pi), seg});
        GlueExt e0, e1;
        switch (seg.kind) {
          case SegKind::h:
            e0.port = e1.port = true;
            break;
          case SegKind::v:
            e0.port = true;
            e1.point = P.corners[seg.index];
            break;
          case SegKind::i:
          case SegKind::in:
            e0.port = true;
            e1.point = P.puncture;
            e1.tag = seg.kind == SegKind::in ? Tag::notched : Tag::plain;
            break;
          case SegKind::f:
          case SegKind::fn:
            e0.point = P.base;
            e1.point = P.puncture;
            e1.tag = seg.kind == SegKind::fn ? Tag::notched : Tag::plain;
            break;
          default:
            throw InvariantError("unexpected segment kind");
        }
        w.exts.push_back(e0);
        w.exts.push_back(e1);
      }
    }
  }
  return w;
}

int ext_id(const GlueWork& w, int piece, const Segment& seg, int copy, int end) {
  const auto it = w.first_inst.find({piece, seg});
  require(it != w.first_inst.end(), "missing segment instance");
  return 2 * (it->second + copy) + end;
}

// Ordered extremities along one side of an edge.  Triangle side pos runs from
// corner (pos+1)%3 to corner (pos+2)%3: first the corner segments cutting the
// start corner (innermost first), then the perpendicular segments, then the
// segments cutting the far corner (innermost last).  A monogon side runs both
// corner-segment bundles around the puncture-side segments.
std::vector<int> slot_ports(const Triangulation& t, const State& s,
                            const GlueWork& w, const SlotRef& sr) {
  std::vector<int> out;
  const SegCounts& c = s.pieces.at(sr.piece);
  if (is_triangle(t, sr.piece)) {
    const int c1 = (sr.pos + 1) % 3;
    const int c2 = (sr.pos + 2) % 3;
    for (int l = 0; l < get(c, tri_h(c1)); ++l)
      out.push_back(ext_id(w, sr.piece, tri_h(c1), l, 1));
    for (int l = 0; l < get(c, tri_v(sr.pos)); ++l)
      out.push_back(ext_id(w, sr.piece, tri_v(sr.pos), l, 0));
    for (int l = get(c, tri_h(c2)) - 1; l >= 0; --l)
      out.push_back(ext_id(w, sr.piece, tri_h(c2), l, 0));
  } else {
    const int m = get(c, mono_h());
    for (int l = 0; l < m; ++l) out.push_back(ext_id(w, sr.piece, mono_h(), l, 0));
    for (int l = 0; l < get(c, mono_i()); ++l)
      out.push_back(ext_id(w, sr.piece, mono_i(), l, 0));
    for (int l = 0; l < get(c, mono_in()); ++l)
      out.push_back(ext_id(w, sr.piece, mono_in(), l, 0));
    for (int l = m - 1; l >= 0; --l)
      out.push_back(ext_id(w, sr.piece, mono_h(), l, 1));
  }
  return out;
}

AngleRef angle_of(const Triangulation& t, const GlueInst& gi) {
  if (!is_triangle(t, gi.piece)) return {gi.piece, 0};
  return {gi.piece, gi.seg.index};
}

}  // namespace

GluedSet glue(const Triangulation& t, const State& s) {
  validate_state(t, s);
  require(is_glueable(t, s), "the state is not glueable");
  GlueWork w = make_instances(t, s);

  // Group the sides of each edge.
  std::map<EdgeRef, std::vector<SlotRef>> sides;
  for (std::size_t pi = 0; pi < t.pieces.size(); ++pi) {
    const Piece& P = t.pieces[pi];
    if (P.kind == Piece::Kind::triangle) {
      for (int k = 0; k < 3; ++k)
        sides[P.edges[k]].push_back({static_cast<int>(pi), k});
    } else {
      sides[EdgeRef{P.loop, ""}].push_back({static_cast<int>(pi), 0});
    }
  }

  std::map<int, int> parallel;  // arc id -> number of edge copies over it
  for (const auto& [edge, sl] : sides) {
    if (edge.is_boundary()) {
      require(sl.size() == 1, "a boundary segment with two sides");
      require(slot_ports(t, s, w, sl[0]).empty(),
              "a glued curve would cross a boundary segment");
      require(get(s.pieces.at(sl[0].piece), tri_e(sl[0].pos)) == 0,
              "an edge copy lies over a boundary segment");
      continue;
    }
    require(sl.size() == 2, "an interior edge without two sides");
    const std::vector<int> L1 = slot_ports(t, s, w, sl[0]);
    const std::vector<int> L2 = slot_ports(t, s, w, sl[1]);
    require(L1.size() == L2.size(), "sides of an edge disagree on crossings");
    const int nports = static_cast<int>(L1.size());
    for (int k = 0; k < nports; ++k) {
      const int a = L1[k];
      const int b = L2[nports - 1 - k];
      w.exts[a].partner = b;
      w.exts[b].partner = a;
      w.exts[a].cross = w.exts[b].cross = edge.id;
    }
    const auto copies_at = [&](const SlotRef& sr) {
      const SegCounts& c = s.pieces.at(sr.piece);
      return is_triangle(t, sr.piece) ? get(c, tri_e(sr.pos)) : get(c, mono_e());
    };
    const int c1 = copies_at(sl[0]);
    require(c1 == copies_at(sl[1]), "sides of an edge disagree on edge copies");
    if (c1 > 0) {
      require(!t.is_loop(edge.id), "an edge copy lies over a loop");
      parallel[edge.id] = c1;
    }
  }

  GluedSet out;
  std::vector<char> visited(w.insts.size(), 0);

  // Open chains start at terminal extremities.
  for (std::size_t e = 0; e < w.exts.size(); ++e) {
    if (w.exts[e].port || visited[e / 2]) continue;
    visited[e / 2] = 1;
    GluedCurve curve;
    curve.ends[0] = w.exts[e].point;
    curve.tags[0] = w.exts[e].tag;
    std::size_t cur = e;
    while (true) {
      const std::size_t sib = cur ^ 1;
      if (!w.exts[sib].port) {
        curve.ends[1] = w.exts[sib].point;
        curve.tags[1] = w.exts[sib].tag;
        break;
      }
      curve.crossings.push_back(w.exts[sib].cross);
      require(w.exts[sib].partner >= 0, "an unpaired crossing");
      cur = static_cast<std::size_t>(w.exts[sib].partner);
      visited[cur / 2] = 1;
    }
    require(curve.ends[0] != curve.ends[1] || curve.tags[0] == curve.tags[1],
            "a glued loop has mismatched end tags");
    out.curves.push_back(std::move(curve));
  }

  // Remaining instances form closed chains; each must be a puncture circle.
  for (std::size_t i = 0; i < w.insts.size(); ++i) {
    if (visited[i]) continue;
    std::vector<AngleRef> touched;
    const std::size_t start = 2 * i;
    std::size_t cur = start;
    do {
      require(touched.size() <= w.insts.size(), "a closed chain does not close");
      visited[cur / 2] = 1;
      touched.push_back(angle_of(t, w.insts[cur / 2]));
      const std::size_t sib = cur ^ 1;
      require(w.exts[cur].port && w.exts[sib].port && w.exts[sib].partner >= 0,
              "a closed chain through a terminal extremity");
      cur = static_cast<std::size_t>(w.exts[sib].partner);
    } while (cur != start);
    const std::string p = t.point_of(touched.front());
    std::vector<AngleRef> expected = angles_at(t, p);
    std::sort(touched.begin(), touched.end());
    require(touched == expected, "a closed glued curve is not a puncture circle");
    out.closed[p] += 1;
  }

  // Edge copies become parallel curves of the underlying arcs.
  for (const auto& [id, m] : parallel) {
    const Arc& a = t.arc(id);
    for (int k = 0; k < m; ++k)
      out.curves.push_back({{a.ends[0], a.ends[1]}, {a.tags[0], a.tags[1]}, {}});
  }

  std::sort(out.curves.begin(), out.curves.end(),
            [](const GluedCurve& x, const GluedCurve& y) { return x.text() < y.text(); });
  return out;
}

// ---------------------------------------------------------------------------
// Decoding
// ---------------------------------------------------------------------------

DecodeResult decode(const Triangulation& t, const std::vector<int>& v,
                    std::optional<int> n) {
  require_schema(t.sigma.empty(),
                 "decoding requires the reference triangulation form");
  require_schema(static_cast<int>(v.size()) == t.rank(),
                 "crossing vector length must match the number of arcs");
  for (int x : v) require_schema(x >= 0, "crossing numbers must be nonnegative");
  int punctures = 0;
  for (const auto& [pt, punc] : t.points) punctures += punc ? 1 : 0;
  if (n) {
    require_schema(*n >= 1, "the weight must be positive");
    require_schema(t.surface.boundary.empty() && punctures == 1,
                   "weighted decoding needs a closed surface with one puncture");
  }
  const auto val = [&](int id) { return v.at(static_cast<std::size_t>(id) - 1); };

  // Per-piece crossing numbers and the canonical crossing-minimal multisets.
  State st = empty_state(t);
  for (std::size_t pi = 0; pi < t.pieces.size(); ++pi) {
    const Piece& P = t.pieces[pi];
    if (P.kind == Piece::Kind::monogon) {
      st.pieces[pi] = reconstruct_monogon(val(P.pair[0]), val(P.pair[1]));
      continue;
    }
    std::array<int, 3> a{};
    for (int k = 0; k < 3; ++k) {
      const EdgeRef& E = P.edges[k];
      if (E.is_boundary())
        a[k] = 0;
      else if (t.is_loop(E.id)) {
        const Piece& M = t.pieces.at(t.monogon_of_loop(E.id));
        a[k] = val(M.pair[0]) + val(M.pair[1]);
      } else {
        a[k] = val(E.id);
      }
    }
    st.pieces[pi] = reconstruct_triangle(a);
  }
  // The reconstruction must reproduce its own crossing numbers.
  for (std::size_t pi = 0; pi < t.pieces.size(); ++pi) {
    const Piece& P = t.pieces[pi];
    if (P.kind != Piece::Kind::monogon) continue;
    int plain = 0, notched = 0;
    for (const auto& [seg, m] : st.pieces[pi]) {
      plain += m * edge_crossings(seg, 1);
      notched += m * edge_crossings(seg, 2);
    }
    require(plain == val(P.pair[0]) && notched == val(P.pair[1]),
            "reconstruction does not reproduce the crossing numbers");
  }

  const State S = n ? recover_n(t, st, *n) : recover(t, st);
  GluedSet G = glue(t, S);

  // The closed-curve counts must agree with the per-angle minima.
  std::map<std::string, int> mults;
  for (const auto& [pt, punc] : t.points) {
    if (!punc || angles_at(t, pt).empty()) continue;
    const int m = closed_weight(t, S, pt);
    const auto it = G.closed.find(pt);
    require((it == G.closed.end() ? 0 : it->second) == m,
            "closed curves disagree with the angle minima");
    if (m == 0) continue;
    const int unit = n ? *n : 1;
    require(m % unit == 0, "closed multiplicity is not divisible by the weight");
    mults[pt] = m / unit;
  }
  for (const auto& [pt, m] : G.closed)
    require(mults.count(pt), "a closed curve at an unexpected point");

  // Re-mark ends at punctures that carry closed curves.
  DecodeResult out;
  std::map<std::string, int> ends_at;
  for (GluedCurve& c : G.curves) {
    for (int k = 0; k < 2; ++k) {
      if (mults.count(c.ends[k])) {
        c.tags[k] = Tag::notched;
        ends_at[c.ends[k]] += 1;
      }
    }
    out.U1.push_back(c.text());
  }
  std::sort(out.U1.begin(), out.U1.end());
  for (const auto& [pt, m] : mults) {
    const auto it = ends_at.find(pt);
    const int used = it == ends_at.end() ? 0 : it->second;
    require(m >= used, "more re-marked ends than closed curves allow");
    if (m - used > 0) out.notch_counts[pt] = m - used;
    out.closed_multiplicities[pt] = m;
  }
  return out;
}

}  // namespace workbench
