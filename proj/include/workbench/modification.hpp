#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "workbench/segments.hpp"
#include "workbench/surface.hpp"

namespace workbench {

// A segment state assigns one multiset of edge copies and segments to every
// puzzle piece of a triangulation, indexed like Triangulation::pieces.
struct State {
  std::vector<SegCounts> pieces;

  auto operator<=>(const State&) const = default;
};

// State with one empty multiset per piece.
State empty_state(const Triangulation& t);

// One line per piece: "<piece label>: <counts>".
std::string state_text(const Triangulation& t, const State& s);

// Checks piece count and per-piece multiset validity; throws InvariantError.
void validate_state(const Triangulation& t, const State& s);

// ---------------------------------------------------------------------------
// Angles and their segments
// ---------------------------------------------------------------------------

// The corner-cut segment h_a of an angle.
Segment h_of(const Triangulation& t, const AngleRef& a);

// All angles based at a marked point, in (piece, corner) order.  Empty for
// enclosed punctures, which have no incident piece corners.
std::vector<AngleRef> angles_at(const Triangulation& t, const std::string& point);

// ---------------------------------------------------------------------------
// Forward and backward moves at a single angle
// ---------------------------------------------------------------------------

// Case number of the forward move at angle a (1..7 on a triangle piece,
// 1..2 on a monogon piece), or nullopt when the move does not apply.
std::optional<int> classify_phi(const Triangulation& t, const State& s, const AngleRef& a);

// Case number of the backward move at angle a (same numbering), or nullopt.
std::optional<int> classify_psi(const Triangulation& t, const State& s, const AngleRef& a);

// Apply the forward/backward move; throws InvariantError when it doesn't
// apply or a multiplicity would go negative.
State apply_phi(const Triangulation& t, const State& s, const AngleRef& a);
State apply_psi(const Triangulation& t, const State& s, const AngleRef& a);

// Crossing-isolation condition at angle a: on a triangle piece, any positive
// crossing involving the angle's side edge copies or its corner segment must
// have the angle's h as the partner; on a monogon piece, any positive
// crossing at all must involve the angle's h.
bool check_star(const Triangulation& t, const State& s, const AngleRef& a);

// ---------------------------------------------------------------------------
// Puncture-level composites
// ---------------------------------------------------------------------------

// m_S(c_p): minimal h-multiplicity over the angles at p (0 if p has none).
int closed_weight(const Triangulation& t, const State& s, const std::string& p);

// Angles at p where the forward move applies.
std::vector<AngleRef> phi_angles(const Triangulation& t, const State& s, const std::string& p);

// Angles at p whose h-multiplicity equals the closed weight.
std::vector<AngleRef> min_angles(const Triangulation& t, const State& s, const std::string& p);

// Forward condition at p: the forward move applies at at least one angle at p
// and the moves over those angles commute pairwise.
bool check_phi_p(const Triangulation& t, const State& s, const std::string& p);

// Backward condition at p: the backward move applies at every minimal angle
// at p (nonempty) and the moves over those angles commute pairwise.
bool check_psi_p(const Triangulation& t, const State& s, const std::string& p);

// First composite condition: every forward angle at p is a minimal angle.
bool check_star1_p(const Triangulation& t, const State& s, const std::string& p);

// Second composite condition: crossing isolation at every forward angle at p.
bool check_star2_p(const Triangulation& t, const State& s, const std::string& p);

// Both composite conditions.
bool check_star_p(const Triangulation& t, const State& s, const std::string& p);

// Apply the forward (resp. backward) move at every forward (resp. minimal)
// angle at p; requires the corresponding condition.
State phi_p(const Triangulation& t, const State& s, const std::string& p);
State psi_p(const Triangulation& t, const State& s, const std::string& p);

// ---------------------------------------------------------------------------
// Maximal modification
// ---------------------------------------------------------------------------

// Every piece without an angle where the forward move applies under crossing
// isolation must consist of pairwise compatible elements.
bool is_a_modifiable(const Triangulation& t, const State& s);

// Apply forward moves (under crossing isolation) until none applies.
// Requires is_a_modifiable; the result is independent of the order chosen.
State maximal_modification(const Triangulation& t, const State& s);

// ---------------------------------------------------------------------------
// Glueability and metrics
// ---------------------------------------------------------------------------

// Both matching conditions across every interior angle pair: equal crossing
// numbers with the shared edge and equal edge-copy multiplicities.
bool is_glueable(const Triangulation& t, const State& s);

// Crossing number of the circle around puncture p with the glued multiset,
// computed from the per-angle formula (edge copies weighted one half).
int int_closed(const Triangulation& t, const State& s, const std::string& p);

// Crossing number of a curve of the underlying complex (by id) with the
// glued multiset: half the sum over its two slots of in-piece crossings.
int int_omega(const Triangulation& t, const State& s, int omega_id);

struct PunctureMetrics {
  int closed_weight = 0;   // m_S(c_p)
  int int_closed = 0;      // crossing number of c_p with the glued multiset
  int d = 0;               // closed_weight - n * (int_closed if present else 0)
};

// Metrics for every puncture with at least one angle; n weights the crossing
// term of d (default 1).
std::map<std::string, PunctureMetrics> metrics(const Triangulation& t, const State& s,
                                               int n = 1);

// d-metric for a single puncture.
int d_metric(const Triangulation& t, const State& s, const std::string& p, int n = 1);

// Given after == phi_p(before) (verified), whether p's circle crossing number
// dropped by exactly one.
bool is_enclosed(const Triangulation& t, const std::string& p, const State& before,
                 const State& after);

// Probe version: tries to realize s as phi_p of some glueable predecessor via
// a single backward move at p and compares circle crossing numbers.
bool enclosed_in(const Triangulation& t, const State& s, const std::string& p);

// ---------------------------------------------------------------------------
// Recoverability and reverse search
// ---------------------------------------------------------------------------

// Whether the per-vertex count system over the eligible connector curves has
// a nonnegative solution (the characterization step).
bool is_characterized(const Triangulation& t, const State& s);

// Conjunction: first composite condition at every puncture, glueable, no
// puncture enclosed, characterized.
bool is_p_recoverable(const Triangulation& t, const State& s);

struct RecoverOptions {
  std::size_t budget = 1000000;  // maximum states explored
};

// Finds the unique recoverable preimage of s under puncture-level forward
// moves (possibly s itself) by bounded reverse search; throws InvariantError
// if none exists, several exist, or the budget is exhausted.
State recover(const Triangulation& t, const State& s, const RecoverOptions& opts = {});

// Variant for a closed surface with exactly one puncture p and weight n:
// applies the backward move at p until the weighted d-metric vanishes or the
// backward condition fails.
State recover_n(const Triangulation& t, const State& s, int n,
                const RecoverOptions& opts = {});

// ---------------------------------------------------------------------------
// Gluing and decoding
// ---------------------------------------------------------------------------

// A curve produced by gluing segments across pieces: endpoints with tags and
// the ordered ids of the crossed curves of the underlying complex.
struct GluedCurve {
  std::array<std::string, 2> ends;
  std::array<Tag, 2> tags{Tag::plain, Tag::plain};
  std::vector<int> crossings;

  // "<end><*?>-<id>-...-<end><*?>", direction chosen lexicographically.
  std::string text() const;

  auto operator<=>(const GluedCurve&) const = default;
};

struct GluedSet {
  std::vector<GluedCurve> curves;      // open curves, sorted by rendering
  std::map<std::string, int> closed;   // puncture-circle multiplicities
};

// Glue a state into curves by chaining segment endpoints across edges
// (in-piece crossings between distinct segments are allowed and ignored);
// throws InvariantError on mismatched port or edge-copy counts, boundary
// endpoints, closed chains that are not puncture circles, or edge copies
// over loops or boundary.
GluedSet glue(const Triangulation& t, const State& s);

struct DecodeResult {
  std::vector<std::string> U1;                     // canonical strings, sorted
  std::map<std::string, int> notch_counts;         // positive entries only
  std::map<std::string, int> closed_multiplicities;  // positive entries only
};

// Decode a crossing vector (indexed by arc id, 1-based) into the plain part,
// per-puncture notch counts, and per-puncture closed multiplicities.  With n
// given, the triangulation must be of a closed surface with one puncture and
// the vector is interpreted at weight n.
DecodeResult decode(const Triangulation& t, const std::vector<int>& v,
                    std::optional<int> n = std::nullopt);

}  // namespace workbench
