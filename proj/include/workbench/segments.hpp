#pragma once

#include <array>
#include <compare>
#include <map>
#include <string>

namespace workbench {

// Elementary pieces of curves inside one piece of a triangulation.
//
// Triangle segments (index = an angle or edge position, 0..2):
//   e — a parallel copy of the edge at that position (no crossings)
//   h — corner segment crossing the two edges adjacent to that angle
//   v — segment from that angle's corner to the opposite edge
//   y — bookkeeping segment meeting all three edges once; it is never part
//       of a glued curve and never useful with multiplicity above one
//
// Monogon segments (index unused):
//   e  — a parallel copy of the loop
//   f  — a curve isotopic to the plain conjugate-pair arc
//   fn — a curve isotopic to the notched conjugate-pair arc
//   h  — segment with both ends on the loop, separating the puncture
//   i  — segment from the loop to the puncture, plain at the puncture
//   in — segment from the loop to the puncture, notched at the puncture
enum class SegKind { e, h, v, y, f, fn, i, in };

struct Segment {
  bool monogon = false;
  SegKind kind = SegKind::h;
  int index = 0;
  auto operator<=>(const Segment&) const = default;
  std::string text() const;
};

Segment tri_e(int index);
Segment tri_h(int index);
Segment tri_v(int index);
Segment tri_y();
Segment mono_e();
Segment mono_f();
Segment mono_fn();
Segment mono_h();
Segment mono_i();
Segment mono_in();

// A piece's content in a state: multiplicities of segments, all positive.
using SegCounts = std::map<Segment, int>;

// Crossing number of two segments of the same piece family. For segments
// ending at a common puncture this includes the mismatched-tag contribution,
// and an isotopic plain/notched pair cancels to zero.
int pair_int(const Segment& a, const Segment& b);

// Crossing number of a segment with a whole multiset, extended linearly.
int int_with(const Segment& s, const SegCounts& counts);

// True when every pair of copies in the multiset has crossing number zero.
bool crossing_free(const SegCounts& counts);

// Crossing numbers with the piece's own edges. Triangle positions are the
// edge positions 0..2; monogon positions are 0 = loop, 1 = plain pair arc,
// 2 = notched pair arc.
int edge_crossings(const Segment& s, int pos);

// Endpoints a segment presents on a glueable boundary edge of its piece
// (triangle positions 0..2, monogon position 0 — pair arcs are interior).
int attach_points(const Segment& s, int pos);

// The unique crossing-free multiset of crossing segments (no parallel edge
// copies) with the given edge crossing numbers.
SegCounts reconstruct_triangle(const std::array<int, 3>& a);
SegCounts reconstruct_monogon(int plain_crossings, int notched_crossings);

// Check that a multiset is well-formed content for a piece of the given
// kind: matching family, positive multiplicities, indices in range.
void validate_counts(const SegCounts& counts, bool monogon_piece);

// Render a multiset as "h0^5 h2^4 y" (sorted, ^1 omitted); "-" when empty.
std::string counts_text(const SegCounts& counts);

}  // namespace workbench
