#include "workbench/segments.hpp"

#include <algorithm>

#include "workbench/errors.hpp"

namespace workbench {

Segment tri_e(int index) { return {false, SegKind::e, index}; }
Segment tri_h(int index) { return {false, SegKind::h, index}; }
Segment tri_v(int index) { return {false, SegKind::v, index}; }
Segment tri_y() { return {false, SegKind::y, 0}; }
Segment mono_e() { return {true, SegKind::e, 0}; }
Segment mono_f() { return {true, SegKind::f, 0}; }
Segment mono_fn() { return {true, SegKind::fn, 0}; }
Segment mono_h() { return {true, SegKind::h, 0}; }
Segment mono_i() { return {true, SegKind::i, 0}; }
Segment mono_in() { return {true, SegKind::in, 0}; }

std::string Segment::text() const {
  if (monogon) {
    switch (kind) {
      case SegKind::e: return "e";
      case SegKind::f: return "f";
      case SegKind::fn: return "f*";
      case SegKind::h: return "h";
      case SegKind::i: return "i";
      case SegKind::in: return "i*";
      default: break;
    }
    throw InvariantError("segment kind does not belong to a monogon");
  }
  const std::string pos = std::to_string(index);
  switch (kind) {
    case SegKind::e: return "e" + pos;
    case SegKind::h: return "h" + pos;
    case SegKind::v: return "v" + pos;
    case SegKind::y: return "y";
    default: break;
  }
  throw InvariantError("segment kind does not belong to a triangle");
}

namespace {

void check_segment(const Segment& s) {
  if (s.monogon) {
    require(s.kind == SegKind::e || s.kind == SegKind::f ||
                s.kind == SegKind::fn || s.kind == SegKind::h ||
                s.kind == SegKind::i || s.kind == SegKind::in,
            "segment kind does not belong to a monogon");
    require(s.index == 0, "monogon segments carry no position index");
  } else {
    require(s.kind == SegKind::e || s.kind == SegKind::h ||
                s.kind == SegKind::v || s.kind == SegKind::y,
            "segment kind does not belong to a triangle");
    if (s.kind == SegKind::y) {
      require(s.index == 0, "the central segment carries no position index");
    } else {
      require(s.index >= 0 && s.index < 3,
              "triangle segment position out of range");
    }
  }
}

int tri_pair(const Segment& a, const Segment& b) {
  const bool same = a.index == b.index;
  switch (a.kind) {
    case SegKind::e:
      switch (b.kind) {
        case SegKind::e: return 0;
        case SegKind::h: return same ? 0 : 1;
        case SegKind::v: return same ? 1 : 0;
        case SegKind::y: return 1;
        default: break;
      }
      break;
    case SegKind::h:
      switch (b.kind) {
        case SegKind::h: return 0;
        case SegKind::v: return same ? 1 : 0;
        case SegKind::y: return 0;
        default: break;
      }
      break;
    case SegKind::v:
      switch (b.kind) {
        case SegKind::v: return same ? 0 : 1;
        case SegKind::y: return 1;
        default: break;
      }
      break;
    case SegKind::y:
      if (b.kind == SegKind::y) return 1;
      break;
    default: break;
  }
  throw InvariantError("unordered triangle segment pair");
}

int mono_pair(const Segment& a, const Segment& b) {
  switch (a.kind) {
    case SegKind::e:
      switch (b.kind) {
        case SegKind::e: return 0;
        case SegKind::f: return 0;
        case SegKind::fn: return 0;
        case SegKind::h: return 2;
        case SegKind::i: return 1;
        case SegKind::in: return 1;
        default: break;
      }
      break;
    case SegKind::f:
      switch (b.kind) {
        case SegKind::f: return 0;
        case SegKind::fn: return 0;
        case SegKind::h: return 1;
        case SegKind::i: return 0;
        case SegKind::in: return 1;
        default: break;
      }
      break;
    case SegKind::fn:
      switch (b.kind) {
        case SegKind::fn: return 0;
        case SegKind::h: return 1;
        case SegKind::i: return 1;
        case SegKind::in: return 0;
        default: break;
      }
      break;
    case SegKind::h:
      switch (b.kind) {
        case SegKind::h: return 0;
        case SegKind::i: return 0;
        case SegKind::in: return 0;
        default: break;
      }
      break;
    case SegKind::i:
      switch (b.kind) {
        case SegKind::i: return 0;
        case SegKind::in: return 1;
        default: break;
      }
      break;
    case SegKind::in:
      if (b.kind == SegKind::in) return 0;
      break;
    default: break;
  }
  throw InvariantError("unordered monogon segment pair");
}

}  // namespace

namespace {

int family_rank(const Segment& s) {
  if (s.monogon) {
    switch (s.kind) {
      case SegKind::e: return 0;
      case SegKind::f: return 1;
      case SegKind::fn: return 2;
      case SegKind::h: return 3;
      case SegKind::i: return 4;
      case SegKind::in: return 5;
      default: break;
    }
  } else {
    switch (s.kind) {
      case SegKind::e: return 0;
      case SegKind::h: return 1;
      case SegKind::v: return 2;
      case SegKind::y: return 3;
      default: break;
    }
  }
  throw InvariantError("segment kind does not belong to its piece family");
}

}  // namespace

int pair_int(const Segment& a, const Segment& b) {
  check_segment(a);
  check_segment(b);
  require(a.monogon == b.monogon,
          "segments of different piece families never meet");
  const Segment* lo = &a;
  const Segment* hi = &b;
  if (family_rank(b) < family_rank(a)) std::swap(lo, hi);
  return a.monogon ? mono_pair(*lo, *hi) : tri_pair(*lo, *hi);
}

int int_with(const Segment& s, const SegCounts& counts) {
  int total = 0;
  for (const auto& [t, m] : counts) total += m * pair_int(s, t);
  return total;
}

bool crossing_free(const SegCounts& counts) {
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second >= 2 && pair_int(it->first, it->first) > 0) return false;
    for (auto jt = std::next(it); jt != counts.end(); ++jt) {
      if (pair_int(it->first, jt->first) > 0) return false;
    }
  }
  return true;
}

int edge_crossings(const Segment& s, int pos) {
  check_segment(s);
  if (s.monogon) {
    require(pos >= 0 && pos < 3, "monogon edge position out of range");
    switch (s.kind) {
      case SegKind::e:
      case SegKind::f:
      case SegKind::fn: return 0;
      case SegKind::h: return pos == 0 ? 2 : 1;
      case SegKind::i: return pos == 1 ? 0 : 1;
      case SegKind::in: return pos == 2 ? 0 : 1;
      default: break;
    }
    throw InvariantError("segment kind does not belong to a monogon");
  }
  require(pos >= 0 && pos < 3, "triangle edge position out of range");
  switch (s.kind) {
    case SegKind::e: return 0;
    case SegKind::h: return pos == s.index ? 0 : 1;
    case SegKind::v: return pos == s.index ? 1 : 0;
    case SegKind::y: return 1;
    default: break;
  }
  throw InvariantError("segment kind does not belong to a triangle");
}

int attach_points(const Segment& s, int pos) {
  check_segment(s);
  if (s.monogon) {
    require(pos == 0, "only the loop bounds a monogon");
  } else {
    require(pos >= 0 && pos < 3, "triangle edge position out of range");
  }
  return edge_crossings(s, pos);
}

SegCounts reconstruct_triangle(const std::array<int, 3>& a) {
  for (int x : a) require(x >= 0, "edge crossing numbers must be nonnegative");
  SegCounts out;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    if (a[i] > a[j] + a[k]) {
      if (a[j] > 0) out[tri_h(k)] = a[j];
      if (a[k] > 0) out[tri_h(j)] = a[k];
      out[tri_v(i)] = a[i] - a[j] - a[k];
      return out;
    }
  }
  const int odd = (a[0] + a[1] + a[2]) % 2;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    const int m = (a[j] + a[k] - a[i] - odd) / 2;
    if (m > 0) out[tri_h(i)] = m;
  }
  if (odd) out[tri_y()] = 1;
  return out;
}

SegCounts reconstruct_monogon(int plain_crossings, int notched_crossings) {
  require(plain_crossings >= 0 && notched_crossings >= 0,
          "edge crossing numbers must be nonnegative");
  SegCounts out;
  const int h = std::min(plain_crossings, notched_crossings);
  if (h > 0) out[mono_h()] = h;
  if (notched_crossings > plain_crossings) {
    out[mono_i()] = notched_crossings - plain_crossings;
  } else if (plain_crossings > notched_crossings) {
    out[mono_in()] = plain_crossings - notched_crossings;
  }
  return out;
}

void validate_counts(const SegCounts& counts, bool monogon_piece) {
  for (const auto& [s, m] : counts) {
    check_segment(s);
    require(s.monogon == monogon_piece,
            "segment family does not match its piece");
    require(m > 0, "segment multiplicities must be positive");
  }
}

std::string counts_text(const SegCounts& counts) {
  if (counts.empty()) return "-";
  std::string out;
  for (const auto& [s, m] : counts) {
    if (!out.empty()) out += ' ';
    out += s.text();
    if (m != 1) out += '^' + std::to_string(m);
  }
  return out;
}

}  // namespace workbench
