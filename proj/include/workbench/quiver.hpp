#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace workbench {

// Finite quiver without loops or 2-cycles, vertices 1..n, parallel arrows
// stored as multiplicities. Vertices 1..n_mutable admit mutation; the rest
// are frozen (used for framed quivers carrying principal coefficients).
class Quiver {
 public:
  Quiver() = default;
  Quiver(int n, int n_mutable) : n_(n), n_mutable_(n_mutable) {}

  int n() const { return n_; }
  int n_mutable() const { return n_mutable_; }
  const std::map<std::pair<int, int>, int>& arrows() const { return arrows_; }

  void add_arrow(int s, int t, int mult = 1);
  int count(int s, int t) const;

  // Throws SchemaError on out-of-range vertices and InvariantError on loops
  // or 2-cycles.
  void validate() const;

  // The same quiver with every vertex mutable.
  static Quiver all_mutable(int n) { return Quiver(n, n); }

  // Doubled quiver on 2n vertices: a copy of the principal part (which must
  // be fully mutable) plus one arrow i -> n+i per vertex; vertices n+1..2n
  // are frozen.
  static Quiver framed(const Quiver& principal);

  // Quiver mutation at mutable vertex k: (1) for every path i -> k -> j add
  // an arrow i -> j unless both i and j are frozen, (2) reverse all arrows
  // incident to k, (3) cancel 2-cycles.
  void mutate(int k);

  bool operator==(const Quiver& o) const = default;

  // Stable one-line encoding ("s->t", multiplicity as repetition), used for
  // reports and dedup keys.
  std::string text() const;

 private:
  int n_ = 0;
  int n_mutable_ = 0;
  std::map<std::pair<int, int>, int> arrows_;
};

}  // namespace workbench
