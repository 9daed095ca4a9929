#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "workbench/laurent.hpp"
#include "workbench/quiver.hpp"

namespace workbench {

// A seed with principal coefficients: the doubled quiver on 2n vertices
// (vertices n+1..2n frozen, one frame arrow i -> n+i) plus the n cluster
// variables as Laurent polynomials in the initial x's and the coefficient
// y's. Frozen vertex n+j always stands for the fixed variable y_j.
struct Seed {
  Quiver q;                 // 2n vertices, n mutable
  std::vector<Laurent> x;   // x[i] is the variable at mutable vertex i+1

  int rank() const { return q.n_mutable(); }
  // Canonical cluster key: the variables' canonical texts, sorted and joined.
  std::string cluster_key() const;
  // Key that also pins the quiver (used for BFS dedup of seeds).
  std::string seed_key() const;
};

// Seed of the initial cluster: x_i at vertex i.
Seed initial_seed(const Quiver& principal);

// Seed mutation at mutable vertex k (1-based): exchanges x_k against the two
// arrow products (frozen neighbours contribute y's) using exact Laurent
// division, then mutates the quiver.
void mutate_seed(Seed& s, int k);

// Per-variable report: canonical Laurent text, denominator vector d,
// coefficient degree vector f, lattice vector g of the unique
// coefficient-free term, and term count.
struct VarReport {
  std::string text;
  std::vector<int32_t> d;
  std::vector<int32_t> f;
  std::vector<int32_t> g;
  std::size_t n_terms = 0;
};

VarReport report_variable(const Laurent& v);

// f-vector only (max y-degrees after specializing x to 1; asserts the
// specialization keeps positive coefficients so no term cancels).
std::vector<int32_t> f_vector(const Laurent& v);

struct EnumerateOptions {
  int max_depth = -1;       // -1: run to closure (or until cap)
  std::size_t seed_cap = 100000;
  bool parallel = true;     // OpenMP frontier expansion; result is identical
                            // to the serial reference either way
};

struct EnumerateResult {
  std::size_t seeds_visited = 0;
  std::size_t clusters = 0;
  bool closed = false;                    // true when BFS exhausted all seeds
  std::vector<std::size_t> depth_counts;  // new seeds found per depth
  // Distinct variables (by canonical text) discovered, in first-seen order.
  std::vector<std::string> variable_texts;
  // Clusters as sorted variable-index lists into variable_texts, first-seen
  // order; index lists are sorted ascending.
  std::vector<std::vector<int>> cluster_members;
};

// Breadth-first exploration of the mutation graph from the initial seed of
// `principal`, deduplicating seeds by (cluster, quiver). Deterministic: the
// frontier is expanded in a fixed order and merged serially, so the report is
// byte-identical with and without OpenMP.
EnumerateResult enumerate_seeds(const Quiver& principal, const EnumerateOptions& opt);

}  // namespace workbench
