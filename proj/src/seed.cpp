#include "workbench/seed.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "workbench/errors.hpp"

namespace workbench {

std::string Seed::cluster_key() const {
  std::vector<std::string> texts;
  texts.reserve(x.size());
  for (const auto& v : x) texts.push_back(v.text());
  std::sort(texts.begin(), texts.end());
  std::ostringstream out;
  for (const auto& t : texts) out << t << '|';
  return out.str();
}

std::string Seed::seed_key() const { return cluster_key() + "#" + q.text(); }

Seed initial_seed(const Quiver& principal) {
  principal.validate();
  int n = principal.n();
  Seed s;
  s.q = Quiver::framed(principal);
  s.x.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) s.x.push_back(Laurent::x_var(n, n, i));
  return s;
}

void mutate_seed(Seed& s, int k) {
  int n = s.rank();
  require_schema(k >= 1 && k <= n, "mutation index out of range");
  Laurent in_prod = Laurent::constant(n, n, 1);
  Laurent out_prod = Laurent::constant(n, n, 1);
  for (const auto& [st, m] : s.q.arrows()) {
    const Laurent* factor = nullptr;
    Laurent y;
    int other = 0;
    bool into_k = (st.second == k);
    bool out_of_k = (st.first == k);
    if (!into_k && !out_of_k) continue;
    other = into_k ? st.first : st.second;
    if (other <= n) {
      factor = &s.x[static_cast<std::size_t>(other - 1)];
    } else {
      y = Laurent::y_var(n, n, other - n);
      factor = &y;
    }
    for (int i = 0; i < m; ++i) {
      if (into_k)
        in_prod = in_prod * (*factor);
      else
        out_prod = out_prod * (*factor);
    }
  }
  Laurent num = in_prod + out_prod;
  s.x[static_cast<std::size_t>(k - 1)] =
      Laurent::div_exact(num, s.x[static_cast<std::size_t>(k - 1)]);
  s.q.mutate(k);
}

std::vector<int32_t> f_vector(const Laurent& v) {
  Laurent spec = v.specialize_x_to_one();
  require(spec.all_coeffs_positive(),
          "specialization x -> 1 produced non-positive coefficients");
  return spec.max_y_exponents();
}

VarReport report_variable(const Laurent& v) {
  VarReport r;
  r.text = v.text();
  r.n_terms = v.term_count();
  auto mins = v.min_x_exponents();
  r.d.reserve(mins.size());
  for (int32_t m : mins) r.d.push_back(-m);
  r.f = f_vector(v);
  auto g = v.unique_y_free_term();
  require(g.has_value(), "variable lacks a unique coefficient-free term");
  r.g = *g;
  return r;
}

EnumerateResult enumerate_seeds(const Quiver& principal, const EnumerateOptions& opt) {
  EnumerateResult res;
  int n = principal.n();
  Seed root = initial_seed(principal);

  std::unordered_set<std::string> seen_seeds;
  std::unordered_map<std::string, int> var_index;
  std::unordered_set<std::string> seen_clusters;

  auto record_seed = [&](const Seed& s) {
    std::vector<int> members;
    members.reserve(s.x.size());
    for (const auto& v : s.x) {
      std::string t = v.text();
      auto [it, fresh] = var_index.try_emplace(t, static_cast<int>(res.variable_texts.size()));
      if (fresh) res.variable_texts.push_back(t);
      members.push_back(it->second);
    }
    std::sort(members.begin(), members.end());
    std::ostringstream key;
    for (int m : members) key << m << ',';
    if (seen_clusters.insert(key.str()).second) res.cluster_members.push_back(members);
  };

  std::vector<Seed> frontier{root};
  seen_seeds.insert(root.seed_key());
  record_seed(root);
  res.seeds_visited = 1;
  res.depth_counts.push_back(1);

  int depth = 0;
  bool capped = false;
  while (!frontier.empty()) {
    if (opt.max_depth >= 0 && depth >= opt.max_depth) break;
    ++depth;
    std::size_t jobs = frontier.size() * static_cast<std::size_t>(n);
    std::vector<Seed> children(jobs);
    std::vector<char> ok(jobs, 0);
    // Each child mutation is independent; the merge below is serial and runs
    // in job order, so the outcome does not depend on the schedule.
    if (opt.parallel) {
#pragma omp parallel for schedule(dynamic)
      for (long long ji = 0; ji < static_cast<long long>(jobs); ++ji) {
        auto j = static_cast<std::size_t>(ji);
        Seed child = frontier[j / static_cast<std::size_t>(n)];
        mutate_seed(child, static_cast<int>(j % static_cast<std::size_t>(n)) + 1);
        children[j] = std::move(child);
        ok[j] = 1;
      }
    } else {
      for (std::size_t j = 0; j < jobs; ++j) {
        Seed child = frontier[j / static_cast<std::size_t>(n)];
        mutate_seed(child, static_cast<int>(j % static_cast<std::size_t>(n)) + 1);
        children[j] = std::move(child);
        ok[j] = 1;
      }
    }
    std::vector<Seed> next;
    std::size_t found = 0;
    for (std::size_t j = 0; j < jobs; ++j) {
      require(ok[j] == 1, "frontier expansion incomplete");
      if (res.seeds_visited >= opt.seed_cap) {
        capped = true;
        break;
      }
      Seed& child = children[j];
      if (!seen_seeds.insert(child.seed_key()).second) continue;
      record_seed(child);
      ++res.seeds_visited;
      ++found;
      next.push_back(std::move(child));
    }
    if (found) res.depth_counts.push_back(found);
    frontier = std::move(next);
    if (capped) break;
  }
  res.closed = frontier.empty() && !capped;
  res.clusters = res.cluster_members.size();
  return res;
}

}  // namespace workbench
