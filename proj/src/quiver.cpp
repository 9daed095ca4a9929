#include "workbench/quiver.hpp"

#include <sstream>

#include "workbench/errors.hpp"

namespace workbench {

void Quiver::add_arrow(int s, int t, int mult) {
  require_schema(s >= 1 && s <= n_ && t >= 1 && t <= n_, "arrow endpoint out of range");
  require(mult >= 0, "negative arrow multiplicity");
  if (mult == 0) return;
  arrows_[{s, t}] += mult;
}

int Quiver::count(int s, int t) const {
  auto it = arrows_.find({s, t});
  return it == arrows_.end() ? 0 : it->second;
}

void Quiver::validate() const {
  require_schema(n_ >= 0 && n_mutable_ >= 0 && n_mutable_ <= n_, "bad vertex counts");
  for (const auto& [st, m] : arrows_) {
    require_schema(st.first >= 1 && st.first <= n_ && st.second >= 1 && st.second <= n_,
                   "arrow endpoint out of range");
    require(m > 0, "non-positive arrow multiplicity");
    require(st.first != st.second, "quiver has a loop");
    require(count(st.second, st.first) == 0, "quiver has a 2-cycle");
  }
}

Quiver Quiver::framed(const Quiver& principal) {
  require(principal.n_ == principal.n_mutable_, "framed() expects a fully mutable quiver");
  int n = principal.n_;
  Quiver q(2 * n, n);
  for (const auto& [st, m] : principal.arrows_) q.arrows_[st] = m;
  for (int i = 1; i <= n; ++i) q.arrows_[{i, n + i}] = 1;
  return q;
}

void Quiver::mutate(int k) {
  require_schema(k >= 1 && k <= n_mutable_, "mutation vertex out of range");
  std::map<std::pair<int, int>, int> next;
  std::vector<std::pair<int, int>> in, out;  // (other vertex, multiplicity)
  for (const auto& [st, m] : arrows_) {
    if (st.second == k)
      in.push_back({st.first, m});
    else if (st.first == k)
      out.push_back({st.second, m});
    else
      next[st] += m;
  }
  // Paths i -> k -> j become arrows i -> j; arrows between frozen vertices
  // are discarded.
  for (const auto& [i, mi] : in)
    for (const auto& [j, mj] : out) {
      if (i > n_mutable_ && j > n_mutable_) continue;
      require(i != j, "mutation would create a loop");
      next[{i, j}] += mi * mj;
    }
  for (const auto& [i, m] : in) next[{k, i}] += m;
  for (const auto& [j, m] : out) next[{j, k}] += m;
  // Cancel 2-cycles.
  for (auto& [st, m] : next) {
    if (st.first >= st.second) continue;
    auto rev = next.find({st.second, st.first});
    if (rev == next.end()) continue;
    int c = std::min(m, rev->second);
    m -= c;
    rev->second -= c;
  }
  arrows_.clear();
  for (const auto& [st, m] : next)
    if (m > 0) arrows_[st] = m;
}

std::string Quiver::text() const {
  std::ostringstream out;
  out << n_ << ";" << n_mutable_ << ";";
  bool first = true;
  for (const auto& [st, m] : arrows_) {
    for (int i = 0; i < m; ++i) {
      if (!first) out << ",";
      first = false;
      out << st.first << "->" << st.second;
    }
  }
  return out.str();
}

}  // namespace workbench
