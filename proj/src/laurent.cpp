#include "workbench/laurent.hpp"

#include <sstream>

#include "workbench/errors.hpp"

namespace workbench {

namespace {

Expvec zero_exps(int nx, int ny) { return Expvec(static_cast<std::size_t>(nx + ny), 0); }

Expvec sub(const Expvec& a, const Expvec& b) {
  Expvec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Expvec add(const Expvec& a, const Expvec& b) {
  Expvec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

}  // namespace

Laurent Laurent::constant(int nx, int ny, const Coef& c) {
  Laurent r(nx, ny);
  if (c != 0) r.terms_[zero_exps(nx, ny)] = c;
  return r;
}

Laurent Laurent::x_var(int nx, int ny, int i) {
  require(i >= 1 && i <= nx, "x variable index out of range");
  Laurent r(nx, ny);
  Expvec e = zero_exps(nx, ny);
  e[static_cast<std::size_t>(i - 1)] = 1;
  r.terms_[e] = 1;
  return r;
}

Laurent Laurent::y_var(int nx, int ny, int j) {
  require(j >= 1 && j <= ny, "y variable index out of range");
  Laurent r(nx, ny);
  Expvec e = zero_exps(nx, ny);
  e[static_cast<std::size_t>(nx + j - 1)] = 1;
  r.terms_[e] = 1;
  return r;
}

Laurent Laurent::monomial(int nx, int ny, const Expvec& e, const Coef& c) {
  require(static_cast<int>(e.size()) == nx + ny, "exponent vector has wrong length");
  Laurent r(nx, ny);
  if (c != 0) r.terms_[e] = c;
  return r;
}

bool Laurent::is_one() const {
  return terms_.size() == 1 && terms_.begin()->second == 1 &&
         terms_.begin()->first == zero_exps(nx_, ny_);
}

void Laurent::prune(const Expvec& key) {
  auto it = terms_.find(key);
  if (it != terms_.end() && it->second == 0) terms_.erase(it);
}

Laurent& Laurent::operator+=(const Laurent& o) {
  require(nx_ == o.nx_ && ny_ == o.ny_, "variable counts differ in +");
  for (const auto& [e, c] : o.terms_) {
    terms_[e] += c;
    prune(e);
  }
  return *this;
}

Laurent& Laurent::operator-=(const Laurent& o) {
  require(nx_ == o.nx_ && ny_ == o.ny_, "variable counts differ in -");
  for (const auto& [e, c] : o.terms_) {
    terms_[e] -= c;
    prune(e);
  }
  return *this;
}

Laurent Laurent::operator+(const Laurent& o) const {
  Laurent r = *this;
  r += o;
  return r;
}

Laurent Laurent::operator-(const Laurent& o) const {
  Laurent r = *this;
  r -= o;
  return r;
}

Laurent Laurent::operator*(const Laurent& o) const {
  require(nx_ == o.nx_ && ny_ == o.ny_, "variable counts differ in *");
  Laurent r(nx_, ny_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Expvec e = add(ea, eb);
      auto& slot = r.terms_[e];
      slot += ca * cb;
      if (slot == 0) r.terms_.erase(e);
    }
  }
  return r;
}

Laurent Laurent::div_exact(const Laurent& num, const Laurent& den) {
  require(num.nx_ == den.nx_ && num.ny_ == den.ny_, "variable counts differ in /");
  require(!den.is_zero(), "division by zero polynomial");
  Laurent q(num.nx_, num.ny_);
  Laurent r = num;
  // Eliminate the lexicographically largest remaining term against the
  // divisor's largest term. Lex order is compatible with multiplication, so
  // each round strictly shrinks the remainder's leading term; the round count
  // is bounded by the quotient's support when the division is exact.
  const auto& dlead = *den.terms_.rbegin();
  std::size_t guard = 0;
  const std::size_t guard_max = 1'000'000;
  while (!r.is_zero()) {
    require(++guard <= guard_max, "non-exact Laurent division (guard exceeded)");
    const auto& rlead = *r.terms_.rbegin();
    Coef qc = rlead.second / dlead.second;
    require(qc * dlead.second == rlead.second,
            "non-exact Laurent division (coefficient not divisible)");
    Laurent t = monomial(num.nx_, num.ny_, sub(rlead.first, dlead.first), qc);
    q += t;
    r -= t * den;
  }
  return q;
}

std::string Laurent::text() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Coef a = c;
    if (first) {
      if (a < 0) {
        out << "-";
        a = -a;
      }
    } else {
      out << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    std::vector<std::string> factors;
    for (int i = 0; i < nx_ + ny_; ++i) {
      int32_t k = e[static_cast<std::size_t>(i)];
      if (k == 0) continue;
      std::string f = (i < nx_) ? "x" + std::to_string(i + 1) : "y" + std::to_string(i - nx_ + 1);
      if (k != 1) f += "^" + std::to_string(k);
      factors.push_back(f);
    }
    if (factors.empty()) {
      out << a.str();
    } else {
      if (a != 1) out << a.str() << "*";
      for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) out << "*";
        out << factors[i];
      }
    }
  }
  return out.str();
}

std::vector<int32_t> Laurent::min_x_exponents() const {
  require(!terms_.empty(), "min_x_exponents of zero polynomial");
  std::vector<int32_t> m(static_cast<std::size_t>(nx_), INT32_MAX);
  for (const auto& [e, c] : terms_)
    for (int i = 0; i < nx_; ++i) m[i] = std::min(m[i], e[static_cast<std::size_t>(i)]);
  return m;
}

std::vector<int32_t> Laurent::max_y_exponents() const {
  require(!terms_.empty(), "max_y_exponents of zero polynomial");
  std::vector<int32_t> m(static_cast<std::size_t>(ny_), INT32_MIN);
  for (const auto& [e, c] : terms_)
    for (int j = 0; j < ny_; ++j) m[j] = std::max(m[j], e[static_cast<std::size_t>(nx_ + j)]);
  return m;
}

Laurent Laurent::specialize_x_to_one() const {
  Laurent r(nx_, ny_);
  for (const auto& [e, c] : terms_) {
    Expvec y = zero_exps(nx_, ny_);
    for (int j = 0; j < ny_; ++j) y[static_cast<std::size_t>(nx_ + j)] = e[static_cast<std::size_t>(nx_ + j)];
    auto& slot = r.terms_[y];
    slot += c;
    if (slot == 0) r.terms_.erase(y);
  }
  return r;
}

std::optional<std::vector<int32_t>> Laurent::unique_y_free_term() const {
  std::optional<std::vector<int32_t>> found;
  for (const auto& [e, c] : terms_) {
    bool yfree = true;
    for (int j = 0; j < ny_ && yfree; ++j)
      if (e[static_cast<std::size_t>(nx_ + j)] != 0) yfree = false;
    if (!yfree) continue;
    if (found) return std::nullopt;
    found = std::vector<int32_t>(e.begin(), e.begin() + nx_);
  }
  return found;
}

bool Laurent::all_coeffs_positive() const {
  for (const auto& [e, c] : terms_)
    if (c <= 0) return false;
  return true;
}

}  // namespace workbench
