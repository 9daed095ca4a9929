#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace workbench {

using Coef = boost::multiprecision::cpp_int;

// Exponent vector of one monomial: x-exponents first, then y-exponents.
// x-exponents may be negative (Laurent), y-exponents stay nonnegative in
// cluster computations but the type does not enforce that.
using Expvec = std::vector<int32_t>;

// Sparse Laurent polynomial in x1..x_nx and y1..y_ny with exact integer
// coefficients. Terms live in a map keyed by exponent vector; the map's
// ascending lexicographic key order doubles as the canonical term order used
// for rendering, so equal polynomials always print identically.
class Laurent {
 public:
  Laurent() = default;
  Laurent(int nx, int ny) : nx_(nx), ny_(ny) {}

  static Laurent constant(int nx, int ny, const Coef& c);
  // 1-based variable indices, matching the x1/y1 naming used everywhere.
  static Laurent x_var(int nx, int ny, int i);
  static Laurent y_var(int nx, int ny, int j);
  static Laurent monomial(int nx, int ny, const Expvec& e, const Coef& c);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  std::size_t term_count() const { return terms_.size(); }
  const std::map<Expvec, Coef>& terms() const { return terms_; }

  Laurent& operator+=(const Laurent& o);
  Laurent& operator-=(const Laurent& o);
  Laurent operator+(const Laurent& o) const;
  Laurent operator-(const Laurent& o) const;
  Laurent operator*(const Laurent& o) const;
  bool operator==(const Laurent& o) const = default;

  // Exact division: returns num / den, throwing InvariantError when den does
  // not divide num exactly in the Laurent ring.
  static Laurent div_exact(const Laurent& num, const Laurent& den);

  // Canonical text: terms in ascending lexicographic exponent order, factors
  // x1..x_nx then y1..y_ny, "^k" omitted for k=1, unit coefficients omitted,
  // terms joined by " + " (or " - " for negative coefficients). Zero is "0".
  std::string text() const;

  // Componentwise minimum of the x-exponents over all terms. Requires a
  // nonzero polynomial.
  std::vector<int32_t> min_x_exponents() const;
  // Componentwise maximum of the y-exponents over all terms.
  std::vector<int32_t> max_y_exponents() const;
  // Collapse x-variables to 1, merging terms by y-exponents.
  Laurent specialize_x_to_one() const;
  // The x-exponents of the unique term free of y-variables, if exactly one
  // such term exists.
  std::optional<std::vector<int32_t>> unique_y_free_term() const;
  bool all_coeffs_positive() const;

 private:
  void prune(const Expvec& key);

  int nx_ = 0;
  int ny_ = 0;
  std::map<Expvec, Coef> terms_;
};

}  // namespace workbench
