#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "workbench/errors.hpp"
#include "workbench/laurent.hpp"

using workbench::Coef;
using workbench::Expvec;
using workbench::InvariantError;
using workbench::Laurent;

TEST_CASE("canonical text ordering and formatting") {
  // x1^-1*x2^2*y1 + 3*y2  (two x's, two y's)
  Laurent a = Laurent::monomial(2, 2, {-1, 2, 1, 0}, 1);
  Laurent b = Laurent::monomial(2, 2, {0, 0, 0, 1}, 3);
  CHECK((a + b).text() == "x1^-1*x2^2*y1 + 3*y2");
  CHECK((b + a).text() == "x1^-1*x2^2*y1 + 3*y2");

  CHECK(Laurent::constant(2, 2, 1).text() == "1");
  CHECK(Laurent::constant(2, 2, -7).text() == "-7");
  CHECK(Laurent(2, 2).text() == "0");
  CHECK(Laurent::x_var(2, 2, 2).text() == "x2");
  CHECK(Laurent::y_var(2, 2, 1).text() == "y1");
  CHECK(Laurent::monomial(2, 2, {0, 1, 0, 0}, -2).text() == "-2*x2");

  // Exponent-vector order, not string order: the constant term (all zero
  // exponents) sorts after negative exponents and before positive ones.
  Laurent c = Laurent::monomial(1, 0, {-1}, 1) + Laurent::constant(1, 0, 5) +
              Laurent::monomial(1, 0, {2}, 1);
  CHECK(c.text() == "x1^-1 + 5 + x1^2");
}

TEST_CASE("arithmetic basics") {
  Laurent x1 = Laurent::x_var(2, 0, 1);
  Laurent x2 = Laurent::x_var(2, 0, 2);
  CHECK(((x1 + x2) * (x1 - x2)).text() == "-x2^2 + x1^2");
  CHECK((x1 - x1).is_zero());
  Laurent p = (x1 + x2) * (x1 + x2);
  CHECK(p.text() == "x2^2 + 2*x1*x2 + x1^2");
  CHECK(p.term_count() == 3);
}

TEST_CASE("exact division round trips") {
  Laurent x1 = Laurent::x_var(2, 1, 1);
  Laurent x2 = Laurent::x_var(2, 1, 2);
  Laurent y1 = Laurent::y_var(2, 1, 1);
  Laurent a = x1 + x2 * y1;
  Laurent b = Laurent::monomial(2, 1, {-3, 2, 1}, 4) + x1 * x2;
  CHECK(Laurent::div_exact(a * b, a) == b);
  CHECK(Laurent::div_exact(a * b, b) == a);
  CHECK(Laurent::div_exact(a, a).is_one());

  // Dividing by a monomial shifts exponents (Laurent, so negatives are fine).
  Laurent m = Laurent::monomial(2, 1, {2, 0, 0}, 1);
  CHECK(Laurent::div_exact(a, m).text() == "x1^-2*x2*y1 + x1^-1");
}

TEST_CASE("non-exact division throws") {
  Laurent x1 = Laurent::x_var(2, 0, 1);
  Laurent x2 = Laurent::x_var(2, 0, 2);
  Laurent one = Laurent::constant(2, 0, 1);
  CHECK_THROWS_AS((void)Laurent::div_exact(x1 + one, x2 + one), InvariantError);
  CHECK_THROWS_AS((void)Laurent::div_exact(x1 + x2, Laurent::constant(2, 0, 2)),
                  InvariantError);
}

TEST_CASE("analysis helpers") {
  // (1 + x2*y1)/x1 as a Laurent polynomial.
  Laurent v = Laurent::monomial(2, 2, {-1, 0, 0, 0}, 1) +
              Laurent::monomial(2, 2, {-1, 1, 1, 0}, 1);
  CHECK(v.text() == "x1^-1 + x1^-1*x2*y1");
  CHECK(v.min_x_exponents() == std::vector<int32_t>{-1, 0});
  CHECK(v.max_y_exponents() == std::vector<int32_t>{1, 0});
  Laurent s = v.specialize_x_to_one();
  CHECK(s.text() == "1 + y1");
  CHECK(s.all_coeffs_positive());
  auto g = v.unique_y_free_term();
  REQUIRE(g.has_value());
  CHECK(*g == std::vector<int32_t>{-1, 0});

  // Two coefficient-free terms: no unique one.
  Laurent w = Laurent::x_var(2, 2, 1) + Laurent::x_var(2, 2, 2);
  CHECK_FALSE(w.unique_y_free_term().has_value());
}
