#include <doctest.h>

#include <stdexcept>

#include "probcon/constraints.hpp"
#include "probcon/rng.hpp"

using namespace probcon;

namespace {
Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST_CASE("ordering builds e_i - e_j half-spaces") {
  LinearConstraint c = ordering(0, 1, 2);
  CHECK(c.a[0] == 1.0);
  CHECK(c.a[1] == -1.0);
  CHECK(c.b == 0.0);

  LinearConstraint r = ordering(1, 0, 2);
  CHECK(r.a[0] == -1.0);
  CHECK(r.a[1] == 1.0);

  // chain theta_0 <= theta_1 <= theta_2
  Eigen::VectorXd theta(3);
  theta << 0.2, 0.3, 0.5;
  CHECK(ordering(0, 1, 3).is_satisfied(theta));
  CHECK(ordering(1, 2, 3).is_satisfied(theta));

  CHECK_THROWS_AS(ordering(0, 2, 2), std::out_of_range);
  CHECK_THROWS_AS(ordering(1, 1, 3), std::invalid_argument);
}

TEST_CASE("box, sum band and difference builders match their inequalities") {
  auto b = box(0, -1.0, 1.0, 2);
  CHECK(b[0].a[0] == -1.0);
  CHECK(b[0].b == 1.0); // -theta_0 <= 1
  CHECK(b[1].a[0] == 1.0);
  CHECK(b[1].b == 1.0); // theta_0 <= 1
  CHECK_THROWS_AS(box(0, 2.0, 1.0, 2), std::domain_error);

  auto s = sum_band(0.9, 1.1, {0, 1}, 2);
  CHECK(s[0].slack(vec2(0.5, 0.5)) == doctest::Approx(0.1)); // -0.9 - (-1.0)
  CHECK(s[1].slack(vec2(0.5, 0.5)) == doctest::Approx(0.1));
  CHECK_FALSE(s[0].is_satisfied(vec2(0.3, 0.4))); // sum below 0.9

  auto d = difference_upper(0, 1, 0.5, 2);
  CHECK(d[0].is_satisfied(vec2(0.3, 0.1)));
  CHECK(d[1].is_satisfied(vec2(0.3, 0.1)));
  CHECK_FALSE(d[0].is_satisfied(vec2(0.9, 0.1)));

  CHECK_THROWS_AS(difference_band(0, 1, 0.2, 0.5, 2), std::invalid_argument);
  auto ok = difference_band(0, 1, -1.0, 0.5, 2);
  CHECK(ok[0].b == 0.5);
}

TEST_CASE("slack and satisfaction follow the closed half-space convention") {
  LinearConstraint c(vec2(1.0, -1.0), 0.0);
  CHECK(c.slack(vec2(0.3, 0.7)) == doctest::Approx(0.4));
  CHECK(c.is_satisfied(vec2(0.3, 0.7)));
  CHECK(c.slack(vec2(0.7, 0.3)) == doctest::Approx(-0.4));
  CHECK_FALSE(c.is_satisfied(vec2(0.7, 0.3)));
  CHECK(c.slack(vec2(0.5, 0.5)) == 0.0);
  CHECK(c.is_satisfied(vec2(0.5, 0.5))); // boundary counts

  Eigen::VectorXd theta3 = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(c.slack(theta3), std::invalid_argument);

  LinearConstraint zero(Eigen::VectorXd::Zero(2), 1.0);
  CHECK(zero.is_degenerate());
  CHECK_FALSE(LinearConstraint(vec2(1.0, 0.0), 1.0).is_degenerate());
}

TEST_CASE("builders round-trip against the semantic inequality on random points") {
  RngHandle rng(31);
  for (int t = 0; t < 1000; ++t) {
    Eigen::VectorXd theta(3);
    for (int i = 0; i < 3; ++i) theta[i] = rng.uniform(-2.0, 2.0);

    CHECK(ordering(0, 2, 3).is_satisfied(theta) == (theta[0] <= theta[2]));

    auto b = box(1, -0.5, 0.8, 3);
    bool in_box = theta[1] >= -0.5 && theta[1] <= 0.8;
    CHECK((b[0].is_satisfied(theta) && b[1].is_satisfied(theta)) == in_box);

    auto s = sum_band(-1.0, 1.0, {0, 1, 2}, 3);
    bool in_band = theta.sum() >= -1.0 && theta.sum() <= 1.0;
    CHECK((s[0].is_satisfied(theta) && s[1].is_satisfied(theta)) == in_band);

    auto d = difference_upper(0, 1, 0.7, 3);
    bool in_diff = std::abs(theta[0] - theta[1]) <= 0.7;
    CHECK((d[0].is_satisfied(theta) && d[1].is_satisfied(theta)) == in_diff);
  }
}

TEST_CASE("constraint sets enforce one dimension and conjoin membership") {
  ConstraintSet cs;
  cs.add(ordering(0, 1, 3), 0.9);
  cs.add(ordering(1, 2, 3), 0.8);
  CHECK(cs.size() == 2);
  CHECK(cs.dimension() == 3);
  CHECK_THROWS_AS(cs.add(ordering(0, 1, 2), 0.9), std::invalid_argument);
  CHECK_THROWS_AS(cs.add(ordering(0, 1, 3), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(cs.add(ordering(0, 1, 3), 0.0), std::invalid_argument);

  Eigen::VectorXd good(3), bad(3);
  good << 0.1, 0.2, 0.7;
  bad << 0.2, 0.1, 0.7;
  CHECK(cs.hard_satisfied_by(good));
  CHECK_FALSE(cs.hard_satisfied_by(bad));

  RngHandle rng(8);
  for (int t = 0; t < 200; ++t) {
    Eigen::VectorXd theta(3);
    for (int i = 0; i < 3; ++i) theta[i] = rng.uniform(-1.0, 1.0);
    bool conj = true;
    for (const auto& pc : cs) conj = conj && pc.linear.is_satisfied(theta);
    CHECK(cs.hard_satisfied_by(theta) == conj);
  }
}

TEST_CASE("constraint sets serialize through the config format") {
  ConstraintSet cs;
  cs.add(ordering(0, 1, 2), 0.95);
  cs.add(LinearConstraint(vec2(0.25, -1.5), 0.125), 0.75);

  ConstraintSet back = constraint_set_from_json(to_json(cs));
  REQUIRE(back.size() == cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    CHECK(back[i].linear.a == cs[i].linear.a);
    CHECK(back[i].linear.b == cs[i].linear.b);
    CHECK(back[i].eta == cs[i].eta);
  }
  CHECK_THROWS(constraint_set_from_json("{\"not\": \"an array\"}"));
  CHECK_THROWS(constraint_set_from_json("[{\"b\": 1.0}]"));
}
