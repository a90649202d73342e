#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "wcl/wrinkle.hpp"

using namespace wcl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Independent oracle: the lift written out from the front by hand,
// y_i = dz/dx_i along the front, obtained from the chain rule on (u, x2).
Eigen::Matrix<double, 5, 1> oracle_lift(double u, double x2, double t) {
  const double c = t - x2 * x2;
  const double x1 = u * u * u - 3 * u * c;
  const double z = std::pow(u, 5) / 5 - 2.0 / 3.0 * std::pow(u, 3) * c + u * c * c;
  // z_u = y1 x1_u and z_x2 = y1 x1_x2 + y2.
  const double x1_u = 3 * u * u - 3 * c;
  const double z_u = std::pow(u, 4) - 2 * u * u * c + c * c;
  const double y1 = z_u / x1_u;  // (u^2 - c)/3 away from the cusp
  const double x1_x2 = 6 * u * x2;
  const double z_x2 = 4.0 / 3.0 * std::pow(u, 3) * x2 - 4 * u * c * x2;
  const double y2 = z_x2 - y1 * x1_x2;
  Eigen::Matrix<double, 5, 1> out;
  out << x1, x2, y1, y2, z;
  return out;
}

Vec packed_lift(double u, double x2, double t) { return lift_family(u, x2, t).packed(); }

}  // namespace

TEST_CASE("lift agrees with the chain-rule oracle", "[wrinkle]") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  for (int k = 0; k < 50; ++k) {
    const double u = U(rng), x2 = U(rng), t = U(rng) / 2;
    if (std::abs(u * u - (t - x2 * x2)) < 1e-2) continue;
    const auto o = oracle_lift(u, x2, t);
    const auto p = lift_family(u, x2, t);
    CHECK_THAT(p.x(0), WithinAbs(o(0), 1e-12));
    CHECK_THAT(p.x(1), WithinAbs(o(1), 1e-12));
    CHECK_THAT(p.y(0), WithinAbs(o(2), 1e-10));
    CHECK_THAT(p.y(1), WithinAbs(o(3), 1e-10));
    CHECK_THAT(p.z, WithinAbs(o(4), 1e-12));
  }
}

TEST_CASE("lift is Legendrian", "[wrinkle][property]") {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  const double h = 1e-6;
  for (int k = 0; k < 100; ++k) {
    const double u = U(rng), x2 = U(rng), t = U(rng) / 2;
    const auto p = lift_family(u, x2, t);
    const auto du = TangentVector::unpack((packed_lift(u + h, x2, t) - packed_lift(u - h, x2, t)) / (2 * h));
    const auto dx2 = TangentVector::unpack((packed_lift(u, x2 + h, t) - packed_lift(u, x2 - h, t)) / (2 * h));
    CHECK(std::abs(alpha_eval(p, du)) < 1e-6);
    CHECK(std::abs(alpha_eval(p, dx2)) < 1e-6);
    CHECK(std::abs(dalpha_eval(p, du, dx2)) < 1e-6);
  }
}

TEST_CASE("Jacobian matches finite differences", "[wrinkle]") {
  const double h = 1e-6;
  for (double t : {-0.4, 0.0, 0.7}) {
    for (double u : {-1.1, 0.2, 0.9}) {
      for (double x2 : {-0.8, 0.05, 0.6}) {
        const auto J = jacobian(u, x2, t);
        REQUIRE(J.rows() == 2);
        REQUIRE(J.cols() == 5);
        const Vec du = (packed_lift(u + h, x2, t) - packed_lift(u - h, x2, t)) / (2 * h);
        const Vec dx = (packed_lift(u, x2 + h, t) - packed_lift(u, x2 - h, t)) / (2 * h);
        CHECK((J.row(0).transpose() - du).norm() < 1e-7);
        CHECK((J.row(1).transpose() - dx).norm() < 1e-7);
      }
    }
  }
}

TEST_CASE("higher dimension adds inert identity rows", "[wrinkle]") {
  Vec slow(1);
  slow << 0.4;
  const auto p = lift_family(0.3, 0.2, 0.1, 3, slow);
  CHECK(p.dim() == 3);
  CHECK(p.x(2) == 0.4);
  CHECK(p.y(2) == 0.0);
  const auto J = jacobian(0.3, 0.2, 0.1, 3);
  CHECK(J.rows() == 3);
  CHECK(J.cols() == 7);
  CHECK(J(2, 2) == 1.0);
  CHECK(J.row(2).sum() == 1.0);
  CHECK_THROWS_AS(lift_family(0.3, 0.2, 0.1, 3, Vec::Zero(2)), DimensionMismatch);
}

TEST_CASE("isotopy field is the time derivative of the lift", "[wrinkle]") {
  const double h = 1e-6;
  for (double t : {-0.3, 0.4}) {
    for (double u : {-0.7, 0.5}) {
      for (double x2 : {-0.3, 0.9}) {
        const Vec fd = (packed_lift(u, x2, t + h) - packed_lift(u, x2, t - h)) / (2 * h);
        const auto X = isotopy_field_Xt(u, x2, t);
        CHECK((X.packed() - fd).norm() < 1e-7);
        const auto p = lift_family(u, x2, t);
        CHECK_THAT(alpha_eval(p, X), WithinAbs(alpha_Xt(u, x2, t), 1e-12));
      }
    }
  }
}

TEST_CASE("three formulas for alpha(X_t) agree on L_t", "[wrinkle][property]") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const double u = U(rng), x2 = U(rng), t = U(rng) / 2;
    const auto p = lift_family(u, x2, t);
    const double a = alpha_Xt(u, x2, t);
    CHECK_THAT(alpha_Xt_via_x1(u, x2, t), WithinAbs(a, 1e-10));
    if (std::abs(x2) > 1e-3) CHECK_THAT(-p.y(1) / (2 * p.x(1)), WithinAbs(a, 1e-9));
  }
}

TEST_CASE("u can be recovered from ambient coordinates", "[wrinkle]") {
  for (double u : {-1.2, -0.4, 0.3, 1.5}) {
    const double x2 = 0.35, t = 0.5;
    const auto p = lift_family(u, x2, t);
    const auto r = u_from_y1(p, t, u > 0 ? 1 : -1);
    REQUIRE(r.has_value());
    CHECK_THAT(*r, WithinAbs(u, 1e-12));
    const auto q = u_from_y2_x1(p, t);
    REQUIRE(q.has_value());
    CHECK_THAT(*q, WithinAbs(u, 1e-10));
  }
  auto p = lift_family(0.0, 0.0, -1.0);
  p.y(0) = -1.0;
  CHECK_FALSE(u_from_y1(p, -1.0, 1).has_value());
  const auto on_circle = lift_family(0.5, 0.5, 0.25);
  CHECK_FALSE(u_from_y2_x1(on_circle, 0.25).has_value());
}

TEST_CASE("singular locus is u = 0, x2 = +-sqrt(t)", "[wrinkle]") {
  for (double t : {0.25, 0.5, 1.0}) {
    const auto pts = singular_locus(t);
    REQUIRE(pts.size() == 2);
    CHECK_THAT(pts[0].u, WithinAbs(0.0, 1e-6));
    CHECK_THAT(pts[1].u, WithinAbs(0.0, 1e-6));
    CHECK_THAT(pts[0].x2(), WithinAbs(-std::sqrt(t), 1e-6));
    CHECK_THAT(pts[1].x2(), WithinAbs(std::sqrt(t), 1e-6));
  }
  CHECK(singular_locus(-0.5).empty());
}

TEST_CASE("rank drops exactly on the singular locus", "[wrinkle][property]") {
  const double t = 0.5;
  CHECK(smallest_singular_value(0.0, std::sqrt(t), t) < 1e-12);
  CHECK(smallest_singular_value(0.0, 0.0, t) > 1e-3);
  CHECK(smallest_singular_value(0.1, std::sqrt(t), t) > 1e-3);
}

TEST_CASE("static front matches the family at t = 1", "[wrinkle]") {
  Eigen::VectorXd v(1);
  v << 0.3;
  const auto W = front_static<double>(0.7, v);
  const auto F = front_family<double>(0.7, 0.3, 1.0);
  CHECK_THAT(W(1), WithinAbs(F(1), 1e-15));
  CHECK_THAT(W(2), WithinAbs(F(0), 1e-15));
}

TEST_CASE("chart validation", "[wrinkle]") {
  CHECK_NOTHROW(WrinkleChart::make(0.0).validate());
  WrinkleChart low;
  low.n = 1;
  CHECK_THROWS_AS(low.validate(), DomainError);
  auto c = WrinkleChart::make(0.0);
  c.t_birth = 0.6;
  CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("nested wrinkles", "[wrinkle]") {
  NestedConfig cfg;
  NestedWrinkle outer;
  outer.center = {0.0, 0.0};
  outer.core_radius = 0.05;
  outer.inner = {1};
  NestedWrinkle inner;
  inner.center = {0.02, 0.0};
  inner.core_radius = 0.2;
  cfg.wrinkles = {outer, inner};
  CHECK(validate_nested(cfg).pass);
  cfg.wrinkles[1].center = {0.3, 0.0};
  const auto res = validate_nested(cfg);
  CHECK_FALSE(res.pass);
  REQUIRE(res.violation.has_value());
  CHECK(res.violation->first == 0);
  CHECK(res.violation->second == 1);
  cfg.wrinkles[0].inner = {7};
  CHECK_THROWS(validate_nested(cfg));
}
