#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "wcl/patch.hpp"
#include "wcl/wrinkle.hpp"

using namespace wcl;
using Catch::Matchers::WithinAbs;

namespace {

// Unit normal to L_t at (u, x2): any vector orthogonal to both Jacobian rows.
Vec unit_normal(double u, double x2, double t, int pick) {
  const Eigen::MatrixXd J = jacobian(u, x2, t);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
  const Eigen::MatrixXd N = lu.kernel();
  Vec n = N.col(pick % N.cols());
  // Gram-Schmidt against the other kernel columns is unnecessary: any kernel vector is normal.
  return n / n.norm();
}

}  // namespace

TEST_CASE("front cubic roots solve the cubic", "[patch]") {
  for (double c : {-1.0, 0.0, 0.3, 1.0}) {
    for (double x1 : {-2.0, -0.1, 0.0, 0.5, 3.0}) {
      const auto roots = front_cubic_roots(c, x1);
      REQUIRE_FALSE(roots.empty());
      for (double u : roots) CHECK_THAT(u * u * u - 3 * c * u - x1, WithinAbs(0.0, 1e-9));
      // Three real roots exactly when 4c^3 > x1^2.
      if (4 * c * c * c > x1 * x1 + 1e-9) CHECK(roots.size() == 3);
    }
  }
}

TEST_CASE("projection of a lift point is itself", "[patch]") {
  for (double t : {-0.5, 0.0, 0.5}) {
    for (double u : {-1.3, -0.5, 0.4, 1.1}) {
      for (double x2 : {-0.6, 0.25, 0.8}) {
        const auto p = lift_family(u, x2, t);
        const auto proj = project_to_lift(p, t);
        CHECK(proj.distance < 1e-9);
        const auto q = lift_family(proj.u, proj.x2, t);
        CHECK((q.packed() - p.packed()).norm() < 1e-9);
        CHECK(proj.iterations <= 20);
      }
    }
  }
}

TEST_CASE("projection recovers normal offsets", "[patch][property]") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> U(-1.2, 1.2);
  std::uniform_real_distribution<double> D(0.01, 0.1);
  int checked = 0;
  for (int k = 0; k < 60; ++k) {
    const double u = U(rng), x2 = U(rng), t = 0.3;
    // Stay clear of the cusp edge, where the nearest point can jump branches.
    if (std::abs(u * u - (t - x2 * x2)) < 0.3) continue;
    const double d = D(rng);
    const Vec n = unit_normal(u, x2, t, k);
    const auto p = ContactPoint::unpack(lift_family(u, x2, t).packed() + d * n);
    const auto proj = project_to_lift(p, t);
    CHECK(proj.distance <= d + 1e-9);
    CHECK(proj.distance > 0.5 * d);
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("projection reports non-convergence", "[patch]") {
  ContactPoint p = ContactPoint::origin(2);
  p.x << 3.0, 2.0;
  p.y << -5.0, 7.0;
  p.z = 40.0;
  CHECK_THROWS_AS(project_to_lift(p, 0.0, nullptr, 1), ConvergenceError);
}

TEST_CASE("region layout in the parameter plane", "[patch]") {
  const PatchParams P;
  CHECK(region_of(0.0, 0.0, 0.0, P) == RegionTag::CoreDisc);
  CHECK(region_of(0.2, 0.05, 0.0, P) == RegionTag::CoreDisc);
  CHECK(region_of(0.5, 0.0, 0.0, P) == RegionTag::PosU);
  CHECK(region_of(-0.5, 0.9, 0.0, P) == RegionTag::NegU);
  CHECK(region_of(0.1, 0.6, 0.0, P) == RegionTag::OuterX2);
  CHECK(region_of(-0.2, -0.6, 0.0, P) == RegionTag::Blend);
  CHECK(region_of(0.5, 0.0, 0.4, P) == RegionTag::Far);
  CHECK(to_string(RegionTag::OuterX2) == "OUTER_X2");
  CHECK(to_string(RegionTag::CoreDisc) == "CORE_DISC");
}

TEST_CASE("extension restricts to alpha(X_t) on the Legendrian", "[patch][property]") {
  std::mt19937 rng(22);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  PatchParams P;
  for (double t : {-0.5, 0.0, 0.5}) {
    P.t = t;
    for (int k = 0; k < 40; ++k) {
      const double u = U(rng), x2 = U(rng);
      const auto p = lift_family(u, x2, t);
      const auto s = evaluate_extension(p, P);
      if (s.tag == RegionTag::CoreDisc) continue;
      CHECK_THAT(s.value, WithinAbs(alpha_Xt(u, x2, t), 1e-8));
    }
  }
}

TEST_CASE("branch formulas on the Legendrian", "[patch]") {
  const double t = 0.4;
  const auto p = lift_family(0.8, 0.5, t);
  CHECK_THAT(H_branch_u(p, t, +1), WithinAbs(alpha_Xt(0.8, 0.5, t), 1e-12));
  CHECK_THAT(H_outer(p, t), WithinAbs(alpha_Xt(0.8, 0.5, t), 1e-12));
  const auto m = lift_family(-0.8, 0.5, t);
  CHECK_THAT(H_branch_u(m, t, -1), WithinAbs(alpha_Xt(-0.8, 0.5, t), 1e-12));
  auto bad = p;
  bad.y(0) = -5.0;
  CHECK_THROWS_AS(H_branch_u(bad, t, 1), DomainError);
  auto axis = p;
  axis.x(1) = 0.0;
  CHECK_THROWS_AS(H_outer(axis, t), DomainError);
}

TEST_CASE("extension vanishes beyond the cut radius", "[patch]") {
  PatchParams P;
  P.t = 0.0;
  const double u = 0.9, x2 = 0.4;
  const Vec n = unit_normal(u, x2, P.t, 0);
  const Vec base = lift_family(u, x2, P.t).packed();
  const auto far = ContactPoint::unpack(base + 0.5 * n);
  const auto s = evaluate_extension(far, P);
  CHECK(s.tag == RegionTag::Far);
  CHECK(s.value == 0.0);
  CHECK(tube_taper(0.1, P) == 1.0);
  CHECK(tube_taper(0.4, P) == 0.0);
  const double mid = tube_taper(0.275, P);
  CHECK_THAT(mid, WithinAbs(0.5, 1e-12));
}

TEST_CASE("extension is continuous across the blend strip", "[patch]") {
  // Points just off L_t on either side of |u| = delta/2 and |u| = delta.
  PatchParams P;
  P.t = 0.2;
  const double x2 = 0.6;
  for (double ub : {P.delta / 2.0, P.delta}) {
    const double h = 1e-7;
    const Vec n = unit_normal(ub, x2, P.t, 0);
    const auto a = ContactPoint::unpack(lift_family(ub - h, x2, P.t).packed() + 0.05 * n);
    const auto b = ContactPoint::unpack(lift_family(ub + h, x2, P.t).packed() + 0.05 * n);
    CHECK(std::abs(H_ext(a, P) - H_ext(b, P)) < 1e-4);
  }
}

TEST_CASE("extension gradient matches a plain finite difference", "[patch]") {
  PatchParams P;
  P.t = 0.1;
  // POS_U, OUTER_X2 and BLEND (the last via the finite-difference path).
  for (auto [u, x2] : {std::pair{0.9, 0.5}, std::pair{0.05, 0.6}, std::pair{-0.2, -0.7}}) {
    const Vec n = unit_normal(u, x2, P.t, 1);
    const auto p = ContactPoint::unpack(lift_family(u, x2, P.t).packed() + 0.03 * n);
    const auto g = extension_gradient(p, P).gradient;
    const double h = 1e-5;
    for (int i = 0; i < 5; ++i) {
      Vec e = Vec::Zero(5);
      e(i) = h;
      const double fd = (H_ext(ContactPoint::unpack(p.packed() + e), P) - H_ext(ContactPoint::unpack(p.packed() - e), P)) /
                        (2 * h);
      const double an = i < 2 ? g.dx(i) : (i < 4 ? g.dy(i - 2) : g.dz);
      CHECK_THAT(an, WithinAbs(fd, 1e-6));
    }
  }
}

TEST_CASE("patch parameters are validated", "[patch]") {
  PatchParams P;
  P.rho_tube = 0.5;
  CHECK_THROWS_AS(P.validate(), DomainError);
}
