#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "wcl/push.hpp"
#include "wcl/wrinkle.hpp"

using namespace wcl;
using Catch::Matchers::WithinAbs;

namespace {

ContactPoint sample_point() {
  ContactPoint p = ContactPoint::origin(2);
  p.x << 0.3, -0.2;
  p.y << 0.15, 0.4;
  p.z = 0.05;
  return p;
}

TubeChart small_chart(double g) {
  TubeChart chart;
  chart.base = sample_point();
  chart.g = g;
  return chart;
}

}  // namespace

TEST_CASE("escape profile", "[push]") {
  EscapeProfile prof;
  CHECK(g_eval(0.0, prof) == prof.g_cap);
  CHECK(g_eval(-1.0, prof) == prof.g_cap);
  CHECK(g_eval(2.0, prof) == 0.0);
  CHECK(g_eval(-2.5, prof) == 0.0);
  CHECK_THAT(g_eval(1.5, prof), WithinAbs(prof.g_cap / 2, 1e-12));
  CHECK(g_eval(1.2, prof) > g_eval(1.4, prof));
  CHECK_THROWS_AS(g_eval(3.5, prof), DomainError);
}

TEST_CASE("isotropic path", "[push]") {
  const auto p = sample_point();
  CHECK(alpha_eval(p, gamma_velocity(p)) == 0.0);
  const double h = 1e-6;
  for (double tau : {0.0, 0.7, 3.0}) {
    const Vec d = (gamma(p, tau + h).packed() - gamma(p, tau - h).packed()) / (2 * h);
    CHECK((d - gamma_velocity(gamma(p, tau)).packed()).norm() < 1e-8);
    CHECK(alpha_eval(gamma(p, tau), gamma_velocity(p)) == 0.0);
  }
}

TEST_CASE("cutoff profiles", "[push]") {
  const double eps = 0.1;
  const CutoffTriple C(eps);
  CHECK(C.phi(0.0) == 1.0);
  CHECK(C.phi(eps / 4) == 1.0);
  CHECK(C.phi(3 * eps / 4) == 0.0);
  CHECK(C.f(0.0, 5.0) == 1.0);
  CHECK(C.f(5.0, 5.0) == 1.0);
  CHECK(C.f(-eps / 2, 5.0) == 0.0);
  CHECK(C.f(5.0 + eps / 2, 5.0) == 0.0);
  CHECK(C.psi(0.0) == 0.0);
  CHECK(C.dpsi(0.0) == 1.0);
  CHECK(C.psi(3 * eps / 4) == 0.0);
  CHECK(C.dpsi(0.9 * eps) == 0.0);
  const double h = 1e-7;
  double max_dphi = 0.0;
  for (int k = 0; k <= 200; ++k) {
    const double r = eps * k / 200.0;
    max_dphi = std::max(max_dphi, std::abs(C.dphi(r)));
    CHECK_THAT(C.dphi(r), WithinAbs((C.phi(r + h) - C.phi(r - h)) / (2 * h), 1e-5));
    const double s = -eps + 2 * eps * k / 200.0;
    CHECK_THAT(C.psi(-s), WithinAbs(-C.psi(s), 1e-15));
    CHECK_THAT(C.dpsi(s), WithinAbs((C.psi(s + h) - C.psi(s - h)) / (2 * h), 1e-5));
    const double tau = -eps + (1.0 + 2 * eps) * k / 200.0;
    CHECK_THAT(C.df(tau, 1.0), WithinAbs((C.f(tau + h, 1.0) - C.f(tau - h, 1.0)) / (2 * h), 1e-4));
  }
  CHECK(max_dphi <= 4.0 / eps);
  CHECK_THROWS_AS(CutoffTriple(0.0), DomainError);
}

TEST_CASE("tube coordinates round trip", "[push]") {
  const auto chart = small_chart(2.0);
  Vec phase(4);
  phase << 0.5, -0.15, 0.17, 0.38;
  const auto c = chart.to_tube(phase);
  CHECK_THAT(c.tau, WithinAbs(0.2, 1e-15));
  CHECK((chart.from_tube(c) - phase).norm() < 1e-15);
  CHECK(chart.in_domain(c));
  CHECK_THROWS_AS(chart.to_tube(Vec::Zero(3)), DimensionMismatch);
}

TEST_CASE("X_G is the Hamiltonian field of G", "[push][property]") {
  // dx ^ dy (X_G, w) = dG(w), checked against a finite-difference dG.
  const auto chart = small_chart(2.0);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> U(-0.06, 0.06);
  std::uniform_real_distribution<double> T(-0.06, 2.06);
  const Vec base = lagrangian_projection(chart.base);
  const double h = 1e-7;
  for (int k = 0; k < 50; ++k) {
    Vec phase = base;
    phase(0) += T(rng);
    phase(1) += U(rng);
    phase(2) += U(rng);
    phase(3) += U(rng);
    const Vec X = XG_field(chart, phase);
    Vec w(4);
    w << U(rng), U(rng), U(rng), U(rng);
    const double dG = (chart.G(phase + h * w) - chart.G(phase - h * w)) / (2 * h);
    const double omega = X(0) * w(2) + X(1) * w(3) - X(2) * w(0) - X(3) * w(1);
    CHECK_THAT(omega, WithinAbs(dG, 1e-6));
  }
}

TEST_CASE("core of the tube is pushed a distance g", "[push]") {
  for (double g : {1.0, 4.0}) {
    const auto chart = small_chart(g);
    const Vec start = lagrangian_projection(chart.base);
    FlowOptions opts;
    opts.step = 1e-2;
    const Vec end = XG_flow(chart, start, g, opts);
    CHECK_THAT(end(0) - start(0), WithinAbs(g, 1e-9));
    CHECK((end.tail(3) - start.tail(3)).norm() < 1e-12);
    const auto lifted = contact_lift_flow(chart, chart.base, g, opts);
    // Along the core the lift follows gamma exactly.
    CHECK((lifted.packed() - gamma(chart.base, g).packed()).norm() < 1e-9);
  }
}

TEST_CASE("flow conserves G and is identity off the tube", "[push]") {
  const auto chart = small_chart(1.0);
  Vec start = lagrangian_projection(chart.base);
  start(2) += 0.03;
  start(1) += 0.02;
  FlowOptions opts;
  opts.step = 1e-3;
  const Vec end = XG_flow(chart, start, 1.0, opts);
  CHECK_THAT(chart.G(end), WithinAbs(chart.G(start), 1e-9));
  Vec off = start;
  off(1) += 1.0;
  CHECK(XG_flow(chart, off, 1.0, opts) == off);
}

TEST_CASE("contact lift projects to the downstairs flow", "[push][property]") {
  const auto chart = small_chart(1.5);
  FlowOptions opts;
  opts.step = 5e-3;
  std::mt19937 rng(32);
  std::uniform_real_distribution<double> U(-0.04, 0.04);
  for (int k = 0; k < 5; ++k) {
    ContactPoint p = chart.base;
    p.x(0) += U(rng);
    p.x(1) += U(rng);
    p.y(0) += U(rng);
    p.y(1) += U(rng);
    p.z += U(rng);
    const auto up = contact_lift_flow(chart, p, 1.5, opts);
    const Vec down = XG_flow(chart, lagrangian_projection(p), 1.5, opts);
    CHECK((lagrangian_projection(up) - down).norm() < 1e-10);
  }
}

TEST_CASE("push map is a strict contactomorphism", "[push][property]") {
  // K is z-independent, so the conformal factor is identically one.
  const auto chart = small_chart(2.0);
  FlowOptions opts;
  opts.step = 1e-2;
  const auto Psi = push_map(chart, opts);
  ContactPoint p = chart.base;
  p.y(0) += 0.01;
  p.x(1) += 0.015;
  std::vector<TangentVector> probes{TangentVector::d_z(2), TangentVector::d_x(2, 0), TangentVector::d_x(2, 1)};
  const auto m = measure_lambda(Psi, p, probes, 1e-6);
  CHECK(m.probes_used == 3);
  CHECK_THAT(m.lambda, WithinAbs(1.0, 1e-6));
  CHECK(m.spread < 1e-5);
  CHECK_THROWS_AS(measure_lambda(Psi, p, {TangentVector::d_y(2, 0)}), DomainError);
}

TEST_CASE("clearance picks a direction", "[push]") {
  ClearanceChart chart;
  chart.resolution = 61;
  chart.tau_samples = 100;
  const auto p = lift_family(1.8, 0.0, chart.t);
  const auto c = gamma_clearance(p, 3.0, chart);
  CHECK(c.direction == 1);
  CHECK(c.clearance >= chart.threshold);
}

TEST_CASE("clearance flips to the reversed path when forward comes close", "[push]") {
  ClearanceChart chart;
  chart.resolution = 61;
  chart.tau_samples = 100;
  chart.threshold = 0.5;
  const auto p = lift_family(-1.4, 0.0, chart.t);
  const auto c = gamma_clearance(p, 3.0, chart);
  CHECK(c.forward < chart.threshold);
  CHECK(c.direction == -1);
  chart.threshold = 100.0;
  CHECK_THROWS_AS(gamma_clearance(p, 3.0, chart), ConsistencyError);
}
