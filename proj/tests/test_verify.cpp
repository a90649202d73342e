#include <catch_amalgamated.hpp>

#include <cmath>

#include "wcl/errors.hpp"
#include "wcl/verify.hpp"
#include "wcl/wrinkle.hpp"

using namespace wcl;
using Catch::Matchers::WithinAbs;

namespace {

// L_t x [v0, v1] sampled directly, spacing h in a and b.
MeshedLagrangian cylinder(double t, int N, int Nv, double v0 = -1.0, double v1 = 1.0) {
  MeshedLagrangian m;
  m.Na = m.Nb = N;
  m.Nv = Nv;
  m.a0 = -0.2;
  m.a1 = 0.2;
  m.b0 = 0.6;
  m.b1 = 1.0;
  m.v0 = v0;
  m.v1 = v1;
  m.nodes.resize(static_cast<std::size_t>(N) * N * Nv);
  m.flags.assign(m.nodes.size(), NodeOk);
  for (int k = 0; k < Nv; ++k) {
    for (int j = 0; j < N; ++j) {
      for (int i = 0; i < N; ++i) {
        Vec node(6);
        node << lift_family(m.a(i), m.b(j), t).packed(), m.v(k);
        m.nodes[m.index(i, j, k)] = node;
      }
    }
  }
  return m;
}

ReportEntry sample_entry() {
  ReportEntry e;
  e.name = "lagrangian";
  e.residual = 1.0 / 3.0;
  e.tolerance = 1e-5;
  e.samples = 42;
  e.order = 1.9876543210123;
  e.pass = false;
  e.truncated = 3;
  e.raw_residual = 2.5e-7;
  e.floor = false;
  e.note = "max |omega|, order 2";
  return e;
}

}  // namespace

TEST_CASE("report serialization round-trips", "[verify]") {
  VerificationReport r;
  r.title = "wcl verify";
  r.meta = {{"seed", "7"}, {"T", "0.2"}};
  r.entries.push_back(sample_entry());
  ReportEntry e2 = sample_entry();
  e2.name = "ends";
  e2.order.reset();
  e2.pass = true;
  e2.floor = true;
  e2.residual = 1e-300;
  r.entries.push_back(e2);

  const std::string text = r.serialize();
  CHECK(text.rfind("# wcl-report 1\n", 0) == 0);
  const auto back = VerificationReport::parse(text);
  CHECK(back == r);
  CHECK(back.serialize() == text);
  CHECK_FALSE(r.all_pass());
  REQUIRE(r.find("ends") != nullptr);
  CHECK(r.find("ends")->pass);
  CHECK(r.find("missing") == nullptr);
  CHECK(text.find("order = NA") != std::string::npos);

  CHECK_THROWS_AS(VerificationReport::parse("not a report"), DomainError);
  CHECK_THROWS_AS(VerificationReport::parse("# wcl-report 1\n[entry]\nresidual = abc\n"), DomainError);
  CHECK_THROWS_AS(VerificationReport::parse("# wcl-report 1\n[entry]\nbogus = 1\n"), DomainError);
}

TEST_CASE("convergence study", "[verify]") {
  const std::vector<double> hs{0.1, 0.05, 0.025};
  const auto quadratic = convergence_study({3e-2, 7.5e-3, 1.875e-3}, hs);
  REQUIRE(quadratic.order.has_value());
  CHECK_THAT(*quadratic.order, WithinAbs(2.0, 1e-12));
  CHECK_FALSE(quadratic.floor);

  const auto zero = convergence_study({0.0, 0.0, 0.0}, hs);
  CHECK_FALSE(zero.order.has_value());

  const auto noisy = convergence_study({3e-15, 4e-15, 5e-15}, hs);
  CHECK(noisy.floor);
  REQUIRE(noisy.order.has_value());
  CHECK(std::abs(*noisy.order) < 0.5);

  CHECK_THROWS_AS(convergence_study({1e-3, 1e-4}, {0.1, 0.05}), DomainError);
}

TEST_CASE("Legendrian check", "[verify]") {
  const auto clean = check_legendrian(lift_samples(0.5, 41), 1e-10);
  CHECK(clean.pass);
  CHECK(clean.residual < 1e-10);
  CHECK(clean.samples > 0);

  const auto noisy = check_legendrian(perturbed_lift_samples(0.5, 41, 1e-3, 7), 1e-10);
  CHECK_FALSE(noisy.pass);
  CHECK(noisy.residual > 1e-4);
  CHECK(noisy.residual < 1e-2);
  CHECK(perturbed_lift_samples(0.5, 11, 1e-3, 7)[5].p.z == perturbed_lift_samples(0.5, 11, 1e-3, 7)[5].p.z);

  FramedSample degenerate{ContactPoint::origin(2), {TangentVector::zero(2)}};
  const auto single = check_legendrian({degenerate}, 1e-10);
  CHECK(single.residual == 0.0);
  CHECK(single.note.find("degenerate") != std::string::npos);
}

TEST_CASE("mesh ladder", "[verify]") {
  const auto m = cylinder(0.5, 17, 9);
  const auto ladder = mesh_ladder(m, 3);
  REQUIRE(ladder.size() == 3);
  CHECK(ladder[0].Na == 5);
  CHECK(ladder[0].Nv == 3);
  CHECK(ladder[1].Na == 9);
  CHECK(ladder[2].Na == 17);
  CHECK((ladder[0].nodes[ladder[0].index(1, 1, 1)] - m.nodes[m.index(4, 4, 4)]).norm() == 0.0);
}

TEST_CASE("cylinder over a Legendrian is exact Lagrangian", "[verify]") {
  // Spacing 0.1, 0.05, 0.025 across the ladder.
  const auto m = cylinder(0.5, 17, 17, -0.2, 0.2);
  const auto lag = check_lagrangian(m, 1e-5);
  CHECK(lag.pass);
  CHECK(lag.residual < 1e-10);
  REQUIRE(lag.order.has_value());
  CHECK(*lag.order >= 1.8);
  CHECK(*lag.order <= 2.2);
  CHECK(lag.raw_residual > 0.0);

  ExactOptions opts;
  opts.band = 0.1;
  const auto exact = check_exact(m, opts);
  REQUIRE(exact.size() == 3);
  CHECK(exact[0].name == "exact.quad");
  CHECK(exact[1].name == "exact.path");
  CHECK(exact[2].name == "exact.end_variance");
  for (const auto& e : exact) CHECK(e.pass);
  CHECK(exact[2].residual < 1e-12);

  auto dist = [](double t) {
    return [t](const ContactPoint& p) { return project_to_lift(p, t).distance; };
  };
  const auto ends = check_ends(m, dist(0.5), dist(0.5), 0.1, 0.05, 1e-4);
  CHECK(ends.pass);
  CHECK(ends.residual < 1e-12);

  const auto misplaced = check_ends(m, dist(0.5), dist(0.5), 0.05, 0.1, 1e-4);
  CHECK_FALSE(misplaced.pass);
  CHECK_FALSE(misplaced.note.empty());

  const auto wrong_end = check_ends(m, dist(0.5), dist(-0.5), 0.1, 0.05, 1e-4);
  CHECK_FALSE(wrong_end.pass);
}

TEST_CASE("negative controls fail by a wide margin", "[verify]") {
  const double tol = 1e-5;
  const auto graph = check_lagrangian(non_closed_graph_mesh(17), tol);
  CHECK_FALSE(graph.pass);
  CHECK(graph.residual > 1e3 * tol);

  const auto m = cylinder(0.5, 17, 9);
  const auto perturbed = check_exact(non_hamiltonian_perturbation(m, 1e-1));
  CHECK_FALSE(perturbed[0].pass);
  CHECK(perturbed[0].residual > 1e3 * tol);
  CHECK_FALSE(perturbed[1].pass);
}

TEST_CASE("heavy truncation invalidates a report", "[verify]") {
  auto m = cylinder(0.5, 9, 9);
  for (std::size_t q = 0; q < m.size() / 3; ++q) m.flags[q * 3] = NodeTruncated;
  const auto e = check_lagrangian(m, 1e-5);
  CHECK_FALSE(e.pass);
  CHECK(e.truncated == (m.size() + 2) / 3);
  CHECK(e.note.find("20%") != std::string::npos);

  // Core-flagged nodes do not count toward the threshold.
  auto core = cylinder(0.5, 9, 9);
  for (std::size_t q = 0; q < core.size() / 3; ++q) core.flags[q * 3] = NodeTruncated | NodeCore;
  CHECK(check_lagrangian(core, 1e-5).note.find("20%") == std::string::npos);
}
