#pragma once

// Checks of the cobordism conditions on sampled data.
//
// Mesh checks run on a ladder of nested meshes (the finest one subsampled by
// 2^k). Each reports the finest-level maximum as raw_residual, the
// least-squares order in the mesh spacing of the per-level maxima over the
// quantities all levels share, and as residual the three-level Richardson
// value (64 r_f - 20 r_m + r_c) / 45 of those shared quantities. Pass needs residual <= tolerance and, when
// an order is measurable, order >= 1.8 (or a roundoff floor).

#include <functional>
#include <optional>
#include <vector>

#include "wcl/contact.hpp"
#include "wcl/report.hpp"
#include "wcl/symplectization.hpp"

namespace wcl {

struct Tolerances {
  double identity = 1e-10;
  double fd = 1e-5;
  double end_variance = 1e-6;
  double ends = 1e-4;
  double min_order = 1.8;
};

struct FramedSample {
  ContactPoint p;
  std::vector<TangentVector> frame;
};

// max |alpha(w)| over frame vectors; zero frames are reported as degenerate.
ReportEntry check_legendrian(const std::vector<FramedSample>& samples, double tol);

// Lift samples on a grid x grid patch of (u, x2) with Jacobian frames.
std::vector<FramedSample> lift_samples(double t, int grid, double u_extent = 1.5, double x2_extent = 1.5);

struct Convergence {
  std::optional<double> order;
  bool floor = false;
};

// Least-squares slope of log(residual) against log(h). All-zero sequences
// give no order; a non-decreasing sequence below 1e-11 is a roundoff floor.
Convergence convergence_study(const std::vector<double>& residuals, const std::vector<double>& spacings);

// Nested meshes, coarsest first: fine subsampled by 2^(levels-1), ..., fine.
std::vector<MeshedLagrangian> mesh_ladder(const MeshedLagrangian& fine, int levels = 3);

// |omega(e_i, e_j)| over the three coordinate pairs with central-difference
// tangents at interior nodes. The extrapolated residual needs levels == 3;
// other level counts report the raw maximum.
ReportEntry check_lagrangian(const MeshedLagrangian& fine, double tol, int levels = 3, double min_order = 1.8);

struct ExactOptions {
  double tol = 1e-5;
  double end_variance_tol = 1e-6;
  // End bands are |v| > band in the node's own v coordinate.
  double band = 3.0;
  int levels = 3;
  double min_order = 1.8;
};

// Entries exact.quad (loop integrals of e^v alpha over mesh quads divided by
// their parameter area), exact.path (primitive by two path orders) and
// exact.end_variance (variance of the primitive over each end band).
std::vector<ReportEntry> check_exact(const MeshedLagrangian& fine, const ExactOptions& opts = {});

using DistanceToLegendrian = std::function<double(const ContactPoint&)>;

// One-sided distance from end-band nodes to the cylinders over L_lower
// (v < -band) and L_upper (v > band). A band inside the cut-off region
// |v| < T_band fails with a diagnostic.
ReportEntry check_ends(const MeshedLagrangian& mesh, const DistanceToLegendrian& to_lower,
                       const DistanceToLegendrian& to_upper, double band, double T_band, double tol);

// Negative controls.
// Lift at time t with z += amplitude * N(u, x2), N a seeded random Fourier sum
// of unit size; frames include the derivative of the perturbation.
std::vector<FramedSample> perturbed_lift_samples(double t, int grid, double amplitude, unsigned seed);
// Graph y = (-x2, x1), z = 0 of a non-closed 1-form times a v interval.
MeshedLagrangian non_closed_graph_mesh(int resolution, double v0 = -1.0, double v1 = 1.0);
// y += eta (-x2, x1) applied to every node of a mesh.
MeshedLagrangian non_hamiltonian_perturbation(const MeshedLagrangian& mesh, double eta);

}  // namespace wcl
