#pragma once

// Extension of alpha(X_t) from L_t to a tube around it, giving the contact
// Hamiltonian H_t that drives the isotopy. Regions are defined in the
// (u, x2) parameter plane of the nearest point on L_t:
//
//   CORE_DISC  u^2 + x2^2 < eps, or |u| < delta and |x2| < eps
//   POS_U/NEG_U  |u| >= delta              -> x1/3 + 2(+-sqrt(3y1 - x2^2 + t))(t - x2^2)
//   OUTER_X2   |u| <= delta/2, |x2| >= eps -> -y2 / (2 x2)
//   BLEND      delta/2 < |u| < delta, |x2| >= eps, linear in |u| between the two
//   FAR        tube-normal distance > rho_cut
//
// A quintic taper in the tube-normal distance takes H to 0 between
// rho_tube and rho_cut.

#include <optional>
#include <string>

#include "wcl/contact.hpp"

namespace wcl {

struct PatchParams {
  double epsilon = 0.1;
  double delta = 0.3;
  double rho_tube = 0.2;
  double rho_cut = 0.35;
  double t = 0.0;

  void validate() const;
};

enum class RegionTag { OuterX2, PosU, NegU, Blend, CoreDisc, Far };

std::string to_string(RegionTag tag);

// Nearest point of L_t to an ambient point, in lift parameters.
struct Projection {
  double u = 0.0;
  double x2 = 0.0;
  double distance = 0.0;
  int iterations = 0;
};

// Levenberg-Marquardt nearest-point search on the (u, x2) chart, started
// from the real roots of the front equation x1 = u^3 - 3u(t - x2^2) (or
// from `hint` when given). Throws ConvergenceError with diagnostics when no
// start converges within max_iter iterations.
Projection project_to_lift(const ContactPoint& p, double t, const Projection* hint = nullptr, int max_iter = 100);

// Real roots of u^3 - 3 c u - x1 = 0, ascending.
std::vector<double> front_cubic_roots(double c, double x1);

RegionTag region_of(double u, double x2, double distance, const PatchParams& params);
RegionTag classify(const ContactPoint& p, const PatchParams& params);

// -y2 / (2 x2).
double H_outer(const ContactPoint& p, double t);
// x1/3 + 2 sign sqrt(3 y1 - x2^2 + t) (t - x2^2); DomainError for radicand < -1e-9.
double H_branch_u(const ContactPoint& p, double t, int sign);

double tube_taper(double distance, const PatchParams& params);

struct PatchSample {
  double value = 0.0;
  RegionTag tag = RegionTag::Far;
  Projection projection;
};

PatchSample evaluate_extension(const ContactPoint& p, const PatchParams& params,
                               const Projection* hint = nullptr);
double H_ext(const ContactPoint& p, const PatchParams& params);
double H_ext(const ContactPoint& p, double t, PatchParams params);

struct PatchGradient {
  PatchSample sample;
  Gradient gradient;
};

// Closed form inside the tube away from region boundaries; elsewhere central
// differences (h = 1e-5 max(1,|c|)) warm-started from the projection at p.
PatchGradient extension_gradient(const ContactPoint& p, const PatchParams& params,
                                 const Projection* hint = nullptr);

// H_ext(., t) as a ScalarField.
ScalarField extension_field(const PatchParams& params);

}  // namespace wcl
