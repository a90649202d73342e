#pragma once

// The wrinkled embedding near a wrinkle sphere and the one-parameter family
// of wrinkled Legendrians whose front is
//   z  = u^5/5 - (2/3) u^3 c + u c^2,   x1 = u^3 - 3 u c,   c = t - x2^2,
// together with its Legendrian lift, Jacobian, singular locus and the
// isotopy field X_t = d/dt of the lift.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "wcl/contact.hpp"

namespace wcl {

struct WrinkleChart {
  int n = 2;
  double t = 0.0;
  double T = 1.0;
  // Wrinkle lifetime [t_birth, t_death] within [-T, T].
  double t_birth = -0.5;
  double t_death = 0.5;

  static WrinkleChart make(double t, double T = 1.0, int n = 2);
  void validate() const;
};

struct ParamPoint {
  double u = 0.0;
  // Slow coordinates v_1..v_{n-1}; v(0) is x2.
  Vec v;

  double x2() const { return v.size() > 0 ? v(0) : 0.0; }
};

// (x1, x2, y1, y2, z) of the lift; the remaining coordinates are inert.
template <class Scalar>
struct LiftCoords {
  Scalar x1, x2, y1, y2, z;
};

// W(u, v) = (v, x1, z) with 1 - |v|^2 in place of c.
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> front_static(Scalar u,
                                                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v) {
  const Scalar c = Scalar(1) - v.squaredNorm();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(v.size() + 2);
  out.head(v.size()) = v;
  out(v.size()) = u * u * u - Scalar(3) * u * c;
  out(v.size() + 1) = u * u * u * u * u / Scalar(5) - Scalar(2) * u * u * u * c / Scalar(3) + u * c * c;
  return out;
}

// W_t(u, x2) = (z, x1, x2).
template <class Scalar>
Eigen::Matrix<Scalar, 3, 1> front_family(Scalar u, Scalar x2, Scalar t) {
  const Scalar c = t - x2 * x2;
  const Scalar u3 = u * u * u;
  return {u3 * u * u / Scalar(5) - Scalar(2) * u3 * c / Scalar(3) + u * c * c, u3 - Scalar(3) * u * c, x2};
}

template <class Scalar>
LiftCoords<Scalar> lift_coords(Scalar u, Scalar x2, Scalar t) {
  const Scalar c = t - x2 * x2;
  const Scalar u3 = u * u * u;
  const auto front = front_family(u, x2, t);
  return {front(1), x2, (u * u - c) / Scalar(3),
          -Scalar(2) * u3 * x2 / Scalar(3) - Scalar(2) * u * x2 * c, front(0)};
}

// Legendrian lift; x_i = slow(i-3) and y_i = 0 for i > 2.
ContactPoint lift_family(double u, double x2, double t, int n = 2, const Vec& slow = Vec());
ContactPoint lift_family(const ParamPoint& q, double t, int n = 2);

// Rows are d/du, d/dx2, d/dx3.. of the packed lift ([x, y, z] layout);
// the inert slow coordinates contribute identity rows.
Eigen::MatrixXd jacobian(double u, double x2, double t, int n = 2);

// d/dt of the lift at fixed parameters.
TangentVector isotopy_field_Xt(double u, double x2, double t, int n = 2);

// alpha(X_t) = u^3/3 + u (t - x2^2).
double alpha_Xt(double u, double x2, double t);
// The same quantity written as x1/3 + 2u(t - x2^2).
double alpha_Xt_via_x1(double u, double x2, double t);

// u = sign * sqrt(3 y1 - x2^2 + t); nullopt when the radicand is negative.
std::optional<double> u_from_y1(const ContactPoint& p, double t, int sign);
// u = -(y2 + (2/3) x1 x2) / (4 x2 (t - x2^2)); nullopt when the denominator vanishes.
std::optional<double> u_from_y2_x1(const ContactPoint& p, double t);

double smallest_singular_value(double u, double x2, double t);

struct SingularLocusOptions {
  double u_extent = 2.5;
  double x2_extent = 2.5;
  int grid = 81;
  double rank_tol = 1e-8;
  double guard_tol = 1e-2;
  double guard_offset = 0.05;
  double guard_ratio = 1e6;
};

struct SingularPoint {
  ParamPoint q;
  double sigma_min = 0.0;
  double guard_sigma = 0.0;
  double max_minor = 0.0;
};

// Rank-drop points of the lift at time t, sorted by (u, x2).
std::vector<SingularPoint> singular_locus_certified(double t, const SingularLocusOptions& opts = {});
std::vector<ParamPoint> singular_locus(double t, const SingularLocusOptions& opts = {});

struct NestedWrinkle {
  WrinkleChart chart;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double core_radius = 0.1;
  // Indices of charts nested inside this one; this chart's core disc must
  // lie inside each of their core discs.
  std::vector<std::size_t> inner;
};

struct NestedConfig {
  std::vector<NestedWrinkle> wrinkles;
};

struct NestedResult {
  bool pass = true;
  // (outer, inner) of the first violation.
  std::optional<std::pair<std::size_t, std::size_t>> violation;
};

NestedResult validate_nested(const NestedConfig& config);

}  // namespace wcl
