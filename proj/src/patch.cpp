#include "wcl/patch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wcl/wrinkle.hpp"

namespace wcl {

namespace {

double smoothstep5(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

struct LmResult {
  double u, x2, cost;
  int iterations;
  bool converged;
};

// Squared distance minimization over the lift's (x1, x2, y1, y2, z).
LmResult levenberg_marquardt(const Eigen::Matrix<double, 5, 1>& target, double t, double u, double x2,
                             int max_iter) {
  auto residual = [&](double uu, double xx) {
    const auto L = lift_coords(uu, xx, t);
    Eigen::Matrix<double, 5, 1> r;
    r << L.x1, L.x2, L.y1, L.y2, L.z;
    return Eigen::Matrix<double, 5, 1>(r - target);
  };
  auto r = residual(u, x2);
  double cost = r.squaredNorm();
  double mu = 1e-8;
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::Matrix<double, 5, 2> J = jacobian(u, x2, t, 2).transpose();
    const Eigen::Matrix2d A = J.transpose() * J;
    const Eigen::Vector2d g = J.transpose() * r;
    const double scale = 1.0 + std::sqrt(cost);
    if (g.norm() <= 1e-13 * scale) return {u, x2, cost, it, true};
    bool accepted = false;
    for (int tries = 0; tries < 30 && !accepted; ++tries) {
      const Eigen::Vector2d step = (A + mu * Eigen::Matrix2d::Identity()).ldlt().solve(-g);
      const auto r_new = residual(u + step(0), x2 + step(1));
      const double cost_new = r_new.squaredNorm();
      if (cost_new <= cost) {
        u += step(0);
        x2 += step(1);
        const bool small = step.norm() <= 1e-12 * (1.0 + std::hypot(u, x2));
        r = r_new;
        cost = cost_new;
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
        if (small) return {u, x2, cost, it, true};
      } else {
        mu *= 4.0;
      }
    }
    if (!accepted) return {u, x2, cost, it, true};  // no descent direction left: stationary
  }
  return {u, x2, cost, max_iter, false};
}

}  // namespace

void PatchParams::validate() const {
  if (!(epsilon > 0.0) || !(delta > 0.0)) throw DomainError("PatchParams: epsilon and delta must be positive");
  if (!(rho_tube > 0.0) || !(rho_tube < rho_cut)) {
    throw DomainError("PatchParams: need 0 < rho_tube < rho_cut");
  }
}

std::string to_string(RegionTag tag) {
  switch (tag) {
    case RegionTag::OuterX2: return "OUTER_X2";
    case RegionTag::PosU: return "POS_U";
    case RegionTag::NegU: return "NEG_U";
    case RegionTag::Blend: return "BLEND";
    case RegionTag::CoreDisc: return "CORE_DISC";
    case RegionTag::Far: return "FAR";
  }
  return "?";
}

std::vector<double> front_cubic_roots(double c, double x1) {
  // Depressed cubic u^3 + P u + Q with P = -3c, Q = -x1.
  const double P = -3.0 * c;
  const double Q = -x1;
  std::vector<double> roots;
  const double disc = -(4.0 * P * P * P + 27.0 * Q * Q);
  if (P < 0.0 && disc > 0.0) {
    const double m = 2.0 * std::sqrt(-P / 3.0);
    const double arg = std::clamp(3.0 * Q / (P * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) roots.push_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0));
  } else {
    const double s = std::sqrt(std::max(0.0, Q * Q / 4.0 + P * P * P / 27.0));
    roots.push_back(std::cbrt(-Q / 2.0 + s) + std::cbrt(-Q / 2.0 - s));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

Projection project_to_lift(const ContactPoint& p, double t, const Projection* hint, int max_iter) {
  if (p.dim() < 2) throw DimensionMismatch("project_to_lift: n must be >= 2");
  Eigen::Matrix<double, 5, 1> target;
  target << p.x(0), p.x(1), p.y(0), p.y(1), p.z;
  // Inert coordinates: x_i is matched exactly, y_i is off by y_i.
  const double inert = p.dim() > 2 ? p.y.tail(p.dim() - 2).squaredNorm() : 0.0;

  auto finish = [&](const LmResult& r) {
    return Projection{r.u, r.x2, std::sqrt(r.cost + inert), r.iterations};
  };

  if (hint != nullptr) {
    const auto r = levenberg_marquardt(target, t, hint->u, hint->x2, max_iter);
    if (r.converged) return finish(r);
  }

  std::optional<LmResult> best;
  LmResult last{};
  const double x2 = p.x(1);
  // Cubic roots lose the near sheet just past a fold; y1 = (u^2 + x2^2 - t)/3 does not.
  std::vector<double> starts = front_cubic_roots(t - x2 * x2, p.x(0));
  const double radicand = 3.0 * p.y(0) - x2 * x2 + t;
  if (radicand > 0.0) {
    starts.push_back(std::sqrt(radicand));
    starts.push_back(-std::sqrt(radicand));
  }
  for (double u0 : starts) {
    const auto r = levenberg_marquardt(target, t, u0, x2, max_iter);
    last = r;
    if (r.converged && (!best || r.cost < best->cost)) best = r;
  }
  if (!best) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "project_to_lift: no start converged in " << max_iter << " iterations; point (" << p.packed().transpose()
        << "), t=" << t << ", last iterate u=" << last.u << " x2=" << last.x2 << " cost=" << last.cost;
    throw ConvergenceError(msg.str());
  }
  return finish(*best);
}

RegionTag region_of(double u, double x2, double distance, const PatchParams& params) {
  if (distance > params.rho_cut) return RegionTag::Far;
  const double au = std::abs(u);
  const double ax = std::abs(x2);
  if (u * u + x2 * x2 < params.epsilon || (au < params.delta && ax < params.epsilon)) return RegionTag::CoreDisc;
  if (au >= params.delta) return u > 0 ? RegionTag::PosU : RegionTag::NegU;
  if (au <= params.delta / 2.0) return RegionTag::OuterX2;
  return RegionTag::Blend;
}

RegionTag classify(const ContactPoint& p, const PatchParams& params) {
  params.validate();
  const auto proj = project_to_lift(p, params.t);
  return region_of(proj.u, proj.x2, proj.distance, params);
}

double H_outer(const ContactPoint& p, double /*t*/) {
  const double x2 = p.x(1);
  if (std::abs(x2) < 1e-9) throw DomainError("H_outer: |x2| below 1e-9 singularity guard");
  return -p.y(1) / (2.0 * x2);
}

double H_branch_u(const ContactPoint& p, double t, int sign) {
  const double x2 = p.x(1);
  const double radicand = 3.0 * p.y(0) - x2 * x2 + t;
  if (radicand < -1e-9) throw DomainError("H_branch_u: negative radicand " + std::to_string(radicand));
  const double s = sign < 0 ? -1.0 : 1.0;
  return p.x(0) / 3.0 + 2.0 * s * std::sqrt(std::max(radicand, 0.0)) * (t - x2 * x2);
}

double tube_taper(double distance, const PatchParams& params) {
  if (distance <= params.rho_tube) return 1.0;
  if (distance >= params.rho_cut) return 0.0;
  return 1.0 - smoothstep5((distance - params.rho_tube) / (params.rho_cut - params.rho_tube));
}

namespace {

double branch_clamped(const ContactPoint& p, double t, int sign) {
  const double x2 = p.x(1);
  const double radicand = std::max(3.0 * p.y(0) - x2 * x2 + t, 0.0);
  return p.x(0) / 3.0 + 2.0 * (sign < 0 ? -1.0 : 1.0) * std::sqrt(radicand) * (t - x2 * x2);
}

// -y2/(2 x2) with |x2| floored at eps/2, sign taken from the projected x2.
double outer_guarded(const ContactPoint& p, double projected_x2, double epsilon) {
  const double s = projected_x2 < 0 ? -1.0 : 1.0;
  const double x2 = s * std::max(s * p.x(1), epsilon / 2.0);
  return -p.y(1) / (2.0 * x2);
}

}  // namespace

PatchSample evaluate_extension(const ContactPoint& p, const PatchParams& params, const Projection* hint) {
  PatchSample out;
  out.projection = project_to_lift(p, params.t, hint);
  const auto& q = out.projection;
  out.tag = region_of(q.u, q.x2, q.distance, params);
  const double t = params.t;
  double value = 0.0;
  switch (out.tag) {
    case RegionTag::Far: out.value = 0.0; return out;
    case RegionTag::PosU: value = branch_clamped(p, t, +1); break;
    case RegionTag::NegU: value = branch_clamped(p, t, -1); break;
    case RegionTag::OuterX2: value = outer_guarded(p, q.x2, params.epsilon); break;
    case RegionTag::Blend: {
      const double w = (std::abs(q.u) - params.delta / 2.0) / (params.delta / 2.0);
      value = (1.0 - w) * outer_guarded(p, q.x2, params.epsilon) + w * branch_clamped(p, t, q.u < 0 ? -1 : +1);
      break;
    }
    case RegionTag::CoreDisc: value = branch_clamped(p, t, q.u < 0 ? -1 : +1); break;
  }
  out.value = value * tube_taper(q.distance, params);
  return out;
}

double H_ext(const ContactPoint& p, const PatchParams& params) { return evaluate_extension(p, params).value; }

double H_ext(const ContactPoint& p, double t, PatchParams params) {
  params.t = t;
  return H_ext(p, params);
}

namespace {

// Closed-form gradient where the region formula is a fixed smooth function
// of the ambient point; nullopt near region or taper boundaries.
std::optional<Gradient> analytic_gradient(const ContactPoint& p, const PatchSample& s, const PatchParams& params) {
  constexpr double margin = 1e-3;
  if (s.projection.distance + margin >= params.rho_tube) return std::nullopt;
  const int n = p.dim();
  const double t = params.t;
  Gradient g{Vec::Zero(n), Vec::Zero(n), 0.0};
  const double x2 = p.x(1);
  const auto& q = s.projection;
  switch (s.tag) {
    case RegionTag::PosU:
    case RegionTag::NegU:
    case RegionTag::CoreDisc: {
      if (s.tag != RegionTag::CoreDisc && std::abs(std::abs(q.u) - params.delta) < margin) return std::nullopt;
      const double radicand = 3.0 * p.y(0) - x2 * x2 + t;
      if (radicand < margin) return std::nullopt;
      const double sign = q.u < 0 ? -1.0 : 1.0;
      const double r = std::sqrt(radicand);
      const double c = t - x2 * x2;
      g.dx(0) = 1.0 / 3.0;
      g.dx(1) = 2.0 * sign * (-x2 / r * c - 2.0 * r * x2);
      g.dy(0) = 2.0 * sign * (1.5 / r) * c;
      return g;
    }
    case RegionTag::OuterX2: {
      if (std::abs(std::abs(q.u) - params.delta / 2.0) < margin) return std::nullopt;
      const double sgn = q.x2 < 0 ? -1.0 : 1.0;
      if (std::abs(sgn * x2 - params.epsilon / 2.0) < margin) return std::nullopt;
      const double xe = sgn * std::max(sgn * x2, params.epsilon / 2.0);
      g.dy(1) = -1.0 / (2.0 * xe);
      if (sgn * x2 > params.epsilon / 2.0) g.dx(1) = p.y(1) / (2.0 * xe * xe);
      return g;
    }
    default: return std::nullopt;
  }
}

}  // namespace

PatchGradient extension_gradient(const ContactPoint& p, const PatchParams& params, const Projection* hint) {
  PatchGradient out;
  out.sample = evaluate_extension(p, params, hint);
  if (auto g = analytic_gradient(p, out.sample, params)) {
    out.gradient = *g;
    return out;
  }
  const Projection warm = out.sample.projection;
  out.gradient = fd_gradient([&](const ContactPoint& q) { return evaluate_extension(q, params, &warm).value; }, p);
  return out;
}

ScalarField extension_field(const PatchParams& params) {
  return ScalarField([params](const ContactPoint& p) { return H_ext(p, params); },
                     [params](const ContactPoint& p) { return extension_gradient(p, params).gradient; });
}

}  // namespace wcl
