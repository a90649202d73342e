#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace wcl {

struct FlowOptions {
  double step = 1e-3;
  // Trajectories leaving the box |s|_inf <= box are truncated.
  double box = 1e6;
};

struct FlowResult {
  Eigen::VectorXd state;
  double t_reached = 0.0;
  int steps = 0;
  bool truncated = false;
};

struct NoObserver {
  bool operator()(double, const Eigen::VectorXd&) const { return true; }
};

// Fixed-step classical RK4 from t0 to t1. The step is shrunk so that an
// integer number of steps covers [t0, t1] exactly. Field signature:
// VectorXd(double t, const VectorXd& s). The observer sees every accepted
// step; returning false stops the flow and marks it truncated.
template <class Field, class Observer = NoObserver>
FlowResult rk4_flow(Field&& field, Eigen::VectorXd s, double t0, double t1,
                    const FlowOptions& opts = {}, Observer&& observe = {}) {
  FlowResult out;
  out.t_reached = t0;
  const double span = t1 - t0;
  if (span == 0.0) {
    out.state = std::move(s);
    return out;
  }
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(span) / opts.step - 1e-9)));
  const double h = span / n;
  for (int k = 0; k < n; ++k) {
    const double t = t0 + k * h;
    const Eigen::VectorXd k1 = field(t, s);
    const Eigen::VectorXd k2 = field(t + 0.5 * h, Eigen::VectorXd(s + 0.5 * h * k1));
    const Eigen::VectorXd k3 = field(t + 0.5 * h, Eigen::VectorXd(s + 0.5 * h * k2));
    const Eigen::VectorXd k4 = field(t + h, Eigen::VectorXd(s + h * k3));
    Eigen::VectorXd next = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.allFinite() || next.lpNorm<Eigen::Infinity>() > opts.box) {
      out.truncated = true;
      break;
    }
    s = std::move(next);
    out.steps = k + 1;
    out.t_reached = (k + 1 == n) ? t1 : t0 + (k + 1) * h;
    if (!observe(out.t_reached, s)) {
      out.truncated = k + 1 < n;
      break;
    }
  }
  out.state = std::move(s);
  return out;
}

}  // namespace wcl
