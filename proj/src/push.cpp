#include "wcl/push.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wcl/errors.hpp"
#include "wcl/patch.hpp"
#include "wcl/wrinkle.hpp"

namespace wcl {

namespace {

double smoothstep5(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double smoothstep5_prime(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return 30.0 * x * x * (1.0 - x) * (1.0 - x);
}

}  // namespace

double g_eval(double t, const EscapeProfile& profile) {
  const double T = profile.T;
  if (!(T > 0.0)) throw DomainError("g_eval: T must be positive");
  if (t < -3.0 * T || t > 3.0 * T) throw DomainError("g_eval: t outside [-3T, 3T]");
  const double at = std::abs(t);
  if (at <= T) return profile.g_cap;
  if (at >= 2.0 * T) return 0.0;
  return profile.g_cap * (1.0 - smoothstep5((at - T) / T));
}

ContactPoint gamma(const ContactPoint& p, double tau) {
  ContactPoint q = p;
  q.x(0) += tau;
  q.z += tau * p.y(0);
  return q;
}

TangentVector gamma_velocity(const ContactPoint& p) {
  TangentVector w = TangentVector::d_x(p.dim(), 0);
  w.dz = p.y(0);
  return w;
}

namespace {

// Minimum distance from the path points to the retained samples; returns +inf
// when no sample is retained.
double min_distance(const std::vector<Vec>& path, const std::vector<Vec>& samples) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : path) {
    for (const auto& s : samples) best = std::min(best, (q - s).squaredNorm());
  }
  return std::sqrt(best);
}

}  // namespace

Clearance gamma_clearance(const ContactPoint& p, double tau_max, const ClearanceChart& chart) {
  if (!(tau_max > 0.0)) throw DomainError("gamma_clearance: tau_max must be positive");
  const int n = p.dim();
  const auto proj = project_to_lift(p, chart.t);
  const bool on_lift = proj.distance < 1e-6;

  const int N = std::max(chart.resolution, 3);
  std::vector<Vec> samples;
  samples.reserve(static_cast<std::size_t>(N) * N);
  for (int i = 0; i < N; ++i) {
    const double u = -chart.u_extent + 2.0 * chart.u_extent * i / (N - 1);
    for (int j = 0; j < N; ++j) {
      const double x2 = -chart.x2_extent + 2.0 * chart.x2_extent * j / (N - 1);
      if (on_lift && std::hypot(u - proj.u, x2 - proj.x2) < chart.exclusion_radius) continue;
      Vec slow = n > 2 ? Vec(p.x.tail(n - 2)) : Vec();
      samples.push_back(lift_family(u, x2, chart.t, n, slow).packed());
    }
  }

  auto sweep = [&](double sign) {
    std::vector<Vec> path;
    const int M = std::max(chart.tau_samples, 1);
    for (int k = 1; k <= M; ++k) path.push_back(gamma(p, sign * tau_max * k / M).packed());
    return min_distance(path, samples);
  };

  Clearance out;
  out.forward = sweep(+1.0);
  out.backward = sweep(-1.0);
  if (out.forward >= chart.threshold) {
    out.direction = 1;
    out.clearance = out.forward;
  } else if (out.backward >= chart.threshold) {
    out.direction = -1;
    out.clearance = out.backward;
  } else {
    std::ostringstream msg;
    msg << "gamma_clearance: both directions come within threshold " << chart.threshold
        << " of L_t (forward " << out.forward << ", backward " << out.backward << ")";
    throw ConsistencyError(msg.str());
  }
  return out;
}

CutoffTriple::CutoffTriple(double epsilon) : eps_(epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("CutoffTriple: epsilon must be positive");
}

double CutoffTriple::phi(double r) const { return 1.0 - smoothstep5((r - eps_ / 4.0) / (eps_ / 2.0)); }

double CutoffTriple::dphi(double r) const {
  return -smoothstep5_prime((r - eps_ / 4.0) / (eps_ / 2.0)) / (eps_ / 2.0);
}

double CutoffTriple::f(double tau, double g) const {
  const double w = eps_ / 2.0;
  if (tau <= -w || tau >= g + w) return 0.0;
  if (tau < 0.0) return smoothstep5((tau + w) / w);
  if (tau <= g) return 1.0;
  return 1.0 - smoothstep5((tau - g) / w);
}

double CutoffTriple::df(double tau, double g) const {
  const double w = eps_ / 2.0;
  if (tau <= -w || tau >= g + w) return 0.0;
  if (tau < 0.0) return smoothstep5_prime((tau + w) / w) / w;
  if (tau <= g) return 0.0;
  return -smoothstep5_prime((tau - g) / w) / w;
}

// psi(s) = s beta(|s|), beta = 1 on [0, eps/4], 0 beyond 3eps/4.
double CutoffTriple::psi(double s) const {
  const double beta = 1.0 - smoothstep5((std::abs(s) - eps_ / 4.0) / (eps_ / 2.0));
  return s * beta;
}

double CutoffTriple::dpsi(double s) const {
  const double x = (std::abs(s) - eps_ / 4.0) / (eps_ / 2.0);
  const double beta = 1.0 - smoothstep5(x);
  const double dbeta = -smoothstep5_prime(x) / (eps_ / 2.0);
  return beta + std::abs(s) * dbeta;
}

double G_eval(const TubeCoords& c, const CutoffTriple& triple, double g_t) {
  return triple.psi(c.s) * triple.f(c.tau, g_t) * triple.phi(c.ab_norm());
}

TubeGradient G_gradient(const TubeCoords& c, const CutoffTriple& triple, double g_t) {
  const double ps = triple.psi(c.s);
  const double fv = triple.f(c.tau, g_t);
  const double r = c.ab_norm();
  const double ph = triple.phi(r);
  TubeGradient out;
  out.dtau = ps * triple.df(c.tau, g_t) * ph;
  out.ds = triple.dpsi(c.s) * fv * ph;
  const double radial = (r > 0.0) ? ps * fv * triple.dphi(r) / r : 0.0;
  out.da = radial * c.a;
  out.db = radial * c.b;
  return out;
}

TubeCoords TubeChart::to_tube(const Eigen::Ref<const Vec>& phase) const {
  const int n = dim();
  if (phase.size() != 2 * n) throw DimensionMismatch("TubeChart::to_tube: phase dimension");
  TubeCoords c;
  c.tau = phase(0) - base.x(0);
  c.s = phase(n) - base.y(0);
  c.a = phase.segment(1, n - 1) - base.x.tail(n - 1);
  c.b = phase.segment(n + 1, n - 1) - base.y.tail(n - 1);
  return c;
}

Vec TubeChart::from_tube(const TubeCoords& c) const {
  const int n = dim();
  Vec phase(2 * n);
  phase(0) = base.x(0) + c.tau;
  phase.segment(1, n - 1) = base.x.tail(n - 1) + c.a;
  phase(n) = base.y(0) + c.s;
  phase.segment(n + 1, n - 1) = base.y.tail(n - 1) + c.b;
  return phase;
}

bool TubeChart::in_domain(const TubeCoords& c) const {
  return c.tau > -epsilon && c.tau < g + epsilon && std::abs(c.s) < epsilon && c.ab_norm() < epsilon;
}

double TubeChart::G(const Eigen::Ref<const Vec>& phase) const { return G_eval(to_tube(phase), triple(), g); }

Vec lagrangian_projection(const ContactPoint& p) {
  Vec phase(2 * p.dim());
  phase << p.x, p.y;
  return phase;
}

Vec XG_field(const TubeChart& chart, const Eigen::Ref<const Vec>& phase) {
  const int n = chart.dim();
  const auto c = chart.to_tube(phase);
  Vec out = Vec::Zero(2 * n);
  if (!chart.in_domain(c)) return out;
  const auto dG = G_gradient(c, chart.triple(), chart.g);
  out(0) = dG.ds;
  out(n) = -dG.dtau;
  out.segment(1, n - 1) = dG.db;
  out.segment(n + 1, n - 1) = -dG.da;
  return out;
}

namespace {

// Shared by the downstairs flow and its contact lift: throws once a
// trajectory that started in the chart leaves it.
struct ChartGuard {
  const TubeChart& chart;
  int phase_size;
  std::vector<Vec>& trajectory;

  bool operator()(double, const Vec& s) const {
    trajectory.push_back(s);
    if (!chart.in_domain(chart.to_tube(s.head(phase_size)))) {
      std::ostringstream msg;
      msg << "flow left the tube chart after " << trajectory.size() << " steps";
      throw ChartError(msg.str(), trajectory);
    }
    return true;
  }
};

}  // namespace

Vec XG_flow(const TubeChart& chart, const Eigen::Ref<const Vec>& start, double duration, const FlowOptions& opts) {
  const int n = chart.dim();
  if (start.size() != 2 * n) throw DimensionMismatch("XG_flow: start dimension");
  if (!chart.in_domain(chart.to_tube(start))) return start;
  std::vector<Vec> trajectory{start};
  auto field = [&](double, const Vec& s) { return XG_field(chart, s); };
  auto res = rk4_flow(field, Vec(start), 0.0, duration, opts, ChartGuard{chart, 2 * n, trajectory});
  return res.state;
}

ScalarField push_hamiltonian(const TubeChart& chart) {
  return ScalarField(
      [chart](const ContactPoint& p) { return -chart.G(lagrangian_projection(p)); },
      [chart](const ContactPoint& p) {
        const int n = chart.dim();
        const auto c = chart.to_tube(lagrangian_projection(p));
        Gradient g{Vec::Zero(n), Vec::Zero(n), 0.0};
        if (!chart.in_domain(c)) return g;
        const auto dG = G_gradient(c, chart.triple(), chart.g);
        g.dx(0) = -dG.dtau;
        g.dx.tail(n - 1) = -dG.da;
        g.dy(0) = -dG.ds;
        g.dy.tail(n - 1) = -dG.db;
        return g;
      });
}

ContactPoint contact_lift_flow(const TubeChart& chart, const ContactPoint& start, double duration,
                               const FlowOptions& opts) {
  const int n = chart.dim();
  if (start.dim() != n) throw DimensionMismatch("contact_lift_flow: start dimension");
  if (!chart.in_domain(chart.to_tube(lagrangian_projection(start)))) return start;
  const auto K = push_hamiltonian(chart);
  auto field = [&](double, const Vec& s) {
    const auto p = ContactPoint::unpack(s);
    return contact_vector_field(K, p).packed();
  };
  // Guard on the phase part [x, y] of the packed contact state.
  std::vector<Vec> trajectory{start.packed()};
  auto res = rk4_flow(field, start.packed(), 0.0, duration, opts, ChartGuard{chart, 2 * n, trajectory});
  return ContactPoint::unpack(res.state);
}

ContactMap push_map(const TubeChart& chart, const FlowOptions& opts) {
  return [chart, opts](const ContactPoint& p) { return contact_lift_flow(chart, p, chart.g, opts); };
}

LambdaMeasurement measure_lambda(const ContactMap& psi, const ContactPoint& p,
                                 const std::vector<TangentVector>& probes, double h) {
  const ContactPoint image = psi(p);
  std::vector<double> ratios;
  for (const auto& w : probes) {
    const double aw = alpha_eval(p, w);
    if (std::abs(aw) < 1e-3) continue;
    const double step = h / std::max(1.0, w.packed().norm());
    const Vec wp = w.packed();
    const Vec plus = psi(ContactPoint::unpack(p.packed() + step * wp)).packed();
    const Vec minus = psi(ContactPoint::unpack(p.packed() - step * wp)).packed();
    const auto dw = TangentVector::unpack((plus - minus) / (2.0 * step));
    ratios.push_back(alpha_eval(image, dw) / aw);
  }
  if (ratios.empty()) throw DomainError("measure_lambda: every probe has |alpha(w)| < 1e-3");
  LambdaMeasurement out;
  double sum = 0.0;
  for (double r : ratios) sum += r;
  out.lambda = sum / static_cast<double>(ratios.size());
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  out.spread = (*hi - *lo) / std::max(std::abs(out.lambda), 1e-300);
  out.probes_used = static_cast<int>(ratios.size());
  return out;
}

double measure_lambda(const ContactMap& psi, const ContactPoint& p, double h) {
  return measure_lambda(psi, p, {TangentVector::d_z(p.dim())}, h).lambda;
}

}  // namespace wcl
