#pragma once

// Excision of the core disc by pushing it to infinity along isotropic
// paths. For a point p_t the path gamma(tau) = p_t + tau (d/dx1 + y1 d/dz)
// is isotropic (alpha(gamma') = 0). Its Lagrangian projection is the
// straight segment tau -> (x1 + tau, x2, y1, y2), so the tube coordinates
//   tau = x1 - x1^0,  s = y1 - y1^0,  a = x_{2..n} - x^0,  b = y_{2..n} - y^0
// are symplectic: omega = dtau ^ ds + da ^ db. The cutoff Hamiltonian is
// G = psi(s) f(tau) phi(|(a, b)|), and its time-g flow, lifted to the
// contact space, is the push map.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "wcl/contact.hpp"
#include "wcl/flow.hpp"

namespace wcl {

using ContactMap = std::function<ContactPoint(const ContactPoint&)>;

struct EscapeProfile {
  double T = 1.0;
  // Finite stand-in for the infinite plateau.
  double g_cap = 10.0;
};

// g_cap on [-T, T], 0 on |t| >= 2T, quintic ramps between. DomainError
// outside [-3T, 3T].
double g_eval(double t, const EscapeProfile& profile);

ContactPoint gamma(const ContactPoint& p, double tau);
TangentVector gamma_velocity(const ContactPoint& p);

struct ClearanceChart {
  double t = 1.0;
  double u_extent = 2.5;
  double x2_extent = 2.5;
  int resolution = 101;
  // L_t samples within this parameter radius of p's own parameters are
  // ignored when p lies on L_t (the path starts there).
  double exclusion_radius = 0.5;
  double threshold = 0.05;
  int tau_samples = 200;
};

struct Clearance {
  double forward = 0.0;
  double backward = 0.0;
  // +1 when the forward path clears, -1 when only the reversed path does.
  int direction = 1;
  double clearance = 0.0;
};

// Minimum distance from gamma(+-tau), tau in (0, tau_max], to sampled L_t.
// ConsistencyError when neither direction reaches the threshold.
Clearance gamma_clearance(const ContactPoint& p, double tau_max, const ClearanceChart& chart);

// phi, f, psi with
//   phi = 1 on r <= eps/4, 0 on r >= 3eps/4
//   f   = 1 on [0, g],     0 off [-eps/2, g + eps/2]
//   psi' = 1 on |s| <= eps/4, psi = psi' = 0 on |s| >= 3eps/4
class CutoffTriple {
 public:
  explicit CutoffTriple(double epsilon);

  double epsilon() const { return eps_; }
  double phi(double r) const;
  double dphi(double r) const;
  double f(double tau, double g) const;
  double df(double tau, double g) const;
  double psi(double s) const;
  double dpsi(double s) const;

 private:
  double eps_;
};

struct TubeCoords {
  double tau = 0.0;
  double s = 0.0;
  Vec a;
  Vec b;

  double ab_norm() const { return std::sqrt(a.squaredNorm() + b.squaredNorm()); }
};

double G_eval(const TubeCoords& c, const CutoffTriple& triple, double g_t);

struct TubeGradient {
  double dtau = 0.0;
  double ds = 0.0;
  Vec da;
  Vec db;
};

TubeGradient G_gradient(const TubeCoords& c, const CutoffTriple& triple, double g_t);

// Tube around the projected path of gamma_{base}, of length g.
struct TubeChart {
  ContactPoint base;
  double epsilon = 0.1;
  double g = 10.0;

  int dim() const { return base.dim(); }
  CutoffTriple triple() const { return CutoffTriple(epsilon); }
  // phase = [x_1..x_n, y_1..y_n]
  TubeCoords to_tube(const Eigen::Ref<const Vec>& phase) const;
  Vec from_tube(const TubeCoords& c) const;
  // (-eps, g + eps) x (-eps, eps) x B_eps
  bool in_domain(const TubeCoords& c) const;
  double G(const Eigen::Ref<const Vec>& phase) const;
};

Vec lagrangian_projection(const ContactPoint& p);

struct ChartError : std::runtime_error {
  ChartError(const std::string& what, std::vector<Vec> traj)
      : std::runtime_error(what), trajectory(std::move(traj)) {}
  std::vector<Vec> trajectory;
};

// Hamiltonian field of G for dx ^ dy in tube coordinates:
// tau' = G_s, s' = -G_tau, a' = G_b, b' = -G_a (tau' = 1 on the plateau).
Vec XG_field(const TubeChart& chart, const Eigen::Ref<const Vec>& phase);

// Time-`duration` flow of X_G. Identity outside the chart domain; a
// trajectory leaving the domain mid-flow raises ChartError with the steps so far.
Vec XG_flow(const TubeChart& chart, const Eigen::Ref<const Vec>& start, double duration,
            const FlowOptions& opts = {});

// Contact Hamiltonian K = -G o pi (z-independent); its contact field projects to X_G.
ScalarField push_hamiltonian(const TubeChart& chart);

ContactPoint contact_lift_flow(const TubeChart& chart, const ContactPoint& start, double duration,
                               const FlowOptions& opts = {});

// Psi: the time-g contact lift, as a map.
ContactMap push_map(const TubeChart& chart, const FlowOptions& opts = {});

struct LambdaMeasurement {
  double lambda = 1.0;
  // (max - min) / |mean| over the usable probes.
  double spread = 0.0;
  int probes_used = 0;
};

// lambda = alpha(dPsi w) / alpha(w) with dPsi by central differences of
// step `h`; probes with |alpha(w)| < 1e-3 are skipped (DomainError if none remain).
LambdaMeasurement measure_lambda(const ContactMap& psi, const ContactPoint& p,
                                 const std::vector<TangentVector>& probes, double h = 1e-5);
double measure_lambda(const ContactMap& psi, const ContactPoint& p, double h = 1e-5);

}  // namespace wcl
