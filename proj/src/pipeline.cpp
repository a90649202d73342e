#include "wcl/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "wcl/errors.hpp"
#include "wcl/flow.hpp"
#include "wcl/mesh_io.hpp"
#include "wcl/parallel.hpp"
#include "wcl/patch.hpp"
#include "wcl/push.hpp"
#include "wcl/render.hpp"
#include "wcl/verify.hpp"
#include "wcl/wrinkle.hpp"

namespace wcl {

namespace {

std::vector<double> linspace(double a, double b, int n) {
  if (n == 1) return {b};
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

ReportEntry entry(const std::string& name, double residual, double tol, std::size_t samples,
                  const std::string& note = "") {
  ReportEntry e;
  e.name = name;
  e.residual = residual;
  e.raw_residual = residual;
  e.tolerance = tol;
  e.samples = samples;
  e.pass = residual <= tol;
  e.note = note;
  return e;
}

// Entry for a control: passes when the measured residual exceeds margin * tol.
ReportEntry control_entry(const std::string& name, const ReportEntry& measured, double margin) {
  ReportEntry e = measured;
  e.name = name;
  e.tolerance = margin * measured.tolerance;
  e.pass = measured.residual >= e.tolerance;
  e.note = "must exceed " + format_double(margin) + " x tolerance " + format_double(measured.tolerance);
  return e;
}

PatchParams patch_params(const RunConfig& cfg, double t = 0.0) {
  PatchParams p;
  p.epsilon = cfg.epsilon;
  p.delta = cfg.delta;
  p.rho_tube = cfg.rho_tube;
  p.rho_cut = cfg.rho_cut;
  p.t = t;
  return p;
}

// Order window on top of the verifier's lower bound.
void apply_order_window(ReportEntry& e, const RunConfig& cfg) {
  if (e.order && !e.floor && *e.order > cfg.max_order) {
    e.pass = false;
    e.note += (e.note.empty() ? "" : "; ") + std::string("order above ") + format_double(cfg.max_order);
  }
}

// Point in the core disc of L_t used to anchor the push chart.
constexpr double kCoreU = 0.05;
constexpr double kCoreX2 = 0.05;

TubeChart core_chart(const RunConfig& cfg, double t, double g) {
  TubeChart chart;
  chart.base = lift_family(kCoreU, kCoreX2, t, cfg.n);
  chart.epsilon = cfg.epsilon;
  chart.g = g;
  return chart;
}

}  // namespace

std::vector<ReportEntry> identity_checks(const RunConfig& cfg) {
  const auto us = linspace(-1.5, 1.5, cfg.identity_grid);
  const auto ts = linspace(-cfg.T, cfg.T, cfg.identity_t_samples);
  double d12 = 0.0, d13 = 0.0, inv1 = 0.0, inv2 = 0.0;
  std::size_t n12 = 0, n13 = 0, ninv1 = 0, ninv2 = 0;
  for (double t : ts) {
    for (double x2 : us) {
      for (double u : us) {
        const auto p = lift_family(u, x2, t, cfg.n);
        const double a = alpha_Xt(u, x2, t);
        const double scale = std::max(1.0, std::abs(a));
        d12 = std::max(d12, std::abs(alpha_Xt_via_x1(u, x2, t) - a) / scale);
        ++n12;
        const bool regular = std::abs(x2 * (t - x2 * x2)) >= 1e-6;
        if (regular) {
          d13 = std::max(d13, std::abs(-p.y(1) / (2.0 * p.x(1)) - a) / scale);
          ++n13;
        }
        if (u != 0.0) {
          const auto r = u_from_y1(p, t, u > 0.0 ? 1 : -1);
          inv1 = std::max(inv1, r ? std::abs(*r - u) / std::abs(u) : INFINITY);
          ++ninv1;
          if (regular) {
            const auto q = u_from_y2_x1(p, t);
            inv2 = std::max(inv2, q ? std::abs(*q - u) / std::abs(u) : INFINITY);
            ++ninv2;
          }
        }
      }
    }
  }
  return {
      entry("identity.alpha_x1", d12, cfg.tol_identity, n12, "|u^3/3 + u(t - x2^2) - (x1/3 + 2u(t - x2^2))| / max(1, |a|)"),
      entry("identity.alpha_y2", d13, cfg.tol_identity, n13, "-y2/(2 x2) where |x2 (t - x2^2)| >= 1e-6"),
      entry("inversion.y1", inv1, cfg.tol_inversion, ninv1, "relative error, u != 0"),
      entry("inversion.y2_x1", inv2, cfg.tol_inversion, ninv2, "relative error, u != 0, |x2 (t - x2^2)| >= 1e-6"),
  };
}

std::vector<ReportEntry> legendrian_checks(const RunConfig& cfg) {
  ReportEntry leg = entry("legendrian", 0.0, cfg.tol_legendrian, 0);
  for (double t : linspace(-cfg.T, cfg.T, cfg.identity_t_samples)) {
    const auto e = check_legendrian(lift_samples(t, cfg.identity_grid), cfg.tol_legendrian);
    leg.residual = std::max(leg.residual, e.residual);
    leg.samples += e.samples;
  }
  leg.raw_residual = leg.residual;
  leg.pass = leg.residual <= leg.tolerance;
  leg.note = "max |alpha(dL w)| over Jacobian frames";

  const auto locus = singular_locus_certified(1.0);
  double err = locus.size() == 2 ? 0.0 : INFINITY;
  for (const auto& s : locus) {
    const double target = s.q.x2() < 0.0 ? -1.0 : 1.0;
    err = std::max(err, std::hypot(s.q.u, s.q.x2() - target));
  }
  return {leg, entry("singular_locus", err, cfg.tol_singular, locus.size(),
                     std::to_string(locus.size()) + " points at t = 1, target (0, +-1)")};
}

std::vector<ReportEntry> transport_checks(const RunConfig& cfg) {
  const double t0 = cfg.transport_t;
  const PatchParams base = patch_params(cfg, t0);
  // Samples of L_t0 away from the excised core and the region seams.
  std::vector<std::pair<double, double>> params;
  const double margin = 0.05;
  for (double x2 : linspace(-1.2, 1.2, cfg.transport_grid)) {
    for (double u : linspace(-1.2, 1.2, cfg.transport_grid)) {
      if (u * u + x2 * x2 < cfg.epsilon + margin) continue;
      if (std::abs(u) < cfg.delta + margin && std::abs(x2) < cfg.epsilon + margin) continue;
      const double au = std::abs(u);
      if (std::abs(au - cfg.delta) < margin || std::abs(au - cfg.delta / 2) < margin) continue;
      params.push_back({u, x2});
    }
  }

  std::vector<double> steps = cfg.transport_steps;
  std::sort(steps.begin(), steps.end(), std::greater<>());
  std::vector<double> errors;
  std::size_t excluded = 0;
  for (double dt : steps) {
    std::vector<double> err(params.size(), 0.0);
    std::vector<char> core(params.size(), 0);
    parallel_for(params.size(), cfg.effective_jobs(), [&](std::size_t q) {
      const auto [u, x2] = params[q];
      auto field = [&](double s, const Vec& state) -> Vec {
        const ContactPoint p = ContactPoint::unpack(state);
        PatchParams at = base;
        at.t = s;
        const auto pg = extension_gradient(p, at);
        if (pg.sample.tag == RegionTag::CoreDisc) core[q] = 1;
        return contact_vector_field(pg.sample.value, pg.gradient, p).packed();
      };
      FlowOptions opts;
      opts.step = dt;
      const auto res = rk4_flow(field, lift_family(u, x2, t0, cfg.n).packed(), t0, t0 + dt, opts);
      err[q] = project_to_lift(ContactPoint::unpack(res.state), t0 + dt).distance;
    });
    double worst = 0.0;
    excluded = 0;
    for (std::size_t q = 0; q < params.size(); ++q) {
      if (core[q]) {
        ++excluded;
        continue;
      }
      worst = std::max(worst, err[q]);
    }
    errors.push_back(worst);
  }
  const auto conv = convergence_study(errors, steps);
  ReportEntry e = entry("transport", errors.back(), cfg.tol_fd, params.size() - excluded);
  e.order = conv.order;
  e.floor = conv.floor;
  e.pass = conv.floor || (conv.order && *conv.order >= cfg.min_order);
  e.note = "one RK4 step per transport step; errors";
  for (double x : errors) e.note += " " + format_double(x);
  return {e};
}

std::vector<ReportEntry> push_checks(const RunConfig& cfg) {
  std::mt19937 rng(cfg.seed);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int N = cfg.cutoff_samples;
  const double eps = cfg.epsilon;
  const double g = cfg.g_cap;
  std::vector<ReportEntry> out;

  auto random_point = [&] {
    ContactPoint p = ContactPoint::origin(cfg.n);
    for (int i = 0; i < cfg.n; ++i) {
      p.x(i) = box(rng);
      p.y(i) = box(rng);
    }
    p.z = box(rng);
    return p;
  };

  double iso = 0.0;
  for (int k = 0; k < N; ++k) {
    const auto p = random_point();
    const double tau = g * unit(rng);
    iso = std::max(iso, std::abs(alpha_eval(gamma(p, tau), gamma_velocity(p))));
  }
  out.push_back(entry("push.isotropy", iso, cfg.tol_isotropy, N, "|alpha(gamma')| along escape paths"));

  // Cutoff conditions on the plateaus and outside the supports.
  const CutoffTriple C(eps);
  double phi_err = 0.0, f_err = 0.0, psi_err = 0.0, slope = 0.0;
  for (int k = 0; k < N; ++k) {
    const double r_in = 0.25 * eps * unit(rng);
    const double r_out = eps * (0.75 + unit(rng));
    phi_err = std::max({phi_err, std::abs(C.phi(r_in) - 1.0), std::abs(C.phi(r_out))});
    const double tau_in = g * unit(rng);
    const double tau_out = unit(rng) < 0.5 ? -eps * (0.5 + unit(rng)) : g + eps * (0.5 + unit(rng));
    f_err = std::max({f_err, std::abs(C.f(tau_in, g) - 1.0), std::abs(C.f(tau_out, g))});
    const double s_in = 0.25 * eps * (2.0 * unit(rng) - 1.0);
    const double s_out = (unit(rng) < 0.5 ? -1.0 : 1.0) * eps * (0.75 + 1e-12 + unit(rng));
    psi_err = std::max({psi_err, std::abs(C.dpsi(s_in) - 1.0), std::abs(C.psi(s_out)), std::abs(C.dpsi(s_out))});
    const double r = eps * unit(rng);
    const double tau = -eps + (g + 2.0 * eps) * unit(rng);
    const double s = eps * (2.0 * unit(rng) - 1.0);
    slope = std::max({slope, eps * std::abs(C.dphi(r)), eps * std::abs(C.df(tau, g)), std::abs(C.psi(s)) / eps});
  }
  out.push_back(entry("push.cutoff.phi", phi_err, cfg.tol_identity, 2 * N, "phi = 1 on r <= eps/4, 0 on r >= 3eps/4"));
  out.push_back(entry("push.cutoff.f", f_err, cfg.tol_identity, 2 * N, "f = 1 on [0, g], 0 off [-eps/2, g + eps/2]"));
  out.push_back(
      entry("push.cutoff.psi", psi_err, cfg.tol_identity, 2 * N, "psi' = 1 on |s| <= eps/4, psi = psi' = 0 on |s| > 3eps/4"));
  out.push_back(entry("push.cutoff.slope", slope, 4.0, N, "max(eps |phi'|, eps |f'|, |psi| / eps)"));

  // Psi is the identity off supp G.
  const TubeChart chart = core_chart(cfg, 1.0, g);
  const auto Psi = push_map(chart, FlowOptions{1e-2, 1e6});
  double moved = 0.0;
  for (int k = 0; k < N; ++k) {
    TubeCoords c;
    c.tau = -eps + (g + 2.0 * eps) * unit(rng);
    c.s = eps * (2.0 * unit(rng) - 1.0);
    c.a = Vec::Constant(cfg.n - 1, eps * (2.0 * unit(rng) - 1.0));
    c.b = Vec::Constant(cfg.n - 1, eps * (2.0 * unit(rng) - 1.0));
    // Push one coordinate past the support of its factor.
    switch (k % 3) {
      case 0: c.s = (c.s < 0 ? -1.0 : 1.0) * eps * (0.75 + 0.25 * unit(rng)); break;
      case 1: c.tau = unit(rng) < 0.5 ? -eps * (0.5 + 0.5 * unit(rng)) : g + eps * (0.5 + 0.5 * unit(rng)); break;
      default: c.a(0) = (c.a(0) < 0 ? -1.0 : 1.0) * eps * (0.75 + 0.25 * unit(rng)); break;
    }
    if (k % 2) {
      c.tau += (g + 3.0 * eps) * (unit(rng) < 0.5 ? -1.0 : 1.0);
    }
    const Vec phase = chart.from_tube(c);
    ContactPoint p = ContactPoint::origin(cfg.n);
    p.x = phase.head(cfg.n);
    p.y = phase.tail(cfg.n);
    p.z = box(rng);
    moved = std::max(moved, (Psi(p).packed() - p.packed()).lpNorm<Eigen::Infinity>());
  }
  ReportEntry support = entry("push.support", moved, 0.0, N, "max |Psi(p) - p| off supp G, must be exactly 0");
  out.push_back(support);

  const ContactPoint p = chart.base;
  const ContactMap identity = [](const ContactPoint& q) { return q; };
  const ContactMap reeb = [](const ContactPoint& q) {
    ContactPoint r = q;
    r.z += 0.7;
    return r;
  };
  out.push_back(entry("push.lambda.identity", std::abs(measure_lambda(identity, p) - 1.0), cfg.tol_lambda, 1));
  out.push_back(entry("push.lambda.reeb", std::abs(measure_lambda(reeb, p) - 1.0), cfg.tol_lambda, 1));

  const auto esc = measure_escape(cfg, g);
  out.push_back(entry("push.escape", std::max(0.0, 1.0 - esc.escape / g), 0.2, 1,
                      "1 - (x1 displacement of the core point) / g_cap"));
  return out;
}

EscapeMeasurement measure_escape(const RunConfig& cfg, double g_cap) {
  EscapeMeasurement m;
  m.g_cap = g_cap;
  const FlowOptions opts{1e-2, 1e6};
  const TubeChart chart = core_chart(cfg, 1.0, g_cap);
  const auto Psi = push_map(chart, opts);
  const ContactPoint p = chart.base;
  const int n = cfg.n;
  const auto lam = measure_lambda(Psi, p, {TangentVector::d_z(n), TangentVector::d_x(n, 0), TangentVector::d_x(n, 1)});
  m.lambda = lam.lambda;
  m.lambda_spread = lam.spread;
  m.escape = Psi(p).x(0) - p.x(0);
  // alpha(X'_t) / alpha(X_t) for the push anchored at the moving core point.
  const auto L = [&](double t) { return lift_family(kCoreU, kCoreX2, t, n); };
  const auto moving = [&](const ContactPoint& q, double t) { return push_map(core_chart(cfg, t, g_cap), opts)(q); };
  const auto sample = conjugated_isotopy(L, moving, 1.0);
  m.alpha_ratio = sample.alpha_Xprime / sample.alpha_X;
  return m;
}

MeshedLagrangian trace_mesh(const RunConfig& cfg) {
  const double T = cfg.trace_T;
  const auto Ht = lifted_hamiltonian(extension_family(patch_params(cfg), T), cfg.T_band);
  TraceOptions opts;
  opts.resolution = cfg.mesh_resolution;
  opts.v_resolution = cfg.v_resolution;
  opts.a0 = cfg.a_min;
  opts.a1 = cfg.a_max;
  opts.b0 = cfg.b_min;
  opts.b1 = cfg.b_max;
  opts.v0 = cfg.v_min;
  opts.v1 = cfg.v_max;
  opts.flow.step = cfg.trace_step;
  opts.jobs = cfg.effective_jobs();
  const int n = cfg.n;
  return trace_cobordism([T, n](double a, double b) { return lift_family(a, b, -T, n); }, Ht, opts);
}

std::vector<ReportEntry> cobordism_checks(const RunConfig& cfg, const MeshedLagrangian& mesh) {
  std::vector<ReportEntry> out;
  out.push_back(check_lagrangian(mesh, cfg.tol_fd, 3, cfg.min_order));
  ExactOptions eo;
  eo.tol = cfg.tol_fd;
  eo.end_variance_tol = cfg.tol_end_variance;
  eo.band = 3.0 * cfg.trace_T;
  eo.min_order = cfg.min_order;
  for (auto& e : check_exact(mesh, eo)) out.push_back(e);
  for (auto& e : out) apply_order_window(e, cfg);
  const double T = cfg.trace_T;
  auto dist = [](double t) {
    return [t](const ContactPoint& p) { return project_to_lift(p, t).distance; };
  };
  out.push_back(check_ends(mesh, dist(-T), dist(T), 3.0 * T, cfg.T_band, cfg.tol_ends));
  return out;
}

namespace {

constexpr double kControlAmplitude = 1e-3;
constexpr double kControlEta = 1e-2;
constexpr double kControlT = 0.5;

std::vector<ReportEntry> raw_controls(const RunConfig& cfg, const MeshedLagrangian& mesh) {
  auto leg = check_legendrian(perturbed_lift_samples(kControlT, cfg.identity_grid, kControlAmplitude, cfg.seed),
                              cfg.tol_legendrian);
  auto lag = check_lagrangian(non_closed_graph_mesh(mesh.Na, mesh.v0, mesh.v1), cfg.tol_fd, 3, cfg.min_order);
  ExactOptions eo;
  eo.tol = cfg.tol_fd;
  eo.end_variance_tol = cfg.tol_end_variance;
  eo.band = 3.0 * cfg.trace_T;
  eo.min_order = cfg.min_order;
  auto ex = check_exact(non_hamiltonian_perturbation(mesh, kControlEta), eo).front();
  return {leg, lag, ex};
}

}  // namespace

std::vector<ReportEntry> control_checks(const RunConfig& cfg, const MeshedLagrangian& mesh) {
  const auto raw = raw_controls(cfg, mesh);
  return {control_entry("control.legendrian", raw[0], cfg.control_margin),
          control_entry("control.lagrangian", raw[1], cfg.control_margin),
          control_entry("control.exact", raw[2], cfg.control_margin)};
}

std::vector<ReportEntry> control_as_input_checks(const RunConfig& cfg, const MeshedLagrangian& mesh) {
  return raw_controls(cfg, mesh);
}

namespace {

VerificationReport new_report(const std::string& title, const RunConfig& cfg) {
  VerificationReport r;
  r.title = title;
  r.meta = {{"seed", std::to_string(cfg.seed)},
            {"n", std::to_string(cfg.n)},
            {"T", format_double(cfg.T)},
            {"trace_T", format_double(cfg.trace_T)},
            {"T_band", format_double(cfg.T_band)},
            {"epsilon", format_double(cfg.epsilon)},
            {"delta", format_double(cfg.delta)},
            {"g_cap", format_double(cfg.g_cap)},
            {"negative_control", cfg.negative_control ? "true" : "false"}};
  return r;
}

void append(VerificationReport& r, const std::vector<ReportEntry>& entries) {
  r.entries.insert(r.entries.end(), entries.begin(), entries.end());
}

bool strictly_increasing(const std::vector<double>& xs) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) return false;
  }
  return true;
}

std::string value_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

ReportEntry info(const std::string& name, double value, const std::string& note = "") {
  ReportEntry e;
  e.name = name;
  e.residual = value;
  e.raw_residual = value;
  e.tolerance = INFINITY;
  e.samples = 1;
  e.pass = true;
  e.note = note;
  return e;
}

ReportEntry flag(const std::string& name, bool ok, const std::string& note) {
  ReportEntry e;
  e.name = name;
  e.residual = ok ? 0.0 : 1.0;
  e.raw_residual = e.residual;
  e.tolerance = 0.0;
  e.samples = 1;
  e.pass = ok;
  e.note = note;
  return e;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void print_summary(const VerificationReport& r) {
  for (const auto& e : r.entries) {
    char order[32] = "NA";
    if (e.order) std::snprintf(order, sizeof order, "%.3f", *e.order);
    std::printf("%s %-24s residual %10.3e  tolerance %9.2e  order %s\n", e.pass ? "PASS" : "FAIL", e.name.c_str(),
                e.residual, e.tolerance, order);
  }
}

}  // namespace

VerificationReport verify_report(const RunConfig& cfg) { return verify_report(cfg, trace_mesh(cfg)); }

VerificationReport verify_report(const RunConfig& cfg, const MeshedLagrangian& mesh) {
  VerificationReport r = new_report("wcl verify", cfg);
  append(r, identity_checks(cfg));
  if (cfg.negative_control) {
    const auto controls = control_as_input_checks(cfg, mesh);
    r.entries.push_back(controls[0]);
    append(r, {legendrian_checks(cfg)[1]});
    append(r, transport_checks(cfg));
    append(r, push_checks(cfg));
    r.entries.push_back(controls[1]);
    r.entries.push_back(controls[2]);
    return r;
  }
  append(r, legendrian_checks(cfg));
  append(r, transport_checks(cfg));
  append(r, push_checks(cfg));
  append(r, cobordism_checks(cfg, mesh));
  append(r, control_checks(cfg, mesh));
  return r;
}

SweepResult run_sweep(const RunConfig& cfg, const std::string& parameter, const std::vector<double>& values) {
  if (values.empty()) throw ConfigError("sweep: no values");
  SweepResult out;
  out.report = new_report("wcl sweep " + parameter, cfg);
  out.report.meta.emplace_back("parameter", parameter);
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  if (parameter == "g_cap") {
    std::vector<double> lambdas, escapes;
    for (double g : sorted) {
      const auto m = measure_escape(cfg, g);
      const std::string key = "g_cap=" + value_label(g);
      out.report.entries.push_back(info(key + ".lambda", m.lambda, "conformal factor at the core point"));
      out.report.entries.push_back(info(key + ".escape", m.escape, "x1 displacement of the core point"));
      out.report.entries.push_back(
          info(key + ".alpha_ratio", m.alpha_ratio, "alpha(X'_t) / alpha(X_t) with the anchor moving in t"));
      lambdas.push_back(m.lambda);
      escapes.push_back(m.escape);
    }
    out.lambda_increasing = strictly_increasing(lambdas);
    out.escape_increasing = strictly_increasing(escapes);
    out.report.entries.push_back(flag("monotone.lambda", out.lambda_increasing, "lambda strictly increasing in g_cap"));
    out.report.entries.push_back(flag("monotone.escape", out.escape_increasing, "escape strictly increasing in g_cap"));
    return out;
  }
  if (parameter == "epsilon" || parameter == "delta") {
    for (double x : sorted) {
      RunConfig c = cfg;
      (parameter == "epsilon" ? c.epsilon : c.delta) = x;
      c.validate();
      for (auto e : transport_checks(c)) {
        e.name = parameter + "=" + value_label(x) + "." + e.name;
        out.report.entries.push_back(e);
      }
    }
    return out;
  }
  if (parameter == "mesh") {
    for (double x : sorted) {
      RunConfig c = cfg;
      c.mesh_resolution = static_cast<int>(std::lround(x));
      c.validate();
      const auto mesh = trace_mesh(c);
      for (auto e : cobordism_checks(c, mesh)) {
        e.name = "mesh=" + value_label(x) + "." + e.name;
        out.report.entries.push_back(e);
      }
    }
    return out;
  }
  throw ConfigError("sweep: unknown parameter '" + parameter + "'");
}

std::string front_filename(double t, const std::string& projection) {
  return "front_t" + value_label(t) + "_" + projection + ".svg";
}

int cmd_verify(const RunConfig& cfg) {
  const auto r = verify_report(cfg);
  write_text(std::filesystem::path(cfg.out_dir) / "verify_report.txt", r.serialize());
  print_summary(r);
  return r.all_pass() ? 0 : 1;
}

int cmd_trace(const RunConfig& cfg) {
  const auto mesh = trace_mesh(cfg);
  VerificationReport r = new_report("wcl trace", cfg);
  append(r, cobordism_checks(cfg, mesh));
  write_text(std::filesystem::path(cfg.out_dir) / "trace_mesh.txt", serialize_mesh(mesh));
  write_text(std::filesystem::path(cfg.out_dir) / "trace_report.txt", r.serialize());
  print_summary(r);
  return r.all_pass() ? 0 : 1;
}

int cmd_render(const RunConfig& cfg) {
  std::vector<FrontProjection> projections;
  for (const auto& name : cfg.render_projections) projections.push_back(parse_projection(name));
  if (cfg.render_t.empty()) return 0;
  const std::filesystem::path dir(cfg.out_dir);
  PatchParams params = patch_params(cfg);
  for (double t : cfg.render_t) {
    const auto chart = WrinkleChart::make(t, cfg.T, cfg.n);
    for (auto proj : projections) {
      RenderSpec spec;
      spec.projection = proj;
      spec.t_values = {t};
      spec.resolution = cfg.render_resolution;
      spec.overlay_regions = spec.overlay_core = proj == FrontProjection::UX2;
      params.t = t;
      write_text(dir / front_filename(t, to_string(proj)), render_front(chart, spec, params));
    }
    // Two nested wrinkles, the inner one born later and inside the outer core.
    NestedConfig nested;
    NestedWrinkle outer{WrinkleChart::make(t, cfg.T, cfg.n), {0.0, 0.0}, 1.0, {}};
    NestedWrinkle inner{WrinkleChart::make(t / 2.0, cfg.T, cfg.n), {0.1, 0.0}, 0.4, {}};
    inner.inner = {0};
    nested.wrinkles = {outer, inner};
    RenderSpec spec;
    spec.resolution = cfg.render_resolution;
    write_text(dir / ("nested_t" + value_label(t) + ".svg"), render_nested(nested, spec));
  }
  RenderSpec spec;
  spec.resolution = cfg.render_resolution;
  write_text(dir / "regions.svg", render_regions(patch_params(cfg), spec));
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  const auto res = run_sweep(cfg, cfg.sweep_parameter, cfg.sweep_values);
  write_text(std::filesystem::path(cfg.out_dir) / ("sweep_" + cfg.sweep_parameter + ".txt"), res.report.serialize());
  print_summary(res.report);
  return res.report.all_pass() ? 0 : 1;
}

int cmd_report(const RunConfig& cfg) {
  const std::filesystem::path dir(cfg.out_dir);
  if (!std::filesystem::is_directory(dir)) throw ConfigError("report: no output directory '" + dir.string() + "'");
  std::vector<std::filesystem::path> files;
  for (const auto& f : std::filesystem::directory_iterator(dir)) {
    const auto name = f.path().filename().string();
    if (name.ends_with("_report.txt") || (name.rfind("sweep_", 0) == 0 && name.ends_with(".txt"))) {
      files.push_back(f.path());
    }
  }
  if (files.empty()) throw ConfigError("report: no reports in '" + dir.string() + "'");
  std::sort(files.begin(), files.end());
  bool pass = true;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto r = VerificationReport::parse(ss.str());
    std::printf("== %s (%s)\n", f.filename().string().c_str(), r.title.c_str());
    print_summary(r);
    pass = pass && r.all_pass();
  }
  return pass ? 0 : 1;
}

}  // namespace wcl
