#include "wcl/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "wcl/wrinkle.hpp"

namespace wcl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double richardson(double fine, double mid, double coarse) { return (64.0 * fine - 20.0 * mid + coarse) / 45.0; }

bool order_ok(const Convergence& c, double min_order) { return !c.order || c.floor || *c.order >= min_order; }

std::string describe_order(const Convergence& c) {
  if (!c.order) return "order NA";
  std::ostringstream s;
  s << "order " << format_double(*c.order);
  if (c.floor) s << " (roundoff floor)";
  return s.str();
}

struct TruncationCount {
  std::size_t truncated = 0;
  std::size_t non_core = 0;
  std::size_t truncated_non_core = 0;

  bool valid() const { return non_core == 0 || truncated_non_core * 5 <= non_core; }
};

TruncationCount count_truncation(const MeshedLagrangian& m) {
  TruncationCount c;
  for (auto f : m.flags) {
    if (f != NodeOk) ++c.truncated;
    if (!(f & NodeCore)) {
      ++c.non_core;
      if (f & NodeTruncated) ++c.truncated_non_core;
    }
  }
  return c;
}

void apply_truncation(ReportEntry& e, const TruncationCount& c) {
  e.truncated = c.truncated;
  if (!c.valid()) {
    e.pass = false;
    e.note += "; more than 20% of non-core nodes truncated";
  }
}

std::array<int, 3> step_of(int dir) {
  std::array<int, 3> d{0, 0, 0};
  d[dir] = 1;
  return d;
}

double spacing(const MeshedLagrangian& m, int dir) {
  switch (dir) {
    case 0: return (m.a1 - m.a0) / (m.Na - 1);
    case 1: return (m.b1 - m.b0) / (m.Nb - 1);
    default: return (m.v1 - m.v0) / (m.Nv - 1);
  }
}

int extent(const MeshedLagrangian& m, int dir) { return dir == 0 ? m.Na : (dir == 1 ? m.Nb : m.Nv); }

// Central-difference tangents at an interior node; nullopt if any stencil
// node is unusable.
std::optional<std::array<SymplectizationVector, 3>> tangents(const MeshedLagrangian& m, int i, int j, int k) {
  std::array<SymplectizationVector, 3> out;
  for (int d = 0; d < 3; ++d) {
    const auto s = step_of(d);
    const int ip = i + s[0], jp = j + s[1], kp = k + s[2];
    const int im = i - s[0], jm = j - s[1], km = k - s[2];
    if (!m.usable(ip, jp, kp) || !m.usable(im, jm, km)) return std::nullopt;
    out[d] = SymplectizationVector::unpack((m.nodes[m.index(ip, jp, kp)] - m.nodes[m.index(im, jm, km)]) /
                                           (2.0 * spacing(m, d)));
  }
  return out;
}

// omega on the pairs (a,b), (a,v), (b,v); NaN when unavailable.
std::array<double, 3> omega_pairs(const MeshedLagrangian& m, int i, int j, int k) {
  if (!m.usable(i, j, k)) return {kNaN, kNaN, kNaN};
  const auto t = tangents(m, i, j, k);
  if (!t) return {kNaN, kNaN, kNaN};
  const auto P = m.point(i, j, k);
  return {symp_form_eval(P, (*t)[0], (*t)[1]), symp_form_eval(P, (*t)[0], (*t)[2]),
          symp_form_eval(P, (*t)[1], (*t)[2])};
}

// Chord trapezoid of e^v alpha from node A to node B.
double edge_integral(const Vec& A, const Vec& B, int n) {
  const Vec dx = B.head(n) - A.head(n);
  const double dz = B(2 * n) - A(2 * n);
  const double la = std::exp(A(2 * n + 1)) * (dz - A.segment(n, n).dot(dx));
  const double lb = std::exp(B(2 * n + 1)) * (dz - B.segment(n, n).dot(dx));
  return 0.5 * (la + lb);
}

// Integral along `steps` grid edges in direction dir starting at (i, j, k).
double line_integral(const MeshedLagrangian& m, std::array<int, 3> at, int dir, int steps) {
  double sum = 0.0;
  const int sign = steps < 0 ? -1 : 1;
  for (int s = 0; s < std::abs(steps); ++s) {
    std::array<int, 3> next = at;
    next[dir] += sign;
    if (!m.usable(at[0], at[1], at[2]) || !m.usable(next[0], next[1], next[2])) return kNaN;
    sum += edge_integral(m.nodes[m.index(at[0], at[1], at[2])], m.nodes[m.index(next[0], next[1], next[2])], m.n);
    at = next;
  }
  return sum;
}

// Boundary of the parameter square with corner `at`, sides `steps` edges long
// in the plane (d1, d2).
double loop_integral(const MeshedLagrangian& m, std::array<int, 3> at, int d1, int d2, int steps) {
  double sum = line_integral(m, at, d1, steps);
  at[d1] += steps;
  sum += line_integral(m, at, d2, steps);
  at[d2] += steps;
  sum += line_integral(m, at, d1, -steps);
  at[d1] -= steps;
  sum += line_integral(m, at, d2, -steps);
  return sum;
}

constexpr std::array<std::array<int, 2>, 3> kPlanes{{{0, 1}, {0, 2}, {1, 2}}};

// Primitive of e^v alpha from node (0,0,0) along the grid in the given
// direction order; NaN where the path crosses an unusable node.
std::vector<double> primitive(const MeshedLagrangian& m, std::array<int, 3> order) {
  std::vector<double> f(m.size(), kNaN);
  const std::array<int, 3> N{m.Na, m.Nb, m.Nv};
  // Walk the first axis, then sweep the second from every point, then the third.
  auto at = [&](const std::array<int, 3>& q) -> double& { return f[m.index(q[0], q[1], q[2])]; };
  std::array<int, 3> q{0, 0, 0};
  if (!m.usable(0, 0, 0)) return f;
  at(q) = 0.0;
  for (int stage = 0; stage < 3; ++stage) {
    const int d = order[stage];
    // Iterate over all nodes whose coordinates along order[stage+1..] are zero.
    std::array<int, 3> lim{1, 1, 1};
    for (int s = 0; s <= stage; ++s) lim[order[s]] = N[order[s]];
    for (int k = 0; k < lim[2]; ++k) {
      for (int j = 0; j < lim[1]; ++j) {
        for (int i = 0; i < lim[0]; ++i) {
          std::array<int, 3> p{i, j, k};
          if (p[d] == 0) continue;
          std::array<int, 3> prev = p;
          prev[d] -= 1;
          const double base = at(prev);
          if (std::isnan(base) || !m.usable(p[0], p[1], p[2])) continue;
          at(p) = base + edge_integral(m.nodes[m.index(prev[0], prev[1], prev[2])], m.nodes[m.index(i, j, k)], m.n);
        }
      }
    }
  }
  return f;
}

double variance(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return var / static_cast<double>(xs.size());
}

}  // namespace

ReportEntry check_legendrian(const std::vector<FramedSample>& samples, double tol) {
  ReportEntry e;
  e.name = "legendrian";
  e.tolerance = tol;
  std::size_t degenerate = 0;
  for (const auto& s : samples) {
    for (const auto& w : s.frame) {
      ++e.samples;
      if (w.packed().squaredNorm() == 0.0) ++degenerate;
      e.residual = std::max(e.residual, std::abs(alpha_eval(s.p, w)));
    }
  }
  e.raw_residual = e.residual;
  e.pass = e.residual <= tol;
  e.note = "max |alpha(frame)|";
  if (degenerate > 0) e.note += "; degenerate frame vectors: " + std::to_string(degenerate);
  return e;
}

std::vector<FramedSample> lift_samples(double t, int grid, double u_extent, double x2_extent) {
  if (grid < 2) throw DomainError("lift_samples: grid must be at least 2");
  std::vector<FramedSample> out;
  out.reserve(static_cast<std::size_t>(grid) * grid);
  for (int i = 0; i < grid; ++i) {
    const double u = -u_extent + 2.0 * u_extent * i / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      const double x2 = -x2_extent + 2.0 * x2_extent * j / (grid - 1);
      const auto J = jacobian(u, x2, t);
      out.push_back({lift_family(u, x2, t), {TangentVector::unpack(J.row(0).transpose()),
                                             TangentVector::unpack(J.row(1).transpose())}});
    }
  }
  return out;
}

Convergence convergence_study(const std::vector<double>& residuals, const std::vector<double>& spacings) {
  if (residuals.size() != spacings.size()) throw DimensionMismatch("convergence_study: sizes differ");
  if (residuals.size() < 3) throw DomainError("convergence_study: need at least 3 resolutions");
  Convergence c;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    if (residuals[i] > 0.0 && spacings[i] > 0.0) {
      lx.push_back(std::log(spacings[i]));
      ly.push_back(std::log(residuals[i]));
    }
  }
  if (lx.size() < 2) return c;
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  c.order = sxy / sxx;
  // Order by decreasing spacing and look for a stalled, tiny sequence.
  std::vector<std::size_t> idx(residuals.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return spacings[a] > spacings[b]; });
  bool non_decreasing = true;
  double biggest = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    biggest = std::max(biggest, residuals[idx[k]]);
    if (k > 0 && residuals[idx[k]] < residuals[idx[k - 1]]) non_decreasing = false;
  }
  c.floor = non_decreasing && biggest < 1e-11;
  return c;
}

std::vector<MeshedLagrangian> mesh_ladder(const MeshedLagrangian& fine, int levels) {
  if (levels < 1) throw DomainError("mesh_ladder: need at least one level");
  std::vector<MeshedLagrangian> out;
  for (int l = levels - 1; l >= 0; --l) out.push_back(l == 0 ? fine : fine.subsample(1 << l));
  return out;
}

ReportEntry check_lagrangian(const MeshedLagrangian& fine, double tol, int levels, double min_order) {
  fine.validate();
  const auto ladder = mesh_ladder(fine, levels);
  const auto& coarse = ladder.front();
  ReportEntry e;
  e.name = "lagrangian";
  e.tolerance = tol;

  std::vector<double> hs;
  double finest = 0.0;
  std::size_t count = 0;
  for (int k = 1; k < fine.Nv - 1; ++k) {
    for (int j = 1; j < fine.Nb - 1; ++j) {
      for (int i = 1; i < fine.Na - 1; ++i) {
        const auto w = omega_pairs(fine, i, j, k);
        if (std::isnan(w[0])) continue;
        ++count;
        for (double x : w) finest = std::max(finest, std::abs(x));
      }
    }
  }
  for (const auto& m : ladder) hs.push_back(spacing(m, 0));
  e.samples = count;
  e.raw_residual = finest;

  // Per-level maxima over the nodes every level shares.
  std::vector<double> raw(ladder.size(), 0.0);
  double extrapolated = 0.0;
  for (int k = 1; k < coarse.Nv - 1; ++k) {
    for (int j = 1; j < coarse.Nb - 1; ++j) {
      for (int i = 1; i < coarse.Na - 1; ++i) {
        std::vector<std::array<double, 3>> w(ladder.size());
        bool ok = true;
        for (std::size_t l = 0; l < ladder.size() && ok; ++l) {
          const int s = 1 << l;
          w[l] = omega_pairs(ladder[l], i * s, j * s, k * s);
          ok = !std::isnan(w[l][0]);
        }
        if (!ok) continue;
        for (int p = 0; p < 3; ++p) {
          for (std::size_t l = 0; l < ladder.size(); ++l) raw[l] = std::max(raw[l], std::abs(w[l][p]));
          if (levels == 3) {
            extrapolated = std::max(extrapolated, std::abs(richardson(w[2][p], w[1][p], w[0][p])));
          }
        }
      }
    }
  }
  e.residual = levels == 3 ? extrapolated : e.raw_residual;
  const auto conv = levels >= 3 ? convergence_study(raw, hs) : Convergence{};
  e.order = conv.order;
  e.floor = conv.floor;
  e.pass = e.residual <= tol && order_ok(conv, min_order);
  e.note = "max |omega(e_i, e_j)|, " + describe_order(conv);
  apply_truncation(e, count_truncation(fine));
  return e;
}

std::vector<ReportEntry> check_exact(const MeshedLagrangian& fine, const ExactOptions& opts) {
  fine.validate();
  if (opts.levels != 3) throw DomainError("check_exact: the extrapolation uses exactly 3 levels");
  const auto ladder = mesh_ladder(fine, 3);
  const auto& coarse = ladder[0];
  const auto trunc = count_truncation(fine);

  // (i) quad loop integrals.
  ReportEntry quad;
  quad.name = "exact.quad";
  quad.tolerance = opts.tol;
  std::vector<double> hs;
  {
    double worst = 0.0;
    std::size_t count = 0;
    for (const auto& pl : kPlanes) {
      const double area = spacing(fine, pl[0]) * spacing(fine, pl[1]);
      for (int k = 0; k < fine.Nv; ++k) {
        for (int j = 0; j < fine.Nb; ++j) {
          for (int i = 0; i < fine.Na; ++i) {
            const std::array<int, 3> at{i, j, k};
            if (at[pl[0]] + 1 >= extent(fine, pl[0]) || at[pl[1]] + 1 >= extent(fine, pl[1])) continue;
            const double I = loop_integral(fine, at, pl[0], pl[1], 1);
            if (std::isnan(I)) continue;
            ++count;
            worst = std::max(worst, std::abs(I) / area);
          }
        }
      }
    }
    quad.raw_residual = worst;
    quad.samples = count;
  }
  for (const auto& m : ladder) hs.push_back(spacing(m, 0));

  // Per-level maxima over the coarse cells, each level integrating along its own edges.
  std::vector<double> raw(3, 0.0);
  double extrapolated = 0.0;
  for (const auto& pl : kPlanes) {
    const double area = spacing(coarse, pl[0]) * spacing(coarse, pl[1]);
    for (int k = 0; k < coarse.Nv; ++k) {
      for (int j = 0; j < coarse.Nb; ++j) {
        for (int i = 0; i < coarse.Na; ++i) {
          const std::array<int, 3> at{i, j, k};
          if (at[pl[0]] + 1 >= extent(coarse, pl[0]) || at[pl[1]] + 1 >= extent(coarse, pl[1])) continue;
          std::array<double, 3> I{};
          for (int l = 0; l < 3; ++l) {
            const int s = 1 << l;
            I[l] = loop_integral(ladder[l], {i * s, j * s, k * s}, pl[0], pl[1], s);
          }
          if (std::isnan(I[0]) || std::isnan(I[1]) || std::isnan(I[2])) continue;
          for (int l = 0; l < 3; ++l) raw[l] = std::max(raw[l], std::abs(I[l]) / area);
          extrapolated = std::max(extrapolated, std::abs(richardson(I[2], I[1], I[0])) / area);
        }
      }
    }
  }
  quad.residual = extrapolated;
  const auto conv = convergence_study(raw, hs);
  quad.order = conv.order;
  quad.floor = conv.floor;
  quad.pass = quad.residual <= opts.tol && order_ok(conv, opts.min_order);
  quad.note = "max |loop integral| / area, " + describe_order(conv);
  apply_truncation(quad, trunc);

  // (ii) path independence of the primitive and (iii) end-band variance.
  const std::array<int, 3> first{0, 1, 2}, second{2, 1, 0};
  std::vector<std::vector<double>> fa, fb;
  for (const auto& m : ladder) {
    fa.push_back(primitive(m, first));
    fb.push_back(primitive(m, second));
  }
  ReportEntry path;
  path.name = "exact.path";
  path.tolerance = opts.tol;
  for (std::size_t q = 0; q < fa.back().size(); ++q) {
    if (!std::isnan(fa.back()[q]) && !std::isnan(fb.back()[q])) {
      path.raw_residual = std::max(path.raw_residual, std::abs(fa.back()[q] - fb.back()[q]));
    }
  }
  std::vector<double> raw_path(3, 0.0);

  std::vector<double> upper, lower, upper_raw, lower_raw;
  double path_extrapolated = 0.0;
  std::size_t shared = 0;
  for (int k = 0; k < coarse.Nv; ++k) {
    for (int j = 0; j < coarse.Nb; ++j) {
      for (int i = 0; i < coarse.Na; ++i) {
        std::array<double, 3> a{}, b{};
        bool ok = true;
        for (int l = 0; l < 3; ++l) {
          const int s = 1 << l;
          const int q = ladder[l].index(i * s, j * s, k * s);
          a[l] = fa[l][q];
          b[l] = fb[l][q];
          ok = ok && !std::isnan(a[l]) && !std::isnan(b[l]);
        }
        if (!ok) continue;
        ++shared;
        for (int l = 0; l < 3; ++l) raw_path[l] = std::max(raw_path[l], std::abs(a[l] - b[l]));
        path_extrapolated = std::max(
            path_extrapolated, std::abs(richardson(a[2] - b[2], a[1] - b[1], a[0] - b[0])));
        const double v = coarse.nodes[coarse.index(i, j, k)](2 * coarse.n + 1);
        const double f = richardson(a[2], a[1], a[0]);
        if (v > opts.band) upper.push_back(f);
        if (v < -opts.band) lower.push_back(f);
      }
    }
  }
  const auto& finest = ladder.back();
  for (std::size_t q = 0; q < finest.size(); ++q) {
    if (std::isnan(fa.back()[q])) continue;
    const double v = finest.nodes[q](2 * finest.n + 1);
    if (v > opts.band) upper_raw.push_back(fa.back()[q]);
    if (v < -opts.band) lower_raw.push_back(fa.back()[q]);
  }
  path.samples = shared;
  path.residual = path_extrapolated;
  const auto conv_path = convergence_study(raw_path, hs);
  path.order = conv_path.order;
  path.floor = conv_path.floor;
  path.pass = path.residual <= opts.tol && order_ok(conv_path, opts.min_order);
  path.note = "max |f(a,b,v order) - f(v,b,a order)|, " + describe_order(conv_path);
  apply_truncation(path, trunc);

  ReportEntry ends;
  ends.name = "exact.end_variance";
  ends.tolerance = opts.end_variance_tol;
  ends.samples = upper.size() + lower.size();
  ends.residual = std::max(variance(upper), variance(lower));
  ends.raw_residual = std::max(variance(upper_raw), variance(lower_raw));
  ends.pass = ends.residual <= opts.end_variance_tol && upper.size() >= 2 && lower.size() >= 2;
  ends.note = "variance of the primitive on v > " + format_double(opts.band) + " (" + std::to_string(upper.size()) +
              " nodes) and v < -" + format_double(opts.band) + " (" + std::to_string(lower.size()) + " nodes)";
  if (upper.size() < 2 || lower.size() < 2) ends.note += "; end band too sparse";
  apply_truncation(ends, trunc);
  return {quad, path, ends};
}

ReportEntry check_ends(const MeshedLagrangian& mesh, const DistanceToLegendrian& to_lower,
                       const DistanceToLegendrian& to_upper, double band, double T_band, double tol) {
  ReportEntry e;
  e.name = "ends";
  e.tolerance = tol;
  std::size_t up = 0, down = 0;
  for (std::size_t q = 0; q < mesh.size(); ++q) {
    if (mesh.flags[q] != NodeOk) continue;
    const auto P = SymplectizationPoint::unpack(mesh.nodes[q]);
    if (P.v > band) {
      e.residual = std::max(e.residual, to_upper(P.p));
      ++up;
    } else if (P.v < -band) {
      e.residual = std::max(e.residual, to_lower(P.p));
      ++down;
    }
  }
  e.samples = up + down;
  e.raw_residual = e.residual;
  e.pass = e.residual <= tol && up > 0 && down > 0;
  e.note = "one-sided distance to the end cylinders (" + std::to_string(down) + " lower, " + std::to_string(up) +
           " upper nodes)";
  if (up == 0 || down == 0) e.note += "; an end band has no nodes";
  if (band < T_band) {
    e.pass = false;
    e.note += "; band " + format_double(band) + " lies inside the cut-off region |v| < " + format_double(T_band);
  }
  apply_truncation(e, count_truncation(mesh));
  return e;
}

std::vector<FramedSample> perturbed_lift_samples(double t, int grid, double amplitude, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> freq(0.5, 2.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  constexpr int modes = 4;
  std::array<double, modes> ku{}, kx{}, ph{};
  for (int m = 0; m < modes; ++m) {
    ku[m] = freq(rng);
    kx[m] = freq(rng);
    ph[m] = phase(rng);
  }
  std::vector<FramedSample> samples;
  const double extent = 1.5;
  for (int i = 0; i < grid; ++i) {
    const double u = -extent + 2.0 * extent * i / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      const double x2 = -extent + 2.0 * extent * j / (grid - 1);
      double N = 0.0, Nu = 0.0, Nx = 0.0;
      for (int m = 0; m < modes; ++m) {
        const double arg = ku[m] * u + kx[m] * x2 + ph[m];
        N += std::sin(arg) / modes;
        Nu += ku[m] * std::cos(arg) / modes;
        Nx += kx[m] * std::cos(arg) / modes;
      }
      auto p = lift_family(u, x2, t);
      p.z += amplitude * N;
      const auto J = jacobian(u, x2, t);
      auto wu = TangentVector::unpack(J.row(0).transpose());
      auto wx = TangentVector::unpack(J.row(1).transpose());
      wu.dz += amplitude * Nu;
      wx.dz += amplitude * Nx;
      samples.push_back({p, {wu, wx}});
    }
  }
  return samples;
}

MeshedLagrangian non_closed_graph_mesh(int resolution, double v0, double v1) {
  MeshedLagrangian m;
  m.n = 2;
  m.Na = m.Nb = m.Nv = resolution;
  m.a0 = m.b0 = -1.0;
  m.a1 = m.b1 = 1.0;
  m.v0 = v0;
  m.v1 = v1;
  m.nodes.resize(static_cast<std::size_t>(resolution) * resolution * resolution);
  m.flags.assign(m.nodes.size(), NodeOk);
  for (int k = 0; k < resolution; ++k) {
    for (int j = 0; j < resolution; ++j) {
      for (int i = 0; i < resolution; ++i) {
        Vec node(6);
        node << m.a(i), m.b(j), -m.b(j), m.a(i), 0.0, m.v(k);
        m.nodes[m.index(i, j, k)] = node;
      }
    }
  }
  m.validate();
  return m;
}

MeshedLagrangian non_hamiltonian_perturbation(const MeshedLagrangian& mesh, double eta) {
  MeshedLagrangian out = mesh;
  const int n = mesh.n;
  for (auto& node : out.nodes) {
    const double x1 = node(0), x2 = node(1);
    node(n) -= eta * x2;
    node(n + 1) += eta * x1;
  }
  return out;
}

}  // namespace wcl
