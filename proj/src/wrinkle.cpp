#include "wcl/wrinkle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace wcl {

WrinkleChart WrinkleChart::make(double t, double T, int n) {
  WrinkleChart c;
  c.n = n;
  c.t = t;
  c.T = T;
  c.t_birth = -T / 2.0;
  c.t_death = T / 2.0;
  c.validate();
  return c;
}

void WrinkleChart::validate() const {
  if (n < 2) throw DomainError("WrinkleChart: n must be >= 2");
  if (!(T > 0.0)) throw DomainError("WrinkleChart: T must be positive");
  if (!(t_birth <= t_death) || t_birth < -T || t_death > T) {
    throw DomainError("WrinkleChart: wrinkle lifetime must lie in [-T, T]");
  }
}

ContactPoint lift_family(double u, double x2, double t, int n, const Vec& slow) {
  if (n < 2) throw DomainError("lift_family: n must be >= 2");
  if (slow.size() != 0 && slow.size() != n - 2) throw DimensionMismatch("lift_family: slow coordinates");
  const auto L = lift_coords(u, x2, t);
  ContactPoint p = ContactPoint::origin(n);
  p.x(0) = L.x1;
  p.x(1) = L.x2;
  if (slow.size() != 0) p.x.tail(n - 2) = slow;
  p.y(0) = L.y1;
  p.y(1) = L.y2;
  p.z = L.z;
  return p;
}

ContactPoint lift_family(const ParamPoint& q, double t, int n) {
  if (q.v.size() != n - 1) throw DimensionMismatch("lift_family: ParamPoint has wrong slow dimension");
  return lift_family(q.u, q.v(0), t, n, q.v.tail(n - 2));
}

Eigen::MatrixXd jacobian(double u, double x2, double t, int n) {
  const double c = t - x2 * x2;
  const double a = u * u - c;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, 2 * n + 1);
  // d/du
  J(0, 0) = 3.0 * a;
  J(0, n) = 2.0 * u / 3.0;
  J(0, n + 1) = -2.0 * u * u * x2 - 2.0 * x2 * c;
  J(0, 2 * n) = a * a;
  // d/dx2
  J(1, 0) = 6.0 * u * x2;
  J(1, 1) = 1.0;
  J(1, n) = 2.0 * x2 / 3.0;
  J(1, n + 1) = -2.0 * u * u * u / 3.0 - 2.0 * u * c + 4.0 * u * x2 * x2;
  J(1, 2 * n) = 4.0 * u * u * u * x2 / 3.0 - 4.0 * u * c * x2;
  for (int i = 2; i < n; ++i) J(i, i) = 1.0;
  return J;
}

TangentVector isotopy_field_Xt(double u, double x2, double t, int n) {
  const double c = t - x2 * x2;
  TangentVector X = TangentVector::zero(n);
  X.dx(0) = -3.0 * u;
  X.dy(0) = -1.0 / 3.0;
  X.dy(1) = -2.0 * u * x2;
  X.dz = -2.0 * u * u * u / 3.0 + 2.0 * u * c;
  return X;
}

double alpha_Xt(double u, double x2, double t) { return u * u * u / 3.0 + u * (t - x2 * x2); }

double alpha_Xt_via_x1(double u, double x2, double t) {
  const double c = t - x2 * x2;
  return (u * u * u - 3.0 * u * c) / 3.0 + 2.0 * u * c;
}

std::optional<double> u_from_y1(const ContactPoint& p, double t, int sign) {
  const double radicand = 3.0 * p.y(0) - p.x(1) * p.x(1) + t;
  if (radicand < 0.0) return std::nullopt;
  return (sign < 0 ? -1.0 : 1.0) * std::sqrt(radicand);
}

std::optional<double> u_from_y2_x1(const ContactPoint& p, double t) {
  const double x2 = p.x(1);
  const double denom = 4.0 * x2 * (t - x2 * x2);
  if (denom == 0.0) return std::nullopt;
  return -(p.y(1) + 2.0 * p.x(0) * x2 / 3.0) / denom;
}

namespace {

Eigen::Matrix<double, 2, 5> core_block(double u, double x2, double t) { return jacobian(u, x2, t, 2); }

double sigma_min(const Eigen::Matrix<double, 2, 5>& J) {
  Eigen::JacobiSVD<Eigen::Matrix<double, 2, 5>> svd(J);
  return svd.singularValues()(1);
}

Eigen::Matrix<double, 10, 1> minors(double u, double x2, double t) {
  const auto J = core_block(u, x2, t);
  Eigen::Matrix<double, 10, 1> m;
  int k = 0;
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) m(k++) = J(0, i) * J(1, j) - J(0, j) * J(1, i);
  }
  return m;
}

// Gauss-Newton on the 2x2 minors; they vanish exactly where the rank drops.
Eigen::Vector2d refine_rank_drop(Eigen::Vector2d q, double t) {
  constexpr double h = 1e-7;
  for (int it = 0; it < 60; ++it) {
    const auto m = minors(q(0), q(1), t);
    if (m.norm() < 1e-15) break;
    Eigen::Matrix<double, 10, 2> D;
    D.col(0) = (minors(q(0) + h, q(1), t) - minors(q(0) - h, q(1), t)) / (2 * h);
    D.col(1) = (minors(q(0), q(1) + h, t) - minors(q(0), q(1) - h, t)) / (2 * h);
    const Eigen::Vector2d step = D.colPivHouseholderQr().solve(-m);
    if (!step.allFinite()) break;
    q += step;
    if (step.norm() < 1e-15) break;
  }
  return q;
}

}  // namespace

double smallest_singular_value(double u, double x2, double t) { return sigma_min(core_block(u, x2, t)); }

std::vector<SingularPoint> singular_locus_certified(double t, const SingularLocusOptions& opts) {
  const int N = std::max(opts.grid, 5);
  auto coord = [&](int k, double extent) { return -extent + 2.0 * extent * k / (N - 1); };
  std::vector<double> sigma(static_cast<std::size_t>(N) * N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      sigma[i * N + j] = smallest_singular_value(coord(i, opts.u_extent), coord(j, opts.x2_extent), t);
    }
  }

  std::vector<SingularPoint> found;
  for (int i = 1; i + 1 < N; ++i) {
    for (int j = 1; j + 1 < N; ++j) {
      const double s = sigma[i * N + j];
      bool local_min = true;
      for (int di = -1; di <= 1 && local_min; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if ((di || dj) && sigma[(i + di) * N + (j + dj)] < s) {
            local_min = false;
            break;
          }
        }
      }
      if (!local_min) continue;

      const Eigen::Vector2d q =
          refine_rank_drop({coord(i, opts.u_extent), coord(j, opts.x2_extent)}, t);
      const double sm = smallest_singular_value(q(0), q(1), t);
      if (!(sm < opts.rank_tol)) continue;

      const std::array<Eigen::Vector2d, 4> offsets = {
          Eigen::Vector2d(opts.guard_offset, 0), Eigen::Vector2d(-opts.guard_offset, 0),
          Eigen::Vector2d(0, opts.guard_offset), Eigen::Vector2d(0, -opts.guard_offset)};
      double guard = std::numeric_limits<double>::infinity();
      for (const auto& o : offsets) guard = std::min(guard, smallest_singular_value(q(0) + o(0), q(1) + o(1), t));
      if (!(guard > opts.guard_tol) || guard < opts.guard_ratio * sm) continue;

      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const SingularPoint& s) {
        return std::hypot(s.q.u - q(0), s.q.x2() - q(1)) < 1e-6;
      });
      if (duplicate) continue;

      SingularPoint sp;
      sp.q.u = q(0);
      sp.q.v = Vec::Constant(1, q(1));
      sp.sigma_min = sm;
      sp.guard_sigma = guard;
      sp.max_minor = minors(q(0), q(1), t).cwiseAbs().maxCoeff();
      found.push_back(sp);
    }
  }
  std::sort(found.begin(), found.end(), [](const SingularPoint& a, const SingularPoint& b) {
    return a.q.u != b.q.u ? a.q.u < b.q.u : a.q.x2() < b.q.x2();
  });
  return found;
}

std::vector<ParamPoint> singular_locus(double t, const SingularLocusOptions& opts) {
  std::vector<ParamPoint> out;
  for (auto& s : singular_locus_certified(t, opts)) out.push_back(s.q);
  return out;
}

NestedResult validate_nested(const NestedConfig& config) {
  if (config.wrinkles.empty()) throw DomainError("validate_nested: empty configuration");
  const auto& w = config.wrinkles;
  for (std::size_t o = 0; o < w.size(); ++o) {
    for (std::size_t i : w[o].inner) {
      if (i >= w.size() || i == o) throw DomainError("validate_nested: bad inner index " + std::to_string(i));
      const double gap = (w[o].center - w[i].center).norm() + w[o].core_radius;
      if (!(gap < w[i].core_radius)) return {false, std::make_pair(o, i)};
    }
  }
  return {};
}

}  // namespace wcl
