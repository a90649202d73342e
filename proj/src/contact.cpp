#include "wcl/contact.hpp"

#include <cmath>
#include <string>

namespace wcl {

namespace {

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) + " vs " +
                            std::to_string(b));
  }
}

void require_consistent(const TangentVector& w, const char* what) {
  if (w.dx.size() != w.dy.size()) throw DimensionMismatch(std::string(what) + ": dx/dy sizes differ");
}

}  // namespace

ContactPoint ContactPoint::origin(int n) { return {Vec::Zero(n), Vec::Zero(n), 0.0}; }

Vec ContactPoint::packed() const {
  const int n = dim();
  Vec s(2 * n + 1);
  s << x, y, z;
  return s;
}

ContactPoint ContactPoint::unpack(const Eigen::Ref<const Vec>& s) {
  if (s.size() % 2 != 1) throw DimensionMismatch("ContactPoint::unpack: even length");
  const int n = static_cast<int>(s.size() / 2);
  return {s.head(n), s.segment(n, n), s(2 * n)};
}

bool ContactPoint::finite() const { return x.allFinite() && y.allFinite() && std::isfinite(z); }

TangentVector TangentVector::zero(int n) { return {Vec::Zero(n), Vec::Zero(n), 0.0}; }

TangentVector TangentVector::d_x(int n, int i) {
  auto w = zero(n);
  w.dx(i) = 1.0;
  return w;
}

TangentVector TangentVector::d_y(int n, int i) {
  auto w = zero(n);
  w.dy(i) = 1.0;
  return w;
}

TangentVector TangentVector::d_z(int n) {
  auto w = zero(n);
  w.dz = 1.0;
  return w;
}

Vec TangentVector::packed() const {
  const int n = dim();
  Vec s(2 * n + 1);
  s << dx, dy, dz;
  return s;
}

TangentVector TangentVector::unpack(const Eigen::Ref<const Vec>& s) {
  if (s.size() % 2 != 1) throw DimensionMismatch("TangentVector::unpack: even length");
  const int n = static_cast<int>(s.size() / 2);
  return {s.head(n), s.segment(n, n), s(2 * n)};
}

Vec SymplectizationPoint::packed() const {
  const int n = p.dim();
  Vec s(2 * n + 2);
  s << p.x, p.y, p.z, v;
  return s;
}

SymplectizationPoint SymplectizationPoint::unpack(const Eigen::Ref<const Vec>& s) {
  if (s.size() % 2 != 0) throw DimensionMismatch("SymplectizationPoint::unpack: odd length");
  return {ContactPoint::unpack(s.head(s.size() - 1)), s(s.size() - 1)};
}

Vec SymplectizationVector::packed() const {
  const int n = w.dim();
  Vec s(2 * n + 2);
  s << w.dx, w.dy, w.dz, dv;
  return s;
}

SymplectizationVector SymplectizationVector::unpack(const Eigen::Ref<const Vec>& s) {
  if (s.size() % 2 != 0) throw DimensionMismatch("SymplectizationVector::unpack: odd length");
  return {TangentVector::unpack(s.head(s.size() - 1)), s(s.size() - 1)};
}

bool Gradient::finite() const { return dx.allFinite() && dy.allFinite() && std::isfinite(dz); }

Gradient fd_gradient(const std::function<double(const ContactPoint&)>& f, const ContactPoint& p) {
  const int n = p.dim();
  Gradient g{Vec(n), Vec(n), 0.0};
  ContactPoint q = p;
  auto central = [&](double& coord) {
    const double c = coord;
    const double h = 1e-5 * std::max(1.0, std::abs(c));
    coord = c + h;
    const double fp = f(q);
    coord = c - h;
    const double fm = f(q);
    coord = c;
    return (fp - fm) / (2.0 * h);
  };
  for (int i = 0; i < n; ++i) g.dx(i) = central(q.x(i));
  for (int i = 0; i < n; ++i) g.dy(i) = central(q.y(i));
  g.dz = central(q.z);
  return g;
}

ScalarField ScalarField::constant(double c) {
  return ScalarField([c](const ContactPoint&) { return c; },
                     [](const ContactPoint& p) {
                       return Gradient{Vec::Zero(p.dim()), Vec::Zero(p.dim()), 0.0};
                     });
}

double alpha_eval(const ContactPoint& p, const TangentVector& w) {
  require_consistent(w, "alpha_eval");
  require_same_dim(p.dim(), w.dim(), "alpha_eval");
  return w.dz - p.y.dot(w.dx);
}

double dalpha_eval(const ContactPoint& p, const TangentVector& w1, const TangentVector& w2) {
  require_consistent(w1, "dalpha_eval");
  require_consistent(w2, "dalpha_eval");
  require_same_dim(p.dim(), w1.dim(), "dalpha_eval");
  require_same_dim(p.dim(), w2.dim(), "dalpha_eval");
  return w1.dx.dot(w2.dy) - w1.dy.dot(w2.dx);
}

double symp_form_eval(const SymplectizationPoint& P, const SymplectizationVector& W1,
                      const SymplectizationVector& W2) {
  const double scale = std::exp(P.v);
  if (!std::isfinite(scale)) throw OverflowError("symp_form_eval: e^v overflows at v = " + std::to_string(P.v));
  const double inner = dalpha_eval(P.p, W1.w, W2.w) + W1.dv * alpha_eval(P.p, W2.w) -
                       W2.dv * alpha_eval(P.p, W1.w);
  return scale * inner;
}

TangentVector contact_vector_field(double H, const Gradient& g, const ContactPoint& p) {
  if (!g.finite() || !std::isfinite(H)) throw DomainError("contact_vector_field: non-finite Hamiltonian data");
  require_same_dim(p.dim(), static_cast<int>(g.dx.size()), "contact_vector_field");
  TangentVector X;
  X.dx = -g.dy;
  X.dy = g.dx + g.dz * p.y;
  X.dz = H - p.y.dot(g.dy);
  return X;
}

TangentVector contact_vector_field(const ScalarField& H, const ContactPoint& p) {
  return contact_vector_field(H(p), H.gradient(p), p);
}

}  // namespace wcl
