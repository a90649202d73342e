#pragma once

// Standard contact space R^{2n+1} with alpha = dz - sum_i y_i dx_i, its
// contact Hamiltonian vector fields, and the symplectization
// (R^{2n+1} x R, d(e^v alpha)).
//
// Packed coordinate layout used throughout the library:
//   contact point        [x_1..x_n, y_1..y_n, z]      (size 2n+1)
//   symplectization pt   [x_1..x_n, y_1..y_n, z, v]   (size 2n+2)

#include <Eigen/Dense>

#include <functional>

#include "wcl/errors.hpp"

namespace wcl {

using Vec = Eigen::VectorXd;

struct ContactPoint {
  Vec x;
  Vec y;
  double z = 0.0;

  int dim() const { return static_cast<int>(x.size()); }
  static ContactPoint origin(int n);
  Vec packed() const;
  static ContactPoint unpack(const Eigen::Ref<const Vec>& s);
  bool finite() const;
};

struct TangentVector {
  Vec dx;
  Vec dy;
  double dz = 0.0;

  int dim() const { return static_cast<int>(dx.size()); }
  static TangentVector zero(int n);
  // Coordinate basis vectors.
  static TangentVector d_x(int n, int i);
  static TangentVector d_y(int n, int i);
  static TangentVector d_z(int n);
  Vec packed() const;
  static TangentVector unpack(const Eigen::Ref<const Vec>& s);
};

struct SymplectizationPoint {
  ContactPoint p;
  double v = 0.0;

  Vec packed() const;
  static SymplectizationPoint unpack(const Eigen::Ref<const Vec>& s);
};

struct SymplectizationVector {
  TangentVector w;
  double dv = 0.0;

  Vec packed() const;
  static SymplectizationVector unpack(const Eigen::Ref<const Vec>& s);
};

// Partial derivatives of a scalar function on contact space.
struct Gradient {
  Vec dx;
  Vec dy;
  double dz = 0.0;

  bool finite() const;
};

// Central differences with h = 1e-5 * max(1, |coordinate|).
Gradient fd_gradient(const std::function<double(const ContactPoint&)>& f, const ContactPoint& p);

class ScalarField {
 public:
  using Eval = std::function<double(const ContactPoint&)>;
  using Grad = std::function<Gradient(const ContactPoint&)>;

  explicit ScalarField(Eval f, Grad g = {}) : eval_(std::move(f)), grad_(std::move(g)) {}

  double operator()(const ContactPoint& p) const { return eval_(p); }
  Gradient gradient(const ContactPoint& p) const { return grad_ ? grad_(p) : fd_gradient(eval_, p); }
  bool has_analytic_gradient() const { return static_cast<bool>(grad_); }

  static ScalarField constant(double c);

 private:
  Eval eval_;
  Grad grad_;
};

double alpha_eval(const ContactPoint& p, const TangentVector& w);

// d(alpha) = sum_i dx_i ^ dy_i; constant coefficients, p only fixes n.
double dalpha_eval(const ContactPoint& p, const TangentVector& w1, const TangentVector& w2);

// d(e^v alpha)(W1, W2) = e^v (dalpha(w1, w2) + dv1 alpha(w2) - dv2 alpha(w1)).
double symp_form_eval(const SymplectizationPoint& P, const SymplectizationVector& W1,
                      const SymplectizationVector& W2);

// X_H with alpha(X_H) = H:
//   dx_i = -H_{y_i},  dy_i = H_{x_i} + y_i H_z,  dz = H - sum_i y_i H_{y_i}.
TangentVector contact_vector_field(double H, const Gradient& g, const ContactPoint& p);
TangentVector contact_vector_field(const ScalarField& H, const ContactPoint& p);

}  // namespace wcl
