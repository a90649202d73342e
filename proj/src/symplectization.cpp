#include "wcl/symplectization.hpp"

#include <cmath>
#include <memory>
#include <optional>
#include <sstream>

#include "wcl/parallel.hpp"

namespace wcl {

SymplectizationPoint LiftedMap::operator()(const SymplectizationPoint& P) const {
  return {psi(P.p), P.v - h(P.p)};
}

LiftedMap lift_contactomorphism(std::function<ContactPoint(const ContactPoint&)> psi,
                                std::function<double(const ContactPoint&)> h,
                                const std::vector<ContactPoint>& probes) {
  constexpr double step = 1e-6;
  constexpr double tol = 1e-4;
  for (const auto& p : probes) {
    const int m = 2 * p.dim() + 1;
    const ContactPoint image = psi(p);
    const double scale = std::exp(h(p));
    for (int i = 0; i < m; ++i) {
      Vec e = Vec::Zero(m);
      e(i) = 1.0;
      const Vec d = (psi(ContactPoint::unpack(p.packed() + step * e)).packed() -
                     psi(ContactPoint::unpack(p.packed() - step * e)).packed()) /
                    (2.0 * step);
      const double pulled = alpha_eval(image, TangentVector::unpack(d));
      const double expected = scale * alpha_eval(p, TangentVector::unpack(e));
      if (std::abs(pulled - expected) > tol * std::max(1.0, std::abs(expected))) {
        std::ostringstream msg;
        msg << "lift_contactomorphism: psi^*alpha differs from e^h alpha by " << std::abs(pulled - expected)
            << " on basis vector " << i;
        throw ConsistencyError(msg.str());
      }
    }
  }
  return {std::move(psi), std::move(h)};
}

double lifted_symplectic_residual(const LiftedMap& F, const SymplectizationPoint& P, const SymplectizationVector& W1,
                                  const SymplectizationVector& W2, double h) {
  auto push = [&](const SymplectizationVector& W) {
    const Vec plus = F(SymplectizationPoint::unpack(P.packed() + h * W.packed())).packed();
    const Vec minus = F(SymplectizationPoint::unpack(P.packed() - h * W.packed())).packed();
    return SymplectizationVector::unpack((plus - minus) / (2.0 * h));
  };
  const auto image = F(P);
  return std::abs(symp_form_eval(image, push(W1), push(W2)) - symp_form_eval(P, W1, W2));
}

ContactHamiltonianFamily constant_family(ScalarField H) {
  return {[H]() -> HamiltonianEvaluator {
    return [H](const ContactPoint& p, double) { return HamiltonianSample{H(p), H.gradient(p), false}; };
  }};
}

ContactHamiltonianFamily extension_family(const PatchParams& params, double T) {
  params.validate();
  if (!(T > 0.0)) throw DomainError("extension_family: T must be positive");
  return {[params, T]() -> HamiltonianEvaluator {
    auto hint = std::make_shared<std::optional<Projection>>();
    return [params, T, hint](const ContactPoint& p, double s) {
      PatchParams at = params;
      at.t = -T + 2.0 * T * s;
      const auto pg = extension_gradient(p, at, hint->has_value() ? &**hint : nullptr);
      *hint = pg.sample.projection;
      HamiltonianSample out;
      out.value = 2.0 * T * pg.sample.value;
      out.gradient = pg.gradient;
      out.gradient.dx *= 2.0 * T;
      out.gradient.dy *= 2.0 * T;
      out.gradient.dz *= 2.0 * T;
      out.flagged = pg.sample.tag == RegionTag::CoreDisc;
      return out;
    };
  }};
}

namespace {

double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double bump_prime(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }

}  // namespace

double chi(double v, double T_band) {
  const double x = (v + T_band) / (2.0 * T_band);
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = bump(x), b = bump(1.0 - x);
  return a / (a + b);
}

double chi_prime(double v, double T_band) {
  const double x = (v + T_band) / (2.0 * T_band);
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a = bump(x), b = bump(1.0 - x);
  const double da = bump_prime(x), db = -bump_prime(1.0 - x);
  return (da * b - a * db) / ((a + b) * (a + b)) / (2.0 * T_band);
}

double CutoffLiftedHamiltonian::value(const ContactPoint& p, double v, double s) const {
  const double c = chi(v, T_band);
  if (c == 0.0) return 0.0;
  return c * std::exp(v) * H(p, s).value;
}

CutoffLiftedHamiltonian lifted_hamiltonian(ContactHamiltonianFamily H, double T_band) {
  if (!(T_band > 0.0)) throw DomainError("lifted_hamiltonian: T_band must be positive");
  return {std::move(H), T_band};
}

SymplectizationVector hamiltonian_field_symp(const CutoffLiftedHamiltonian& Ht, const SymplectizationPoint& P,
                                             const HamiltonianSample& sample) {
  const double c = chi(P.v, Ht.T_band);
  SymplectizationVector X{TangentVector::zero(P.p.dim()), 0.0};
  if (c == 0.0) return X;
  X.w = contact_vector_field(sample.value, sample.gradient, P.p);
  X.w.dx *= c;
  X.w.dy *= c;
  X.w.dz = c * X.w.dz + chi_prime(P.v, Ht.T_band) * sample.value;
  X.dv = -c * sample.gradient.dz;
  return X;
}

SymplectizationVector hamiltonian_field_symp(const CutoffLiftedHamiltonian& Ht, const SymplectizationPoint& P,
                                             double s) {
  if (chi(P.v, Ht.T_band) == 0.0) return {TangentVector::zero(P.p.dim()), 0.0};
  return hamiltonian_field_symp(Ht, P, Ht.H(P.p, s));
}

SymplectizationVector symplectic_gradient(const SymplectizationPoint& P, const Vec& dF) {
  const int m = 2 * P.p.dim() + 2;
  if (dF.size() != m) throw DimensionMismatch("symplectic_gradient: dF dimension");
  Eigen::MatrixXd Omega(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      Vec ei = Vec::Zero(m), ej = Vec::Zero(m);
      ei(i) = 1.0;
      ej(j) = 1.0;
      Omega(i, j) = symp_form_eval(P, SymplectizationVector::unpack(ei), SymplectizationVector::unpack(ej));
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Omega);
  if (!lu.isInvertible()) throw ConsistencyError("symplectic_gradient: degenerate symplectic form");
  return SymplectizationVector::unpack(lu.solve(dF));
}

MeshedLagrangian MeshedLagrangian::subsample(int stride) const {
  if (stride < 1 || (Na - 1) % stride || (Nb - 1) % stride || (Nv - 1) % stride) {
    throw DomainError("MeshedLagrangian::subsample: stride must divide every grid extent");
  }
  MeshedLagrangian out = *this;
  out.Na = (Na - 1) / stride + 1;
  out.Nb = (Nb - 1) / stride + 1;
  out.Nv = (Nv - 1) / stride + 1;
  out.nodes.assign(out.Na * out.Nb * out.Nv, Vec());
  out.flags.assign(out.nodes.size(), NodeOk);
  for (int k = 0; k < out.Nv; ++k) {
    for (int j = 0; j < out.Nb; ++j) {
      for (int i = 0; i < out.Na; ++i) {
        const int src = index(i * stride, j * stride, k * stride);
        out.nodes[out.index(i, j, k)] = nodes[src];
        out.flags[out.index(i, j, k)] = flags[src];
      }
    }
  }
  out.validate();
  return out;
}

void MeshedLagrangian::validate() const {
  if (Na < 3 || Nb < 3 || Nv < 3) throw DomainError("MeshedLagrangian: need at least 3 nodes per direction");
  const auto expected = static_cast<std::size_t>(Na) * Nb * Nv;
  if (nodes.size() != expected || flags.size() != expected) throw DimensionMismatch("MeshedLagrangian: node count");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].size() != 2 * n + 2) throw DimensionMismatch("MeshedLagrangian: node dimension");
    if (flags[i] == NodeOk && !nodes[i].allFinite()) throw DomainError("MeshedLagrangian: non-finite node");
  }
}

namespace {

// Evaluator wrapper remembering whether any sample was flagged.
struct TrackedEvaluator {
  HamiltonianEvaluator eval;
  bool flagged = false;

  HamiltonianSample operator()(const ContactPoint& p, double s) {
    auto out = eval(p, s);
    flagged = flagged || out.flagged;
    return out;
  }
};

std::uint8_t flow_flags(bool truncated, bool flagged) {
  return static_cast<std::uint8_t>((truncated ? NodeTruncated : NodeOk) | (flagged ? NodeCore : NodeOk));
}

}  // namespace

MeshedLagrangian trace_cobordism(const LegendrianSampler& L0, const CutoffLiftedHamiltonian& Ht,
                                 const TraceOptions& opts) {
  const int N = opts.resolution;
  const int Nv = opts.v_resolution > 0 ? opts.v_resolution : N;
  if (N < 3 || Nv < 3) throw DomainError("trace_cobordism: resolution must be at least 3");
  if (!(opts.a1 > opts.a0) || !(opts.b1 > opts.b0) || !(opts.v1 > opts.v0)) {
    throw DomainError("trace_cobordism: empty parameter box");
  }
  MeshedLagrangian mesh;
  mesh.Na = mesh.Nb = N;
  mesh.Nv = Nv;
  mesh.a0 = opts.a0;
  mesh.a1 = opts.a1;
  mesh.b0 = opts.b0;
  mesh.b1 = opts.b1;
  mesh.v0 = opts.v0;
  mesh.v1 = opts.v1;
  mesh.n = L0(opts.a0, opts.b0).dim();
  mesh.nodes.assign(static_cast<std::size_t>(N) * N * Nv, Vec());
  mesh.flags.assign(mesh.nodes.size(), NodeOk);
  const int m = 2 * mesh.n + 1;

  parallel_for(static_cast<std::size_t>(N) * N, opts.jobs, [&](std::size_t col) {
    const int i = static_cast<int>(col % N);
    const int j = static_cast<int>(col / N);
    const ContactPoint p0 = L0(mesh.a(i), mesh.b(j));
    if (p0.dim() != mesh.n) throw DimensionMismatch("trace_cobordism: sampler dimension changed");

    // Upper branch: one contact trajectory with the accumulated v shift.
    bool upper_done = false;
    Vec upper;
    std::uint8_t upper_flag = NodeOk;
    auto upper_state = [&]() {
      if (upper_done) return;
      upper_done = true;
      TrackedEvaluator eval{Ht.H.make_evaluator()};
      auto field = [&](double s, const Vec& state) {
        const auto p = ContactPoint::unpack(state.head(m));
        const auto sample = eval(p, s);
        Vec out(m + 1);
        out.head(m) = contact_vector_field(sample.value, sample.gradient, p).packed();
        out(m) = -sample.gradient.dz;
        return out;
      };
      Vec start = Vec::Zero(m + 1);
      start.head(m) = p0.packed();
      try {
        const auto res = rk4_flow(field, start, 0.0, 1.0, opts.flow);
        upper = res.state;
        upper_flag = flow_flags(res.truncated, eval.flagged);
      } catch (const ConvergenceError&) {
        upper = start;
        upper_flag = flow_flags(true, eval.flagged);
      }
    };

    for (int k = 0; k < Nv; ++k) {
      const double v = mesh.v(k);
      const int idx = mesh.index(i, j, k);
      Vec node(m + 1);
      if (v <= -Ht.T_band) {
        node << p0.packed(), v;
        mesh.nodes[idx] = node;
      } else if (v >= Ht.T_band) {
        upper_state();
        node << upper.head(m), v + upper(m);
        mesh.nodes[idx] = node;
        mesh.flags[idx] = upper_flag;
      } else {
        TrackedEvaluator eval{Ht.H.make_evaluator()};
        auto field = [&](double s, const Vec& state) {
          const auto P = SymplectizationPoint::unpack(state);
          if (chi(P.v, Ht.T_band) == 0.0) return Vec(Vec::Zero(m + 1));
          return hamiltonian_field_symp(Ht, P, eval(P.p, s)).packed();
        };
        node << p0.packed(), v;
        try {
          const auto res = rk4_flow(field, node, 0.0, 1.0, opts.flow);
          mesh.nodes[idx] = res.state;
          mesh.flags[idx] = flow_flags(res.truncated, eval.flagged);
        } catch (const ConvergenceError&) {
          mesh.nodes[idx] = node;
          mesh.flags[idx] = flow_flags(true, eval.flagged);
        }
      }
    }
  });
  mesh.validate();
  return mesh;
}

ConjugatedSample conjugated_isotopy(const std::function<ContactPoint(double)>& L_of_t,
                                    const std::function<ContactPoint(const ContactPoint&, double)>& Psi, double t,
                                    double h) {
  if (!(h > 0.0) || t + h == t || t - h == t) throw DomainError("conjugated_isotopy: finite-difference step underflow");
  ConjugatedSample out;
  const ContactPoint p = L_of_t(t);
  out.point = Psi(p, t);
  const Vec X = (L_of_t(t + h).packed() - L_of_t(t - h).packed()) / (2.0 * h);
  const Vec Xp = (Psi(L_of_t(t + h), t + h).packed() - Psi(L_of_t(t - h), t - h).packed()) / (2.0 * h);
  out.velocity = TangentVector::unpack(Xp);
  out.alpha_X = alpha_eval(p, TangentVector::unpack(X));
  out.alpha_Xprime = alpha_eval(out.point, out.velocity);
  return out;
}

}  // namespace wcl
