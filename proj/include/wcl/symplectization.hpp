#pragma once

// The symplectization (R^{2n+1} x R, omega = d(e^v alpha)): lifts of
// contactomorphisms, the cut-off homogeneous Hamiltonian
//   H~(p, v, s) = chi(v) e^v H_s(p),
// its Hamiltonian flow, and the traced image of L_0 x R.
//
// Sign convention: omega(W, X) = dH~(W), so that for chi = 1 the flow covers
// the contact flow of H_s:
//   X = (chi X_H + chi' H d/dz,  v' = -chi H_z).

#include <cstdint>
#include <functional>
#include <vector>

#include "wcl/contact.hpp"
#include "wcl/flow.hpp"
#include "wcl/patch.hpp"

namespace wcl {

struct LiftedMap {
  std::function<ContactPoint(const ContactPoint&)> psi;
  // psi^* alpha = e^h alpha
  std::function<double(const ContactPoint&)> h;

  SymplectizationPoint operator()(const SymplectizationPoint& P) const;
};

// ConsistencyError when e^h alpha and psi^* alpha differ by more than 1e-4
// on any probe point (tested on the coordinate basis).
LiftedMap lift_contactomorphism(std::function<ContactPoint(const ContactPoint&)> psi,
                                std::function<double(const ContactPoint&)> h,
                                const std::vector<ContactPoint>& probes);

// |omega(dF W1, dF W2) - omega(W1, W2)| with dF by central differences.
double lifted_symplectic_residual(const LiftedMap& F, const SymplectizationPoint& P, const SymplectizationVector& W1,
                                  const SymplectizationVector& W2, double h = 1e-6);

struct HamiltonianSample {
  double value = 0.0;
  Gradient gradient;
  // Set when the sample falls in a region the construction excludes.
  bool flagged = false;
};

// Time-dependent contact Hamiltonian evaluated along one trajectory; an
// evaluator may keep warm-start state between calls.
using HamiltonianEvaluator = std::function<HamiltonianSample(const ContactPoint&, double)>;

struct ContactHamiltonianFamily {
  std::function<HamiltonianEvaluator()> make_evaluator;

  HamiltonianSample operator()(const ContactPoint& p, double s) const { return make_evaluator()(p, s); }
};

// Time-independent family from a ScalarField.
ContactHamiltonianFamily constant_family(ScalarField H);

// Flow time s in [0, 1] covering t in [-T, T]: H_s = 2T H_ext(., -T + 2Ts).
// Samples in CORE_DISC are flagged.
ContactHamiltonianFamily extension_family(const PatchParams& params, double T);

// C-infinity step: 0 for v <= -T_band, 1 for v >= T_band.
double chi(double v, double T_band);
double chi_prime(double v, double T_band);

struct CutoffLiftedHamiltonian {
  ContactHamiltonianFamily H;
  double T_band = 1.0;

  double value(const ContactPoint& p, double v, double s) const;
};

CutoffLiftedHamiltonian lifted_hamiltonian(ContactHamiltonianFamily H, double T_band);

// Closed-form Hamiltonian field of H~ at P from a sample of H_s at P.p.
SymplectizationVector hamiltonian_field_symp(const CutoffLiftedHamiltonian& Ht, const SymplectizationPoint& P,
                                             const HamiltonianSample& sample);
SymplectizationVector hamiltonian_field_symp(const CutoffLiftedHamiltonian& Ht, const SymplectizationPoint& P,
                                             double s);

// Generic solve of omega(W, X) = dF(W) for all W; dF is packed [x, y, z, v].
SymplectizationVector symplectic_gradient(const SymplectizationPoint& P, const Vec& dF);

enum NodeFlag : std::uint8_t {
  NodeOk = 0,
  // Left the flow box before s = 1.
  NodeTruncated = 1,
  // Trajectory entered a flagged (core) region.
  NodeCore = 2,
};

// Structured grid over (a, b) parameters of L_0 times v. Node (i, j, k) sits
// at a_i, b_j, v_k and connects to its grid neighbours.
struct MeshedLagrangian {
  int n = 2;
  int Na = 0, Nb = 0, Nv = 0;
  double a0 = 0, a1 = 1, b0 = 0, b1 = 1, v0 = 0, v1 = 1;
  // Packed [x, y, z, v] per node.
  std::vector<Vec> nodes;
  std::vector<std::uint8_t> flags;

  int index(int i, int j, int k) const { return (k * Nb + j) * Na + i; }
  double a(int i) const { return a0 + (a1 - a0) * i / (Na - 1); }
  double b(int j) const { return b0 + (b1 - b0) * j / (Nb - 1); }
  double v(int k) const { return v0 + (v1 - v0) * k / (Nv - 1); }
  SymplectizationPoint point(int i, int j, int k) const { return SymplectizationPoint::unpack(nodes[index(i, j, k)]); }
  bool usable(int i, int j, int k) const { return flags[index(i, j, k)] == NodeOk; }
  std::size_t size() const { return nodes.size(); }
  // Every `stride`-th node in each direction.
  MeshedLagrangian subsample(int stride) const;
  void validate() const;
};

// L_0 sampler: (a, b) -> Legendrian point.
using LegendrianSampler = std::function<ContactPoint(double, double)>;

struct TraceOptions {
  // Nodes along a and b.
  int resolution = 17;
  // Nodes along v; 0 means `resolution`.
  int v_resolution = 129;
  double a0 = -0.04, a1 = 0.04, b0 = 0.7, b1 = 1.1;
  double v0 = -0.8, v1 = 0.8;
  FlowOptions flow{5e-3, 50.0};
  int jobs = 1;
};

// phi_1(L_0 x R) sampled on the grid. Nodes at v <= -T_band stay fixed;
// nodes at v >= T_band share the contact trajectory of their (a, b) column.
MeshedLagrangian trace_cobordism(const LegendrianSampler& L0, const CutoffLiftedHamiltonian& Ht,
                                 const TraceOptions& opts);

// L'_t = Psi_t(L_t) at one parameter point and its t-derivative by central
// differences of step h.
struct ConjugatedSample {
  ContactPoint point;
  TangentVector velocity;
  double alpha_X = 0.0;
  double alpha_Xprime = 0.0;
};

ConjugatedSample conjugated_isotopy(const std::function<ContactPoint(double)>& L_of_t,
                                    const std::function<ContactPoint(const ContactPoint&, double)>& Psi, double t,
                                    double h = 1e-4);

}  // namespace wcl
