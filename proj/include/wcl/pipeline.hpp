#pragma once

// End-to-end stages: wrinkle formulas, Legendrian certification, isotopy
// transport by the patched Hamiltonian, the push to infinity, the traced
// cobordism and the negative controls. Each stage returns report entries;
// the commands assemble them into reports and figures under out_dir.

#include <string>
#include <vector>

#include "wcl/config.hpp"
#include "wcl/report.hpp"
#include "wcl/symplectization.hpp"

namespace wcl {

// The three alpha(X_t) formulas and both u-inversions on the identity grid.
std::vector<ReportEntry> identity_checks(const RunConfig& cfg);
// Pullback of alpha on the identity grid and the singular locus at t = 1.
std::vector<ReportEntry> legendrian_checks(const RunConfig& cfg);
// Flow L_t samples by the contact field of H_ext for each transport step
// and measure the distance to L_{t + step}.
std::vector<ReportEntry> transport_checks(const RunConfig& cfg);
// Isotropy of the escape paths, cutoff profile conditions, support of the
// push map, lambda for identity and Reeb flows and the escape distance.
std::vector<ReportEntry> push_checks(const RunConfig& cfg);

// Hamiltonian extension family of the trace and the traced mesh.
MeshedLagrangian trace_mesh(const RunConfig& cfg);
// Lagrangian, exactness and cylindrical-end checks of a traced mesh.
std::vector<ReportEntry> cobordism_checks(const RunConfig& cfg, const MeshedLagrangian& mesh);

// The three negative controls. Each entry passes when the control fails its
// check by at least control_margin times the tolerance.
// `mesh` is the base of the non-Hamiltonian perturbation.
std::vector<ReportEntry> control_checks(const RunConfig& cfg, const MeshedLagrangian& mesh);
// The controls fed through the ordinary checks (they are expected to fail).
std::vector<ReportEntry> control_as_input_checks(const RunConfig& cfg, const MeshedLagrangian& mesh);

// Conformal factor and escape distance at a core-disc point for one g_cap.
struct EscapeMeasurement {
  double g_cap = 0.0;
  double lambda = 1.0;
  double lambda_spread = 0.0;
  double escape = 0.0;
  double alpha_ratio = 0.0;
};
EscapeMeasurement measure_escape(const RunConfig& cfg, double g_cap);

struct SweepResult {
  VerificationReport report;
  // Strictly increasing lambda over increasing sweep values (g_cap only).
  bool lambda_increasing = false;
  bool escape_increasing = false;
};
// parameter in {g_cap, epsilon, delta, mesh}; values must be non-empty.
SweepResult run_sweep(const RunConfig& cfg, const std::string& parameter, const std::vector<double>& values);

// Full verification report; with cfg.negative_control the checks run on the
// controls instead of the construction.
VerificationReport verify_report(const RunConfig& cfg);
VerificationReport verify_report(const RunConfig& cfg, const MeshedLagrangian& mesh);

// File name for a front figure, e.g. front_t0.5_x1z.svg.
std::string front_filename(double t, const std::string& projection);

// Commands. Each returns a process exit code (0 pass, 1 check failure,
// 2 usage or configuration error) and writes into cfg.out_dir.
int cmd_verify(const RunConfig& cfg);
int cmd_trace(const RunConfig& cfg);
int cmd_render(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);
int cmd_report(const RunConfig& cfg);

}  // namespace wcl
