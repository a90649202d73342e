// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "wcl/config.hpp"
#include "wcl/pipeline.hpp"
#include "wcl/report.hpp"

using namespace wcl;
namespace fs = std::filesystem;

namespace {

// Tolerances and sizes pinned for acceptance.
RunConfig pinned_config() {
  RunConfig cfg;
  cfg.n = 2;
  cfg.T = 1.0;
  cfg.identity_grid = 101;
  cfg.identity_t_samples = 11;
  cfg.transport_steps = {0.02, 0.01, 0.005};
  cfg.cutoff_samples = 1000;
  cfg.tol_identity = 1e-10;
  cfg.tol_inversion = 1e-8;
  cfg.tol_legendrian = 1e-10;
  cfg.tol_singular = 1e-6;
  cfg.tol_isotropy = 1e-14;
  cfg.tol_end_variance = 1e-6;
  cfg.tol_ends = 1e-4;
  cfg.min_order = 1.8;
  cfg.max_order = 2.2;
  cfg.control_margin = 1e3;
  cfg.sweep_values = {5.0, 10.0, 20.0};
  cfg.seed = 1;
  return cfg;
}

std::string order_text(const ReportEntry& e) {
  if (!e.order) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, ", order %.3f", *e.order);
  return buf;
}

struct Criterion {
  int id;
  std::string title;
  bool pass = true;
  std::vector<std::string> details;

  void require(const ReportEntry& e) {
    pass = pass && e.pass;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s %s = %.3e (tol %.2e%s)", e.pass ? "ok" : "FAILED", e.name.c_str(), e.residual,
                  e.tolerance, order_text(e).c_str());
    details.push_back(buf);
  }
  void require(const std::vector<ReportEntry>& entries) {
    for (const auto& e : entries) require(e);
  }
  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok " : "FAILED ") + what);
  }
  void print() const {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, title.c_str());
    for (const auto& d : details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
  }
};

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& f : fs::directory_iterator(dir)) {
    std::ifstream in(f.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    out[f.path().filename().string()] = ss.str();
  }
  return out;
}

std::map<std::string, std::string> render_once(RunConfig cfg, const fs::path& dir) {
  fs::remove_all(dir);
  cfg.out_dir = dir.string();
  if (cmd_render(cfg) != 0) return {};
  return read_dir(dir);
}

}  // namespace

int main() {
  const RunConfig cfg = pinned_config();
  std::vector<Criterion> all;

  Criterion c1{1, "alpha(X_t) formula identities and u-inversions"};
  c1.require(identity_checks(cfg));
  c1.print();
  all.push_back(c1);

  Criterion c2{2, "Legendrian certification and singular locus at t = 1"};
  c2.require(legendrian_checks(cfg));
  c2.print();
  all.push_back(c2);

  Criterion c3{3, "isotopy transport by the patched Hamiltonian"};
  const auto transport = transport_checks(cfg);
  c3.require(transport);
  c3.require(transport[0].order && *transport[0].order >= 1.8, "transport order >= 1.8");
  c3.print();
  all.push_back(c3);

  Criterion c4{4, "isotropy, cutoff conditions, support and conformal factor"};
  c4.require(push_checks(cfg));
  const auto sweep = run_sweep(cfg, "g_cap", cfg.sweep_values);
  std::string lambdas, escapes;
  for (const auto& e : sweep.report.entries) {
    if (e.name.rfind("g_cap=", 0) != 0) continue;
    char buf[32];
    std::snprintf(buf, sizeof buf, " %.9g", e.residual);
    if (e.name.ends_with(".lambda")) lambdas += buf;
    if (e.name.ends_with(".escape")) escapes += buf;
  }
  c4.require(sweep.escape_increasing, "escape distance increasing over g_cap {5, 10, 20}:" + escapes);
  c4.require(sweep.lambda_increasing, "lambda increasing over g_cap {5, 10, 20}:" + lambdas);
  c4.print();
  all.push_back(c4);

  Criterion c5{5, "traced cobordism: Lagrangian, exact, cylindrical ends"};
  const auto mesh = trace_mesh(cfg);
  const auto cob = cobordism_checks(cfg, mesh);
  c5.require(cob);
  for (const auto& e : cob) {
    if (e.name == "lagrangian" || e.name == "exact.quad" || e.name == "exact.path") {
      c5.require(e.order && *e.order >= 1.8 && *e.order <= 2.2, e.name + " order in [1.8, 2.2]");
    }
  }
  c5.print();
  all.push_back(c5);

  Criterion c6{6, "negative controls exceed tolerance by 1e3"};
  c6.require(control_checks(cfg, mesh));
  c6.print();
  all.push_back(c6);

  Criterion c7{7, "determinism of reports and figures"};
  const auto first = verify_report(cfg, mesh).serialize();
  const auto second = verify_report(cfg).serialize();
  c7.require(first == second, "verify reports from two traces are byte-identical (" +
                                  std::to_string(first.size()) + " bytes)");
  c7.require(sweep.report.serialize() == run_sweep(cfg, "g_cap", cfg.sweep_values).report.serialize(),
             "g_cap sweep reports are byte-identical");
  const fs::path tmp = fs::temp_directory_path();
  const auto figs_a = render_once(cfg, tmp / "wcl_acceptance_a");
  const auto figs_b = render_once(cfg, tmp / "wcl_acceptance_b");
  c7.require(!figs_a.empty() && figs_a == figs_b,
             std::to_string(figs_a.size()) + " SVG figures byte-identical across runs");
  c7.print();
  all.push_back(c7);

  int failed = 0;
  for (const auto& c : all) failed += c.pass ? 0 : 1;
  std::printf("%d of %zu criteria pass\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
