#include "wcl/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>

#include "wcl/parallel.hpp"

namespace wcl {

namespace {

using Member = std::variant<int RunConfig::*, unsigned RunConfig::*, double RunConfig::*, bool RunConfig::*,
                            std::string RunConfig::*, std::vector<double> RunConfig::*,
                            std::vector<std::string> RunConfig::*>;

struct Field {
  const char* name;
  Member member;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table{
      {"n", &RunConfig::n},
      {"T", &RunConfig::T},
      {"epsilon", &RunConfig::epsilon},
      {"delta", &RunConfig::delta},
      {"rho_tube", &RunConfig::rho_tube},
      {"rho_cut", &RunConfig::rho_cut},
      {"g_cap", &RunConfig::g_cap},
      {"identity_grid", &RunConfig::identity_grid},
      {"identity_t_samples", &RunConfig::identity_t_samples},
      {"transport_t", &RunConfig::transport_t},
      {"transport_steps", &RunConfig::transport_steps},
      {"transport_grid", &RunConfig::transport_grid},
      {"cutoff_samples", &RunConfig::cutoff_samples},
      {"trace_T", &RunConfig::trace_T},
      {"T_band", &RunConfig::T_band},
      {"mesh_resolution", &RunConfig::mesh_resolution},
      {"v_resolution", &RunConfig::v_resolution},
      {"v_min", &RunConfig::v_min},
      {"v_max", &RunConfig::v_max},
      {"a_min", &RunConfig::a_min},
      {"a_max", &RunConfig::a_max},
      {"b_min", &RunConfig::b_min},
      {"b_max", &RunConfig::b_max},
      {"trace_step", &RunConfig::trace_step},
      {"tol_identity", &RunConfig::tol_identity},
      {"tol_inversion", &RunConfig::tol_inversion},
      {"tol_legendrian", &RunConfig::tol_legendrian},
      {"tol_singular", &RunConfig::tol_singular},
      {"tol_isotropy", &RunConfig::tol_isotropy},
      {"tol_lambda", &RunConfig::tol_lambda},
      {"tol_fd", &RunConfig::tol_fd},
      {"tol_end_variance", &RunConfig::tol_end_variance},
      {"tol_ends", &RunConfig::tol_ends},
      {"min_order", &RunConfig::min_order},
      {"max_order", &RunConfig::max_order},
      {"control_margin", &RunConfig::control_margin},
      {"render_t", &RunConfig::render_t},
      {"render_projections", &RunConfig::render_projections},
      {"render_resolution", &RunConfig::render_resolution},
      {"sweep_parameter", &RunConfig::sweep_parameter},
      {"sweep_values", &RunConfig::sweep_values},
      {"out_dir", &RunConfig::out_dir},
      {"seed", &RunConfig::seed},
      {"jobs", &RunConfig::jobs},
      {"negative_control", &RunConfig::negative_control},
  };
  return table;
}

const Field* find_field(const std::string& key) {
  for (const auto& f : fields()) {
    if (key == f.name) return &f;
  }
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class Number>
Number parse_number(const std::string& key, const std::string& text) {
  Number out{};
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && text[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw ConfigError("config: key '" + key + "': cannot parse '" + text + "'");
  }
  if constexpr (std::is_floating_point_v<Number>) {
    if (!std::isfinite(out)) throw ConfigError("config: key '" + key + "': value must be finite");
  }
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& raw) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError("config: unknown key '" + key + "'");
  const std::string value = trim(raw);
  std::visit(
      [&](auto member) {
        using T = std::remove_cvref_t<decltype(this->*member)>;
        if constexpr (std::is_same_v<T, int> || std::is_same_v<T, unsigned> || std::is_same_v<T, double>) {
          this->*member = parse_number<T>(key, value);
        } else if constexpr (std::is_same_v<T, bool>) {
          if (value == "true" || value == "1") {
            this->*member = true;
          } else if (value == "false" || value == "0") {
            this->*member = false;
          } else {
            throw ConfigError("config: key '" + key + "': expected true or false, got '" + value + "'");
          }
        } else if constexpr (std::is_same_v<T, std::string>) {
          this->*member = value;
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          std::vector<double> out;
          for (const auto& item : split_list(value)) out.push_back(parse_number<double>(key, item));
          this->*member = out;
        } else {
          this->*member = split_list(value);
        }
      },
      f->member);
}

void RunConfig::override_tolerance(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("tolerance override '" + assignment + "' is not KEY=VAL");
  std::string key = trim(assignment.substr(0, eq));
  if (key.rfind("tol_", 0) != 0 && key != "min_order" && key != "max_order" && key != "control_margin") {
    key = "tol_" + key;
  }
  const bool tolerance = key.rfind("tol_", 0) == 0 || key == "min_order" || key == "max_order" ||
                         key == "control_margin";
  if (!tolerance || !find_field(key)) throw ConfigError("unknown tolerance '" + key + "'");
  set(key, assignment.substr(eq + 1));
}

void RunConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("config: " + what);
  };
  require(n >= 2, "n must be at least 2");
  require(T > 0.0, "T must be positive");
  require(epsilon > 0.0 && delta > 0.0, "epsilon and delta must be positive");
  require(rho_tube > 0.0 && rho_cut > rho_tube, "need 0 < rho_tube < rho_cut");
  require(g_cap > 0.0, "g_cap must be positive");
  require(identity_grid >= 3 && identity_t_samples >= 1, "identity grid too small");
  require(std::abs(transport_t) < 3.0 * T, "transport_t must lie in (-3T, 3T)");
  require(transport_steps.size() >= 3, "transport_steps needs at least three values");
  for (double h : transport_steps) require(h > 0.0, "transport_steps must be positive");
  require(transport_grid >= 3, "transport_grid too small");
  require(cutoff_samples >= 1, "cutoff_samples must be positive");
  require(trace_T > 0.0 && trace_T <= T, "need 0 < trace_T <= T");
  require(T_band > 0.0, "T_band must be positive");
  require(mesh_resolution >= 5 && (mesh_resolution - 1) % 4 == 0, "mesh_resolution must be 4k + 1 with k >= 1");
  require(v_resolution >= 5 && (v_resolution - 1) % 4 == 0, "v_resolution must be 4k + 1 with k >= 1");
  require(v_min < -3.0 * trace_T && v_max > 3.0 * trace_T, "v range must cover the end bands |v| > 3 trace_T");
  require(a_min < a_max && b_min < b_max, "empty (a, b) box");
  require(trace_step > 0.0, "trace_step must be positive");
  for (double tol : {tol_identity, tol_inversion, tol_legendrian, tol_singular, tol_isotropy, tol_lambda, tol_fd,
                     tol_end_variance, tol_ends}) {
    require(tol > 0.0, "tolerances must be positive");
  }
  require(min_order < max_order, "need min_order < max_order");
  require(control_margin >= 1.0, "control_margin must be at least 1");
  require(render_resolution >= 16, "render_resolution must be at least 16");
  for (double t : render_t) require(std::abs(t) <= 3.0 * T, "render_t values must lie in [-3T, 3T]");
  require(sweep_parameter == "g_cap" || sweep_parameter == "epsilon" || sweep_parameter == "delta" ||
              sweep_parameter == "mesh",
          "sweep_parameter must be g_cap, epsilon, delta or mesh");
  require(!out_dir.empty(), "out_dir must not be empty");
  require(jobs >= 0, "jobs must be non-negative");
}

int RunConfig::effective_jobs() const { return jobs > 0 ? jobs : default_jobs(); }

std::vector<std::string> RunConfig::keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.emplace_back(f.name);
  return out;
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream is(text);
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key = trim(s.substr(0, eq));
    if (!seen.insert(key).second) throw ConfigError("config line " + std::to_string(number) + ": repeated key '" + key + "'");
    try {
      cfg.set(key, s.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(number) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  for (const auto& f : fields()) {
    os << f.name << " = ";
    std::visit(
        [&](auto member) {
          using T = std::remove_cvref_t<decltype(this->*member)>;
          const auto& v = this->*member;
          if constexpr (std::is_same_v<T, double>) {
            os << format_number(v);
          } else if constexpr (std::is_same_v<T, bool>) {
            os << (v ? "true" : "false");
          } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << format_number(v[i]);
          } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
            for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
          } else {
            os << v;
          }
        },
        f.member);
    os << '\n';
  }
  return os.str();
}

}  // namespace wcl
