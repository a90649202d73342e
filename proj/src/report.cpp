#include "wcl/report.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "wcl/errors.hpp"

namespace wcl {

namespace {

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, int line) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw DomainError("report line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return x;
}

bool parse_bool(const std::string& s, int line) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw DomainError("report line " + std::to_string(line) + ": bad boolean '" + s + "'");
}

std::size_t parse_count(const std::string& s, int line) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw DomainError("report line " + std::to_string(line) + ": bad count '" + s + "'");
  }
  return static_cast<std::size_t>(std::stoull(s));
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool VerificationReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const ReportEntry& e) { return e.pass; });
}

const ReportEntry* VerificationReport::find(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::string VerificationReport::serialize() const {
  std::ostringstream out;
  out << "# wcl-report 1\n";
  out << "title = " << one_line(title) << "\n";
  for (const auto& [k, v] : meta) out << "meta." << one_line(k) << " = " << one_line(v) << "\n";
  for (const auto& e : entries) {
    out << "[entry]\n";
    out << "name = " << one_line(e.name) << "\n";
    out << "residual = " << format_double(e.residual) << "\n";
    out << "tolerance = " << format_double(e.tolerance) << "\n";
    out << "samples = " << e.samples << "\n";
    out << "order = " << (e.order ? format_double(*e.order) : "NA") << "\n";
    out << "pass = " << (e.pass ? "true" : "false") << "\n";
    out << "truncated = " << e.truncated << "\n";
    out << "raw_residual = " << format_double(e.raw_residual) << "\n";
    out << "floor = " << (e.floor ? "true" : "false") << "\n";
    out << "note = " << one_line(e.note) << "\n";
  }
  return out.str();
}

VerificationReport VerificationReport::parse(const std::string& text) {
  VerificationReport rep;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool header = false;
  ReportEntry* current = nullptr;
  while (std::getline(in, line)) {
    ++lineno;
    if (!header) {
      if (trim(line) != "# wcl-report 1") throw DomainError("report: missing '# wcl-report 1' header");
      header = true;
      continue;
    }
    if (trim(line).empty()) continue;
    if (trim(line) == "[entry]") {
      rep.entries.emplace_back();
      current = &rep.entries.back();
      continue;
    }
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw DomainError("report line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 3);
    if (current == nullptr) {
      if (key == "title") {
        rep.title = value;
      } else if (key.rfind("meta.", 0) == 0) {
        rep.meta.emplace_back(key.substr(5), value);
      } else {
        throw DomainError("report line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      }
      continue;
    }
    if (key == "name") current->name = value;
    else if (key == "residual") current->residual = parse_double(value, lineno);
    else if (key == "tolerance") current->tolerance = parse_double(value, lineno);
    else if (key == "samples") current->samples = parse_count(value, lineno);
    else if (key == "order") current->order = value == "NA" ? std::nullopt : std::optional(parse_double(value, lineno));
    else if (key == "pass") current->pass = parse_bool(value, lineno);
    else if (key == "truncated") current->truncated = parse_count(value, lineno);
    else if (key == "raw_residual") current->raw_residual = parse_double(value, lineno);
    else if (key == "floor") current->floor = parse_bool(value, lineno);
    else if (key == "note") current->note = value;
    else throw DomainError("report line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  if (!header) throw DomainError("report: empty input");
  return rep;
}

}  // namespace wcl
