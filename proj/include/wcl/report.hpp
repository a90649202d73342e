#pragma once

// Key-value verification reports.
//
//   # wcl-report 1
//   title = <text>
//   meta.<key> = <text>          (any number, file order kept)
//   [entry]
//   name = <text>
//   residual = <%.17g>           (extrapolated when an order is reported)
//   tolerance = <%.17g>
//   samples = <int>
//   order = <%.17g> | NA
//   pass = true | false
//   truncated = <int>
//   raw_residual = <%.17g>       (finest-level maximum)
//   floor = true | false
//   note = <text>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wcl {

struct ReportEntry {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::optional<double> order;
  bool pass = false;
  std::size_t truncated = 0;
  double raw_residual = 0.0;
  bool floor = false;
  std::string note;

  bool operator==(const ReportEntry&) const = default;
};

struct VerificationReport {
  std::string title;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<ReportEntry> entries;

  bool all_pass() const;
  const ReportEntry* find(const std::string& name) const;
  std::string serialize() const;
  // Throws DomainError on malformed input.
  static VerificationReport parse(const std::string& text);

  bool operator==(const VerificationReport&) const = default;
};

std::string format_double(double x);

}  // namespace wcl
