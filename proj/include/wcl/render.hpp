#pragma once

// Deterministic SVG 1.1 figures: front slices of the wrinkle family, the
// (u, x2) region diagram of the patched Hamiltonian and the singular loci
// of nested wrinkles. Coordinates are auto-fitted with fixed margins and
// written with three decimals, so equal inputs give equal bytes.

#include <string>
#include <vector>

#include "wcl/patch.hpp"
#include "wcl/wrinkle.hpp"

namespace wcl {

enum class FrontProjection { X1Z, X2Z, UX2 };

std::string to_string(FrontProjection p);
// Accepts "x1z", "x2z", "ux2"; DomainError otherwise.
FrontProjection parse_projection(const std::string& name);

struct RenderSpec {
  FrontProjection projection = FrontProjection::X1Z;
  std::vector<double> t_values;
  // Samples per curve.
  int resolution = 400;
  // x2 values for X1Z slices, u values for X2Z slices.
  std::vector<double> slices{0.0, 0.5, 0.8};
  double u_extent = 2.0;
  double x2_extent = 1.5;
  bool overlay_singular = true;
  bool overlay_regions = false;
  bool overlay_core = false;
  int width = 640;
  int height = 480;

  // DomainError when resolution < 16 or some t lies outside [-3T, 3T].
  void validate(double T) const;
};

// Cusp of the x2-slice of the front at time t: u = sign sqrt(t - x2^2).
struct FrontCusp {
  double u = 0.0;
  double x1 = 0.0;
  double z = 0.0;
};
std::vector<FrontCusp> slice_cusps(double x2, double t);

std::string render_front(const WrinkleChart& chart, const RenderSpec& spec, const PatchParams& params = {});
std::string render_regions(const PatchParams& params, const RenderSpec& spec);
std::string render_nested(const NestedConfig& config, const RenderSpec& spec);

}  // namespace wcl
