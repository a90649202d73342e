#include <catch_amalgamated.hpp>

#include <cmath>
#include <regex>
#include <string>
#include <vector>

#include "wcl/errors.hpp"
#include "wcl/render.hpp"

using namespace wcl;
using Catch::Matchers::WithinAbs;

namespace {

struct Pt {
  double x, y;
};

std::vector<Pt> circles(const std::string& svg, const std::string& cls) {
  std::vector<Pt> out;
  const std::regex re("<circle class=\"" + cls + "\" cx=\"([-0-9.]+)\" cy=\"([-0-9.]+)\"");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it) {
    out.push_back({std::stod((*it)[1]), std::stod((*it)[2])});
  }
  return out;
}

std::vector<Pt> polyline_vertices(const std::string& svg) {
  std::vector<Pt> out;
  const std::regex line("<polyline class=\"front\" points=\"([^\"]*)\"");
  const std::regex pair("([-0-9.]+),([-0-9.]+)");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), line); it != std::sregex_iterator(); ++it) {
    const std::string pts = (*it)[1];
    for (auto p = std::sregex_iterator(pts.begin(), pts.end(), pair); p != std::sregex_iterator(); ++p) {
      out.push_back({std::stod((*p)[1]), std::stod((*p)[2])});
    }
  }
  return out;
}

RenderSpec x1z(std::vector<double> ts, std::vector<double> slices = {0.0}) {
  RenderSpec s;
  s.projection = FrontProjection::X1Z;
  s.t_values = std::move(ts);
  s.slices = std::move(slices);
  return s;
}

}  // namespace

TEST_CASE("projection names", "[render]") {
  for (auto p : {FrontProjection::X1Z, FrontProjection::X2Z, FrontProjection::UX2}) {
    CHECK(parse_projection(to_string(p)) == p);
  }
  CHECK_THROWS_AS(parse_projection("xyz"), DomainError);
  CHECK_THROWS_AS(parse_projection(""), DomainError);
}

TEST_CASE("slice cusps at t = 1, x2 = 0", "[render]") {
  const auto cusps = slice_cusps(0.0, 1.0);
  REQUIRE(cusps.size() == 2);
  CHECK_THAT(cusps[0].x1, WithinAbs(2.0, 1e-14));
  CHECK_THAT(cusps[0].z, WithinAbs(-8.0 / 15.0, 1e-14));
  CHECK_THAT(cusps[1].x1, WithinAbs(-2.0, 1e-14));
  CHECK_THAT(cusps[1].z, WithinAbs(8.0 / 15.0, 1e-14));
  CHECK(slice_cusps(0.0, -0.5).empty());
  CHECK(slice_cusps(1.2, 1.0).empty());
}

TEST_CASE("front cusp markers sit on the drawn curve", "[render]") {
  const auto chart = WrinkleChart::make(1.0);
  const std::string svg = render_front(chart, x1z({1.0}));
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("version=\"1.1\"") != std::string::npos);
  const auto markers = circles(svg, "cusp");
  const auto verts = polyline_vertices(svg);
  REQUIRE(markers.size() == 2);
  REQUIRE(verts.size() == 400);
  for (const auto& m : markers) {
    double best = 1e300;
    for (const auto& v : verts) best = std::min(best, std::hypot(v.x - m.x, v.y - m.y));
    CHECK(best <= 1.0);
  }
  // With u in [-2, 2] the cusps at x1 = -2, 2 bound the slice horizontally.
  double xmin = 1e300, xmax = -1e300;
  for (const auto& v : verts) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
  }
  CHECK(std::min(markers[0].x, markers[1].x) - xmin < 1.0);
  CHECK(xmax - std::max(markers[0].x, markers[1].x) < 1.0);
}

TEST_CASE("no cusps before birth", "[render]") {
  const auto chart = WrinkleChart::make(-0.5);
  const std::string svg = render_front(chart, x1z({-0.5}, {0.0, 0.5}));
  CHECK(circles(svg, "cusp").empty());
  CHECK(polyline_vertices(svg).size() == 800);
}

TEST_CASE("all projections render deterministically", "[render]") {
  const auto chart = WrinkleChart::make(1.0);
  for (auto p : {FrontProjection::X1Z, FrontProjection::X2Z, FrontProjection::UX2}) {
    RenderSpec s;
    s.projection = p;
    s.t_values = {-1.0, 0.0, 1.0};
    s.overlay_regions = s.overlay_core = true;
    const std::string a = render_front(chart, s);
    CHECK(a == render_front(chart, s));
    CHECK(a.find("</svg>") != std::string::npos);
  }
  RenderSpec s;
  s.projection = FrontProjection::UX2;
  s.t_values = {1.0};
  const auto sing = circles(render_front(chart, s), "singular");
  CHECK(sing.size() == 2);
}

TEST_CASE("empty t list gives an empty valid document", "[render]") {
  const std::string svg = render_front(WrinkleChart::make(0.0), x1z({}));
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<polyline") == std::string::npos);
}

TEST_CASE("render spec validation", "[render]") {
  const auto chart = WrinkleChart::make(0.0);
  auto low = x1z({0.5});
  low.resolution = 15;
  CHECK_THROWS_AS(render_front(chart, low), DomainError);
  CHECK_THROWS_AS(render_front(chart, x1z({3.5})), DomainError);
  CHECK_NOTHROW(render_front(chart, x1z({-3.0, 3.0})));
}

TEST_CASE("regions and nested diagrams", "[render]") {
  const std::string regions = render_regions(PatchParams{}, RenderSpec{});
  for (const char* label : {"POS_U", "NEG_U", "OUTER_X2", "BLEND", "CORE"}) {
    CHECK(regions.find(label) != std::string::npos);
  }
  CHECK(regions == render_regions(PatchParams{}, RenderSpec{}));

  NestedConfig cfg;
  NestedWrinkle outer{WrinkleChart::make(1.0), {0.0, 0.0}, 1.5, {}};
  NestedWrinkle inner{WrinkleChart::make(0.25), {0.2, 0.0}, 0.6, {}};
  cfg.wrinkles = {outer, inner};
  const std::string nested = render_nested(cfg, RenderSpec{});
  CHECK(nested.find("class=\"singular\"") != std::string::npos);
  CHECK(nested == render_nested(cfg, RenderSpec{}));
}
