#include "wcl/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "wcl/errors.hpp"

namespace wcl {

namespace {

constexpr double kMargin = 40.0;

using Curve = std::vector<std::pair<double, double>>;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  // Avoid "-0.000".
  if (std::string(buf) == "-0.000") return "0.000";
  return buf;
}

struct Bounds {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity(), y1 = -std::numeric_limits<double>::infinity();

  void add(double x, double y) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  bool empty() const { return !(x1 >= x0); }
};

class Canvas {
 public:
  Canvas(int width, int height, Bounds b) : w_(width), h_(height) {
    if (b.empty()) b = Bounds{-1, 1, -1, 1};
    if (b.x1 - b.x0 < 1e-9) {
      b.x0 -= 0.5;
      b.x1 += 0.5;
    }
    if (b.y1 - b.y0 < 1e-9) {
      b.y0 -= 0.5;
      b.y1 += 0.5;
    }
    b_ = b;
    sx_ = (w_ - 2 * kMargin) / (b.x1 - b.x0);
    sy_ = (h_ - 2 * kMargin) / (b.y1 - b.y0);
  }

  double px(double x) const { return kMargin + (x - b_.x0) * sx_; }
  double py(double y) const { return h_ - kMargin - (y - b_.y0) * sy_; }

  void polyline(const Curve& pts, const std::string& cls) {
    if (pts.empty()) return;
    body_ << "<polyline class=\"" << cls << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      body_ << (i ? " " : "") << fmt(px(pts[i].first)) << ',' << fmt(py(pts[i].second));
    }
    body_ << "\"/>\n";
  }
  void circle(double x, double y, double r_px, const std::string& cls) {
    body_ << "<circle class=\"" << cls << "\" cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y)) << "\" r=\""
          << fmt(r_px) << "\"/>\n";
  }
  void ellipse(double x, double y, double rx, double ry, const std::string& cls) {
    body_ << "<ellipse class=\"" << cls << "\" cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y)) << "\" rx=\""
          << fmt(rx * sx_) << "\" ry=\"" << fmt(ry * sy_) << "\"/>\n";
  }
  void rect(double x0, double y0, double x1, double y1, const std::string& cls) {
    const double a = px(std::min(x0, x1)), b = py(std::max(y0, y1));
    body_ << "<rect class=\"" << cls << "\" x=\"" << fmt(a) << "\" y=\"" << fmt(b) << "\" width=\""
          << fmt(std::abs(x1 - x0) * sx_) << "\" height=\"" << fmt(std::abs(y1 - y0) * sy_) << "\"/>\n";
  }
  void text(double x, double y, const std::string& s, const std::string& cls = "label") {
    body_ << "<text class=\"" << cls << "\" x=\"" << fmt(px(x)) << "\" y=\"" << fmt(py(y)) << "\">" << s
          << "</text>\n";
  }
  void caption(const std::string& s) {
    body_ << "<text class=\"caption\" x=\"" << fmt(kMargin) << "\" y=\"" << fmt(kMargin / 2) << "\">" << s
          << "</text>\n";
  }
  void axes(const std::string& xlabel, const std::string& ylabel) {
    body_ << "<rect class=\"frame\" x=\"" << fmt(kMargin) << "\" y=\"" << fmt(kMargin) << "\" width=\""
          << fmt(w_ - 2 * kMargin) << "\" height=\"" << fmt(h_ - 2 * kMargin) << "\"/>\n";
    body_ << "<text class=\"axis\" x=\"" << fmt(w_ / 2.0) << "\" y=\"" << fmt(h_ - kMargin / 4) << "\">" << xlabel
          << "</text>\n";
    body_ << "<text class=\"axis\" x=\"" << fmt(kMargin / 4) << "\" y=\"" << fmt(h_ / 2.0) << "\">" << ylabel
          << "</text>\n";
    body_ << "<text class=\"tick\" x=\"" << fmt(kMargin) << "\" y=\"" << fmt(h_ - kMargin / 2) << "\">"
          << fmt(b_.x0) << "</text>\n";
    body_ << "<text class=\"tick\" x=\"" << fmt(w_ - kMargin) << "\" y=\"" << fmt(h_ - kMargin / 2) << "\">"
          << fmt(b_.x1) << "</text>\n";
    body_ << "<text class=\"tick\" x=\"2.000\" y=\"" << fmt(h_ - kMargin) << "\">" << fmt(b_.y0) << "</text>\n";
    body_ << "<text class=\"tick\" x=\"2.000\" y=\"" << fmt(kMargin) << "\">" << fmt(b_.y1) << "</text>\n";
  }

  std::string document() const {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w_ << "\" height=\"" << h_
       << "\" viewBox=\"0 0 " << w_ << ' ' << h_ << "\">\n"
       << "<defs>\n"
       << "<pattern id=\"stripes\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\">"
       << "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#555\" stroke-width=\"1.5\"/></pattern>\n"
       << "<style>"
       << ".front{fill:none;stroke:#1f4e99;stroke-width:1.2}"
       << ".cusp{fill:#c0392b}"
       << ".singular{fill:none;stroke:#c0392b;stroke-width:1.5}"
       << ".fold{fill:none;stroke:#c0392b;stroke-width:1;stroke-dasharray:4 2}"
       << ".shaded{fill:#bbb;stroke:none}"
       << ".striped{fill:url(#stripes);stroke:none}"
       << ".blend{fill:#eee;stroke:#999;stroke-width:0.5}"
       << ".core{fill:#f6d5a8;stroke:#b9770e;stroke-width:1}"
       << ".boundary{fill:none;stroke:#333;stroke-width:0.6;stroke-dasharray:3 3}"
       << ".frame{fill:none;stroke:#000;stroke-width:0.8}"
       << "text{font-family:sans-serif;font-size:11px}"
       << "</style>\n"
       << "</defs>\n"
       << body_.str() << "</svg>\n";
    return os.str();
  }

 private:
  int w_, h_;
  Bounds b_;
  double sx_ = 1.0, sy_ = 1.0;
  std::ostringstream body_;
};

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

std::string t_label(double t) { return "t = " + fmt(t); }

// Region boundaries and core disc in the (u, x2) plane.
void draw_region_overlay(Canvas& c, const PatchParams& p, double U, double X, bool regions, bool core) {
  if (regions) {
    for (double s : {-1.0, 1.0}) {
      c.polyline({{s * p.delta, -X}, {s * p.delta, X}}, "boundary");
      c.polyline({{s * p.delta / 2, -X}, {s * p.delta / 2, X}}, "boundary");
      c.polyline({{-U, s * p.epsilon}, {U, s * p.epsilon}}, "boundary");
    }
  }
  if (core) {
    const double r = std::sqrt(p.epsilon);
    c.ellipse(0.0, 0.0, r, r, "core");
    c.rect(-p.delta, -p.epsilon, p.delta, p.epsilon, "core");
  }
}

}  // namespace

std::string to_string(FrontProjection p) {
  switch (p) {
    case FrontProjection::X1Z: return "x1z";
    case FrontProjection::X2Z: return "x2z";
    case FrontProjection::UX2: return "ux2";
  }
  return "x1z";
}

FrontProjection parse_projection(const std::string& name) {
  if (name == "x1z") return FrontProjection::X1Z;
  if (name == "x2z") return FrontProjection::X2Z;
  if (name == "ux2") return FrontProjection::UX2;
  throw DomainError("unknown projection '" + name + "' (expected x1z, x2z or ux2)");
}

void RenderSpec::validate(double T) const {
  if (resolution < 16) throw DomainError("RenderSpec: resolution must be at least 16");
  if (width < 2 * kMargin + 10 || height < 2 * kMargin + 10) throw DomainError("RenderSpec: canvas too small");
  if (!(u_extent > 0.0) || !(x2_extent > 0.0)) throw DomainError("RenderSpec: extents must be positive");
  for (double t : t_values) {
    if (!(std::abs(t) <= 3.0 * T)) throw DomainError("RenderSpec: t = " + std::to_string(t) + " outside [-3T, 3T]");
  }
}

std::vector<FrontCusp> slice_cusps(double x2, double t) {
  const double c = t - x2 * x2;
  if (!(c > 0.0)) return {};
  std::vector<FrontCusp> out;
  for (double s : {-1.0, 1.0}) {
    const double u = s * std::sqrt(c);
    const auto f = front_family(u, x2, t);
    out.push_back({u, f(1), f(0)});
  }
  return out;
}

std::string render_front(const WrinkleChart& chart, const RenderSpec& spec, const PatchParams& params) {
  chart.validate();
  spec.validate(chart.T);
  const double U = spec.u_extent, X = spec.x2_extent;
  const auto us = linspace(-U, U, spec.resolution);
  const auto xs = linspace(-X, X, spec.resolution);

  std::vector<Curve> curves;
  std::vector<std::pair<double, double>> cusps, singular;
  std::vector<Curve> folds;
  Bounds b;

  for (double t : spec.t_values) {
    switch (spec.projection) {
      case FrontProjection::X1Z:
        for (double x2 : spec.slices) {
          Curve cv;
          for (double u : us) {
            const auto f = front_family(u, x2, t);
            cv.push_back({f(1), f(0)});
          }
          curves.push_back(cv);
          for (const auto& k : slice_cusps(x2, t)) cusps.push_back({k.x1, k.z});
        }
        break;
      case FrontProjection::X2Z:
        for (double u : spec.slices) {
          Curve cv;
          for (double x2 : xs) {
            const auto f = front_family(u, x2, t);
            cv.push_back({x2, f(0)});
          }
          curves.push_back(cv);
        }
        for (const auto& q : singular_locus(t)) {
          const auto f = front_family(q.u, q.x2(), t);
          singular.push_back({q.x2(), f(0)});
        }
        break;
      case FrontProjection::UX2:
        if (t > 0.0) {
          Curve fold;
          const double r = std::sqrt(t);
          for (double a : linspace(0.0, 2.0 * M_PI, spec.resolution)) fold.push_back({r * std::cos(a), r * std::sin(a)});
          folds.push_back(fold);
        }
        for (const auto& q : singular_locus(t)) singular.push_back({q.u, q.x2()});
        break;
    }
  }
  if (spec.projection == FrontProjection::UX2) {
    b.add(-U, -X);
    b.add(U, X);
  }
  for (const auto& cv : curves) {
    for (const auto& p : cv) b.add(p.first, p.second);
  }

  Canvas c(spec.width, spec.height, b);
  if (spec.projection == FrontProjection::UX2) draw_region_overlay(c, params, U, X, spec.overlay_regions, spec.overlay_core);
  for (const auto& cv : curves) c.polyline(cv, "front");
  for (const auto& f : folds) c.polyline(f, "fold");
  if (spec.overlay_singular) {
    for (const auto& p : cusps) c.circle(p.first, p.second, 3.0, "cusp");
    for (const auto& p : singular) c.circle(p.first, p.second, 3.5, "singular");
  }
  const std::string proj = to_string(spec.projection);
  std::string caption = "front " + proj;
  for (double t : spec.t_values) caption += ", " + t_label(t);
  c.caption(caption);
  switch (spec.projection) {
    case FrontProjection::X1Z: c.axes("x1", "z"); break;
    case FrontProjection::X2Z: c.axes("x2", "z"); break;
    case FrontProjection::UX2: c.axes("u", "x2"); break;
  }
  return c.document();
}

std::string render_regions(const PatchParams& params, const RenderSpec& spec) {
  params.validate();
  if (spec.resolution < 16) throw DomainError("RenderSpec: resolution must be at least 16");
  const double U = std::max(spec.u_extent, 1.5 * params.delta);
  const double X = std::max(spec.x2_extent, 1.5 * params.epsilon);
  Bounds b;
  b.add(-U, -X);
  b.add(U, X);
  Canvas c(spec.width, spec.height, b);
  const double d = params.delta, e = params.epsilon;
  // POS_U and NEG_U.
  c.rect(d, -X, U, X, "shaded");
  c.rect(-U, -X, -d, X, "shaded");
  // OUTER_X2 strips.
  c.rect(-d / 2, e, d / 2, X, "striped");
  c.rect(-d / 2, -X, d / 2, -e, "striped");
  // BLEND strips.
  for (double s : {-1.0, 1.0}) {
    c.rect(s * d / 2, e, s * d, X, "blend");
    c.rect(s * d / 2, -X, s * d, -e, "blend");
  }
  // CORE_DISC: the disc and the central rectangle.
  c.rect(-d, -e, d, e, "core");
  const double r = std::sqrt(e);
  Curve disc;
  for (double a : linspace(0.0, 2.0 * M_PI, spec.resolution)) disc.push_back({r * std::cos(a), r * std::sin(a)});
  c.polyline(disc, "core");
  c.text((d + U) / 2, 0.0, "POS_U");
  c.text(-(d + U) / 2, 0.0, "NEG_U");
  c.text(0.0, (e + X) / 2, "OUTER_X2");
  c.text(0.0, -(e + X) / 2, "OUTER_X2");
  c.text(0.75 * d, (e + X) / 2, "BLEND");
  c.text(-0.75 * d, (e + X) / 2, "BLEND");
  c.text(0.0, 0.0, "CORE");
  c.caption("regions in the (u, x2) plane, eps = " + fmt(e) + ", delta = " + fmt(d));
  c.axes("u", "x2");
  return c.document();
}

std::string render_nested(const NestedConfig& config, const RenderSpec& spec) {
  if (spec.resolution < 16) throw DomainError("RenderSpec: resolution must be at least 16");
  Bounds b;
  for (const auto& w : config.wrinkles) {
    b.add(w.center(0) - w.core_radius, w.center(1) - w.core_radius);
    b.add(w.center(0) + w.core_radius, w.center(1) + w.core_radius);
  }
  Canvas c(spec.width, spec.height, b);
  for (const auto& w : config.wrinkles) {
    c.ellipse(w.center(0), w.center(1), w.core_radius, w.core_radius, "boundary");
    if (w.chart.t > 0.0) {
      // Singular sphere |x_slow| = sqrt(t) of the unit chart, scaled into the core disc.
      const double r = w.core_radius * std::sqrt(std::min(w.chart.t / w.chart.T, 1.0));
      Curve loop;
      for (double a : linspace(0.0, 2.0 * M_PI, spec.resolution)) {
        loop.push_back({w.center(0) + r * std::cos(a), w.center(1) + r * std::sin(a)});
      }
      c.polyline(loop, "singular");
    }
  }
  c.caption("singular loci of nested wrinkles (" + std::to_string(config.wrinkles.size()) + ")");
  c.axes("x2", "x3");
  return c.document();
}

}  // namespace wcl
