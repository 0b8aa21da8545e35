#pragma once

// Deterministic SVG 1.1 and CSV output. Every number goes through "%.17g",
// so identical inputs give byte-identical documents and CSV files round-trip
// exactly through strtod.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mcurves/analysis.hpp"
#include "mcurves/error.hpp"
#include "mcurves/pseudospiral.hpp"
#include "mcurves/quaternion.hpp"

namespace mcurves {

inline std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Canvas {
  double width = 800.0;
  double height = 600.0;
  double margin = 20.0;
};

struct PlotSpec {
  std::vector<SampledCurve> curves;
  std::vector<double> stroke_widths{1.0};  // output units, one panel per width
  Canvas canvas;
  bool axes = false;
  std::vector<std::optional<StressMarker>> annotations;  // per curve, may be shorter than curves
};

enum class Primitive { Circle, Square, Triangle };
enum class SizeRule { Constant, ProportionalToRadius };

struct OrnamentSpec {
  SampledCurve path;
  Primitive primitive = Primitive::Circle;
  std::size_t count = 12;
  SizeRule size_rule = SizeRule::Constant;
  double size_base = 0.05;  // world units
  std::vector<double> rhythm{1.0};
  std::vector<std::string> palette{"#000000"};
  Canvas canvas;
};

struct OrnamentStation {
  double s = 0.0;
  double x = 0.0;
  double y = 0.0;
  double angle = 0.0;  // tangent direction, radians
  double size = 0.0;   // world units
  std::string color;
};

namespace render {

inline std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Box {
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity();
  double x1 = -std::numeric_limits<double>::infinity();
  double y1 = -std::numeric_limits<double>::infinity();

  void add(double x, double y, double pad = 0.0) {
    x0 = std::min(x0, x - pad);
    y0 = std::min(y0, y - pad);
    x1 = std::max(x1, x + pad);
    y1 = std::max(y1, y + pad);
  }
};

/// Uniform scale + translate taking a world box into a canvas rectangle,
/// centered, y pointing down.
struct View {
  double scale = 1.0;
  double ox = 0.0;  // canvas x of world x = 0
  double oy = 0.0;  // canvas y of world y = 0

  View(const Box& b, double left, double top, double width, double height) {
    const double w = b.x1 - b.x0, h = b.y1 - b.y0;
    if (w > 0.0 && h > 0.0) {
      scale = std::min(width / w, height / h);
    } else if (w > 0.0) {
      scale = width / w;
    } else if (h > 0.0) {
      scale = height / h;
    }
    const double cx = 0.5 * (b.x0 + b.x1), cy = 0.5 * (b.y0 + b.y1);
    ox = left + 0.5 * width - scale * cx;
    oy = top + 0.5 * height + scale * cy;
  }

  double x(double wx) const { return ox + scale * wx; }
  double y(double wy) const { return oy - scale * wy; }
};

inline void check_canvas(const Canvas& c) {
  if (!(c.width > 0.0) || !(c.height > 0.0) || !(c.margin >= 0.0) || !(2 * c.margin < c.width) ||
      !(2 * c.margin < c.height)) {
    throw Error(ErrorCode::InvalidArgument, "canvas needs positive size and a margin smaller than half of it");
  }
}

inline void header(std::ostringstream& out, const Canvas& c) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(c.width) << "\" height=\""
      << fmt(c.height) << "\" viewBox=\"0 0 " << fmt(c.width) << " " << fmt(c.height) << "\">\n";
}

/// Linear interpolation of a sampled curve at arc length s.
inline CurveSample at_arc_length(const SampledCurve& c, double s) {
  const auto& v = c.samples;
  if (s <= v.front().s) return v.front();
  if (s >= v.back().s) return v.back();
  const auto it = std::upper_bound(v.begin(), v.end(), s, [](double a, const CurveSample& b) { return a < b.s; });
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double f = (s - a.s) / (b.s - a.s);
  return {s, a.x + f * (b.x - a.x), a.y + f * (b.y - a.y), a.theta + f * (b.theta - a.theta),
          a.kappa + f * (b.kappa - a.kappa)};
}

inline void arrow(std::ostringstream& out, const View& v, const CurveSample& at, const char* color, double len) {
  // Points at the curve along its left normal, from outside.
  const double nx = -std::sin(at.theta), ny = std::cos(at.theta);
  const double tx = v.x(at.x), ty = v.y(at.y);
  const double fx = tx + len * nx, fy = ty - len * ny;
  const double hx = 0.25 * len * nx, hy = -0.25 * len * ny;
  out << "<path d=\"M " << fmt(fx) << " " << fmt(fy) << " L " << fmt(tx) << " " << fmt(ty) << " M "
      << fmt(tx + hx - 0.5 * hy) << " " << fmt(ty + hy + 0.5 * hx) << " L " << fmt(tx) << " " << fmt(ty) << " L "
      << fmt(tx + hx + 0.5 * hy) << " " << fmt(ty + hy - 0.5 * hx) << "\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1\"/>\n";
}

}  // namespace render

/// Curves drawn once per stroke width, each width in its own horizontal band
/// stacked top to bottom so thickness ladders can be compared side by side.
inline std::string plot_svg(const PlotSpec& spec) {
  if (spec.curves.empty()) throw Error(ErrorCode::EmptyInput, "plot needs at least one curve");
  if (spec.stroke_widths.empty()) throw Error(ErrorCode::EmptyInput, "plot needs at least one stroke width");
  for (const auto& c : spec.curves) {
    if (c.samples.empty()) throw Error(ErrorCode::EmptyInput, "curve has no samples");
  }
  for (double w : spec.stroke_widths) {
    if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorCode::InvalidArgument, "stroke widths must be positive");
  }
  render::check_canvas(spec.canvas);

  render::Box box;
  for (const auto& c : spec.curves) {
    for (const auto& p : c.samples) box.add(p.x, p.y);
  }
  const double band = spec.canvas.height / static_cast<double>(spec.stroke_widths.size());
  const double inner_h = band - 2.0 * spec.canvas.margin;
  if (!(inner_h > 0.0)) throw Error(ErrorCode::InvalidArgument, "canvas too short for the number of stroke widths");
  static constexpr const char* kColors[] = {"#000000", "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::ostringstream out;
  render::header(out, spec.canvas);
  for (std::size_t k = 0; k < spec.stroke_widths.size(); ++k) {
    const double top = band * static_cast<double>(k) + spec.canvas.margin;
    const render::View view(box, spec.canvas.margin, top, spec.canvas.width - 2.0 * spec.canvas.margin, inner_h);
    out << "<g id=\"width-" << k << "\">\n";
    if (spec.axes) {
      const double left = spec.canvas.margin, right = spec.canvas.width - spec.canvas.margin;
      const double bottom = top + inner_h;
      const double ax = std::clamp(view.x(0.0), left, right);
      const double ay = std::clamp(view.y(0.0), top, bottom);
      out << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(ay) << "\" x2=\"" << fmt(right) << "\" y2=\"" << fmt(ay)
          << "\" stroke=\"#999999\" stroke-width=\"0.5\"/>\n";
      out << "<line x1=\"" << fmt(ax) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(ax) << "\" y2=\"" << fmt(bottom)
          << "\" stroke=\"#999999\" stroke-width=\"0.5\"/>\n";
    }
    for (std::size_t i = 0; i < spec.curves.size(); ++i) {
      const auto& c = spec.curves[i];
      out << "<path d=\"";
      for (std::size_t j = 0; j < c.samples.size(); ++j) {
        out << (j == 0 ? "M " : " L ") << fmt(view.x(c.samples[j].x)) << " " << fmt(view.y(c.samples[j].y));
      }
      out << "\" fill=\"none\" stroke=\"" << kColors[i % 6] << "\" stroke-width=\"" << fmt(spec.stroke_widths[k])
          << "\" stroke-linecap=\"round\" stroke-linejoin=\"round\"/>\n";
    }
    for (std::size_t i = 0; i < spec.annotations.size() && i < spec.curves.size(); ++i) {
      if (!spec.annotations[i]) continue;
      const auto& m = *spec.annotations[i];
      const double len = 0.08 * std::min(spec.canvas.width, band);
      render::arrow(out, view, render::at_arc_length(spec.curves[i], m.s_at_max_kappa), "#d62728", len);
      render::arrow(out, view, render::at_arc_length(spec.curves[i], m.s_at_max_kappa_slope), "#ff7f0e", len);
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

/// Stations at uniform arc length along the path with their primitive size
/// and color. With count = 1 the single station sits at the path start.
inline std::vector<OrnamentStation> ornament_stations(const OrnamentSpec& spec) {
  if (spec.path.samples.size() < 2) throw Error(ErrorCode::EmptyInput, "ornament path needs at least two samples");
  if (spec.count < 1) throw Error(ErrorCode::InvalidArgument, "ornament count must be at least 1");
  if (spec.rhythm.empty()) throw Error(ErrorCode::EmptyInput, "rhythm must not be empty");
  if (spec.palette.empty()) throw Error(ErrorCode::EmptyInput, "palette must not be empty");
  for (double r : spec.rhythm) {
    if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "rhythm entries must be positive");
  }
  if (!(spec.size_base > 0.0)) throw Error(ErrorCode::InvalidArgument, "size_base must be positive");

  const double s0 = spec.path.samples.front().s;
  const double s1 = spec.path.samples.back().s;
  std::vector<OrnamentStation> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    const double s = spec.count == 1 ? s0
                     : i + 1 == spec.count
                         ? s1
                         : s0 + (s1 - s0) * static_cast<double>(i) / static_cast<double>(spec.count - 1);
    const auto p = render::at_arc_length(spec.path, s);
    double size = spec.size_base * spec.rhythm[i % spec.rhythm.size()];
    if (spec.size_rule == SizeRule::ProportionalToRadius) {
      if (p.kappa == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "radius-proportional sizes need nonzero curvature");
      }
      size /= std::abs(p.kappa);
    }
    out.push_back({s, p.x, p.y, p.theta, size, spec.palette[i % spec.palette.size()]});
  }
  return out;
}

inline std::string ornament_svg(const OrnamentSpec& spec) {
  const auto stations = ornament_stations(spec);
  render::check_canvas(spec.canvas);
  render::Box box;
  for (const auto& p : spec.path.samples) box.add(p.x, p.y);
  for (const auto& st : stations) box.add(st.x, st.y, st.size);
  const double inner_w = spec.canvas.width - 2.0 * spec.canvas.margin;
  const double inner_h = spec.canvas.height - 2.0 * spec.canvas.margin;
  const render::View view(box, spec.canvas.margin, spec.canvas.margin, inner_w, inner_h);

  std::ostringstream out;
  render::header(out, spec.canvas);
  out << "<path d=\"";
  for (std::size_t j = 0; j < spec.path.samples.size(); ++j) {
    const auto& p = spec.path.samples[j];
    out << (j == 0 ? "M " : " L ") << fmt(view.x(p.x)) << " " << fmt(view.y(p.y));
  }
  out << "\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n";
  out << "<g id=\"stations\">\n";
  for (const auto& st : stations) {
    const double r = view.scale * st.size;
    const double deg = -st.angle * 180.0 / std::numbers::pi;  // canvas y is flipped
    const std::string place = "translate(" + fmt(view.x(st.x)) + " " + fmt(view.y(st.y)) + ") rotate(" + fmt(deg) + ")";
    const std::string fill = render::escape(st.color);
    switch (spec.primitive) {
      case Primitive::Circle:
        out << "<circle cx=\"0\" cy=\"0\" r=\"" << fmt(r) << "\" transform=\"" << place << "\" fill=\"" << fill
            << "\"/>\n";
        break;
      case Primitive::Square:
        out << "<rect x=\"" << fmt(-r) << "\" y=\"" << fmt(-r) << "\" width=\"" << fmt(2 * r) << "\" height=\""
            << fmt(2 * r) << "\" transform=\"" << place << "\" fill=\"" << fill << "\"/>\n";
        break;
      case Primitive::Triangle: {
        // Equilateral, inscribed in radius r, apex along the tangent.
        const double h = 0.5 * r, w = r * std::sqrt(3.0) / 2.0;
        out << "<polygon points=\"" << fmt(r) << ",0 " << fmt(-h) << "," << fmt(w) << " " << fmt(-h) << ","
            << fmt(-w) << "\" transform=\"" << place << "\" fill=\"" << fill << "\"/>\n";
        break;
      }
    }
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

inline Primitive parse_primitive(std::string_view s) {
  if (s == "circle") return Primitive::Circle;
  if (s == "square") return Primitive::Square;
  if (s == "triangle") return Primitive::Triangle;
  throw Error(ErrorCode::UnknownName, "unknown primitive '" + std::string(s) + "' (circle, square, triangle)");
}

// ---- CSV ----

inline std::string export_csv(const SampledCurve& curve) {
  if (curve.samples.empty()) throw Error(ErrorCode::EmptyInput, "nothing to export");
  std::string out = "s,x,y,theta,kappa\n";
  for (const auto& p : curve.samples) {
    out += fmt(p.s) + "," + fmt(p.x) + "," + fmt(p.y) + "," + fmt(p.theta) + "," + fmt(p.kappa) + "\n";
  }
  return out;
}

inline std::string export_csv(const std::vector<QiSample>& samples) {
  if (samples.empty()) throw Error(ErrorCode::EmptyInput, "nothing to export");
  std::string out = "s,x,y,z,tx,ty,tz\n";
  for (const auto& p : samples) {
    out += fmt(p.s) + "," + fmt(p.point.x) + "," + fmt(p.point.y) + "," + fmt(p.point.z) + "," + fmt(p.tangent.x) +
           "," + fmt(p.tangent.y) + "," + fmt(p.tangent.z) + "\n";
  }
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a named column; throws InvalidArgument if absent.
  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw Error(ErrorCode::InvalidArgument, "CSV has no column '" + std::string(name) + "'");
  }
};

/// Numeric CSV with a header line. Accepts LF or CRLF line ends.
inline CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  std::size_t line_no = 0;
  auto split = [](std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return cells;
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw Error(ErrorCode::InvalidArgument, "CSV line " + std::to_string(line_no) + " has " +
                                                  std::to_string(cells.size()) + " fields, expected " +
                                                  std::to_string(t.header.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (c.empty() || end != c.c_str() + c.size()) {
        throw Error(ErrorCode::InvalidArgument, "CSV line " + std::to_string(line_no) + ": '" + c + "' is not a number");
      }
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw Error(ErrorCode::EmptyInput, "CSV is empty");
  return t;
}

/// Rebuilds curve samples from `s,x,y,theta,kappa` CSV.
inline std::vector<CurveSample> parse_curve_csv(std::string_view text) {
  const auto t = parse_csv(text);
  const std::size_t is = t.column("s"), ix = t.column("x"), iy = t.column("y"), ith = t.column("theta"),
                    ik = t.column("kappa");
  std::vector<CurveSample> out;
  out.reserve(t.rows.size());
  for (const auto& r : t.rows) out.push_back({r[is], r[ix], r[iy], r[ith], r[ik]});
  if (out.empty()) throw Error(ErrorCode::EmptyInput, "CSV has no data rows");
  return out;
}

inline std::vector<QiSample> parse_qi_csv(std::string_view text) {
  const auto t = parse_csv(text);
  const std::size_t c[7] = {t.column("s"),  t.column("x"),  t.column("y"), t.column("z"),
                            t.column("tx"), t.column("ty"), t.column("tz")};
  std::vector<QiSample> out;
  out.reserve(t.rows.size());
  for (const auto& r : t.rows) out.push_back({r[c[0]], {r[c[1]], r[c[2]], r[c[3]]}, {r[c[4]], r[c[5]], r[c[6]]}});
  if (out.empty()) throw Error(ErrorCode::EmptyInput, "CSV has no data rows");
  return out;
}

}  // namespace mcurves
