#include "varexp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "varexp/errors.hpp"

namespace varexp {

namespace {

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string termination_string(const RunResult& r) {
  switch (r.termination) {
    case Termination::completed:
      return "completed";
    case Termination::overflow:
      return "overflow@" + fmt9(r.termination_time);
    case Termination::solver_failure:
      return "solver_failure@" + fmt9(r.termination_time);
  }
  return "unknown";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace

std::string format_csv(const RunResult& result) {
  std::string out;
  out += "# varexp diagnostics\n";
  out += "# termination=" + termination_string(result) + "\n";
  out += result.constants.serialize("# ");
  out += serialize_certificates(result.blowup, result.decay, "# ");
  out += "t,theta,h01,phi,E,H,lux_grad_p,delta,maxabs\n";
  for (const DiagnosticsRecord& r : result.records) {
    out += fmt9(r.t) + "," + fmt9(r.theta) + "," + fmt9(r.h01) + "," +
           fmt9(r.phi) + "," + fmt9(r.energy.E) + "," + fmt9(r.H) + "," +
           fmt9(r.lux_grad_p) + ",";
    if (r.delta) out += fmt9(*r.delta);
    out += "," + fmt9(r.maxabs) + "\n";
  }
  return out;
}

void emit_csv(const RunResult& result, const std::string& path) {
  write_file(path, format_csv(result));
}

namespace {

struct PlotFrame {
  double width = 800, height = 520;
  double left = 70, right = 20, top = 20, bottom = 50;
  double tmin = 0, tmax = 1, vmin = 0, vmax = 1;

  double x(double t) const {
    return left + (t - tmin) / (tmax - tmin) * (width - left - right);
  }
  double y(double v) const {
    return height - bottom -
           (v - vmin) / (vmax - vmin) * (height - top - bottom);
  }
};

std::string polyline(const PlotFrame& f,
                     const std::vector<std::pair<double, double>>& pts,
                     const std::string& style) {
  std::string s = "  <polyline fill=\"none\" " + style + " points=\"";
  for (const auto& [t, v] : pts) s += fmt9(f.x(t)) + "," + fmt9(f.y(v)) + " ";
  s += "\"/>\n";
  return s;
}

}  // namespace

void emit_svg(const RunResult& result, const std::string& path) {
  if (result.records.empty())
    throw ConfigError("emit_svg: no records to plot");

  std::vector<std::pair<double, double>> norm_pts, delta_pts;
  for (const DiagnosticsRecord& r : result.records) {
    norm_pts.emplace_back(r.t, r.h01);
    if (r.delta) delta_pts.emplace_back(r.t, *r.delta);
  }

  PlotFrame f;
  f.tmin = result.records.front().t;
  f.tmax = std::max(result.records.back().t, f.tmin + 1e-12);
  double vmax = 0.0;
  for (const auto& [t, v] : norm_pts) vmax = std::max(vmax, v);
  for (const auto& [t, v] : delta_pts) vmax = std::max(vmax, v);
  f.vmax = vmax > 0.0 ? 1.05 * vmax : 1.0;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         fmt9(f.width) + "\" height=\"" + fmt9(f.height) + "\">\n";
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes with ticks
  svg += "  <line x1=\"" + fmt9(f.left) + "\" y1=\"" + fmt9(f.y(f.vmin)) +
         "\" x2=\"" + fmt9(f.width - f.right) + "\" y2=\"" + fmt9(f.y(f.vmin)) +
         "\" stroke=\"black\"/>\n";
  svg += "  <line x1=\"" + fmt9(f.left) + "\" y1=\"" + fmt9(f.y(f.vmin)) +
         "\" x2=\"" + fmt9(f.left) + "\" y2=\"" + fmt9(f.top) +
         "\" stroke=\"black\"/>\n";
  const int nticks = 5;
  for (int i = 0; i <= nticks; ++i) {
    const double t = f.tmin + (f.tmax - f.tmin) * i / nticks;
    const double v = f.vmin + (f.vmax - f.vmin) * i / nticks;
    svg += "  <line x1=\"" + fmt9(f.x(t)) + "\" y1=\"" + fmt9(f.y(f.vmin)) +
           "\" x2=\"" + fmt9(f.x(t)) + "\" y2=\"" + fmt9(f.y(f.vmin) + 5) +
           "\" stroke=\"black\"/>\n";
    svg += "  <text x=\"" + fmt9(f.x(t)) + "\" y=\"" + fmt9(f.y(f.vmin) + 20) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + fmt9(t) + "</text>\n";
    svg += "  <line x1=\"" + fmt9(f.left - 5) + "\" y1=\"" + fmt9(f.y(v)) +
           "\" x2=\"" + fmt9(f.left) + "\" y2=\"" + fmt9(f.y(v)) +
           "\" stroke=\"black\"/>\n";
    svg += "  <text x=\"" + fmt9(f.left - 8) + "\" y=\"" + fmt9(f.y(v) + 4) +
           "\" font-size=\"12\" text-anchor=\"end\">" + fmt9(v) + "</text>\n";
  }
  svg += "  <text x=\"" + fmt9(0.5 * f.width) + "\" y=\"" +
         fmt9(f.height - 10) + "\" font-size=\"13\" text-anchor=\"middle\">t"
         "</text>\n";

  svg += polyline(f, norm_pts, "stroke=\"black\" stroke-width=\"1.5\"");
  svg += "  <text x=\"" + fmt9(f.width - f.right - 4) + "\" y=\"" +
         fmt9(f.y(norm_pts.back().second) - 6) +
         "\" font-size=\"12\" text-anchor=\"end\">H01 norm</text>\n";
  if (!delta_pts.empty()) {
    svg += polyline(f, delta_pts,
                    "stroke=\"#777777\" stroke-width=\"1.5\" "
                    "stroke-dasharray=\"6,4\"");
    svg += "  <text x=\"" + fmt9(f.width - f.right - 4) + "\" y=\"" +
           fmt9(f.y(delta_pts.back().second) - 6) +
           "\" font-size=\"12\" text-anchor=\"end\" fill=\"#555555\">delta "
           "envelope</text>\n";
  }
  svg += "</svg>\n";
  write_file(path, svg);
}

void emit_snapshot_svg(const Mesh& mesh, const NodalField& field, double t,
                       const std::string& path) {
  if (static_cast<int>(field.size()) != mesh.num_vertices())
    throw ConfigError("emit_snapshot_svg: field/mesh size mismatch");
  const double size = 560, margin = 30;
  const Rect& r = mesh.rect;
  auto px = [&](double x) {
    return margin + (x - r.xmin) / r.width() * (size - 2 * margin);
  };
  auto py = [&](double y) {
    return size - margin - (y - r.ymin) / r.height() * (size - 2 * margin);
  };

  std::vector<double> means(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t].v;
    means[t] = (field[tri[0]] + field[tri[1]] + field[tri[2]]) / 3.0;
  }
  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  for (double v : means) {
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  const double span = vmax - vmin;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         fmt9(size) + "\" height=\"" + fmt9(size) + "\">\n";
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tri = mesh.triangles[t];
    const int gray =
        span > 0.0
            ? static_cast<int>(std::lround(255.0 * (means[t] - vmin) / span))
            : 128;
    std::string pts;
    for (int a = 0; a < 3; ++a) {
      const Point& v = mesh.vertices[tri.v[a]];
      pts += fmt9(px(v.x)) + "," + fmt9(py(v.y)) + " ";
    }
    svg += "  <polygon points=\"" + pts + "\" fill=\"rgb(" +
           std::to_string(gray) + "," + std::to_string(gray) + "," +
           std::to_string(gray) + ")\"/>\n";
  }
  svg += "  <rect x=\"" + fmt9(margin) + "\" y=\"" + fmt9(margin) +
         "\" width=\"" + fmt9(size - 2 * margin) + "\" height=\"" +
         fmt9(size - 2 * margin) + "\" fill=\"none\" stroke=\"black\"/>\n";
  svg += "  <text x=\"" + fmt9(margin) + "\" y=\"" + fmt9(margin - 10) +
         "\" font-size=\"13\">t = " + fmt9(t) + "</text>\n";
  svg += "</svg>\n";
  write_file(path, svg);
}

}  // namespace varexp
