#include "treewalk/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace treewalk {

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

struct Frame {
  double left = 70, right = 160, top = 40, bottom = 55;
  double width = 720, height = 460;
  double x0, x1, y0, y1;
  bool log_y = false;

  double sx(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
  double sy(double y) const {
    const double v = log_y ? std::log10(y) : y;
    return height - bottom - (v - y0) / (y1 - y0) * (height - top - bottom);
  }
};

void pad_range(double& lo, double& hi) {
  if (!(hi > lo)) {
    const double c = lo;
    lo = c - 0.5 - std::abs(c) * 0.05;
    hi = c + 0.5 + std::abs(c) * 0.05;
  }
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void draw_axes(std::ostringstream& os, const Frame& f, const PlotSpec& spec) {
  const double pw = f.width - f.left - f.right, ph = f.height - f.top - f.bottom;
  os << "<rect x=\"" << px(f.left) << "\" y=\"" << px(f.top) << "\" width=\"" << px(pw) << "\" height=\"" << px(ph)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 5.0;
    const double x = f.sx(xv);
    os << "<line x1=\"" << px(x) << "\" y1=\"" << px(f.height - f.bottom) << "\" x2=\"" << px(x) << "\" y2=\""
       << px(f.height - f.bottom + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px(x) << "\" y=\"" << px(f.height - f.bottom + 18)
       << "\" font-size=\"11\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
    const double yv = f.y0 + (f.y1 - f.y0) * i / 5.0;
    const double y = f.height - f.bottom - (yv - f.y0) / (f.y1 - f.y0) * ph;
    os << "<line x1=\"" << px(f.left - 5) << "\" y1=\"" << px(y) << "\" x2=\"" << px(f.left) << "\" y2=\"" << px(y)
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px(f.left - 8) << "\" y=\"" << px(y + 4) << "\" font-size=\"11\" text-anchor=\"end\">"
       << (f.log_y ? "1e" + tick_label(yv) : tick_label(yv)) << "</text>\n";
  }
  os << "<text x=\"" << px(f.left + pw / 2) << "\" y=\"" << px(f.height - 12)
     << "\" font-size=\"13\" text-anchor=\"middle\">" << escape_xml(spec.xlabel) << "</text>\n";
  os << "<text x=\"16\" y=\"" << px(f.top + ph / 2) << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << px(f.top + ph / 2) << ")\">" << escape_xml(spec.ylabel) << "</text>\n";
  os << "<text x=\"" << px(f.left + pw / 2) << "\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">"
     << escape_xml(spec.title) << "</text>\n";
}

std::string svg_open(const Frame& f) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(f.width) + "\" height=\"" + px(f.height) +
         "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("Table::add_row: column count mismatch");
  rows.push_back(std::move(row));
}

void write_csv(const std::filesystem::path& path, const Table& table) {
  std::string text;
  for (const auto& [k, v] : table.meta) text += "# " + k + ": " + v + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) text += (i ? "," : "") + table.columns[i];
  text += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + format_double(row[i]);
    text += "\n";
  }
  write_file(path, text);
}

void write_line_plot(const std::filesystem::path& path, const PlotSpec& spec, const std::vector<PlotSeries>& series) {
  Frame f;
  f.log_y = spec.log_y;
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  auto usable = [&](double y) { return std::isfinite(y) && (!spec.log_y || y > 0.0); };
  auto yval = [&](double y) { return spec.log_y ? std::log10(y) : y; };
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!usable(s.y[i]) || !std::isfinite(s.x[i])) continue;
      xlo = std::min(xlo, s.x[i]), xhi = std::max(xhi, s.x[i]);
      const double e = s.err.empty() || !std::isfinite(s.err[i]) ? 0.0 : s.err[i];
      const double lo = usable(s.y[i] - e) ? s.y[i] - e : s.y[i];
      ylo = std::min(ylo, yval(lo)), yhi = std::max(yhi, yval(s.y[i] + e));
    }
  if (!std::isfinite(xlo)) xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  if (spec.log_y) ylo = std::max(ylo, yhi - 12.0);
  pad_range(xlo, xhi);
  pad_range(ylo, yhi);
  f.x0 = xlo, f.x1 = xhi, f.y0 = ylo, f.y1 = yhi;

  std::ostringstream os;
  os << svg_open(f);
  draw_axes(os, f, spec);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!usable(s.y[i]) || yval(s.y[i]) < f.y0) continue;
      points += px(f.sx(s.x[i])) + "," + px(f.sy(s.y[i])) + " ";
    }
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
       << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"" << points << "\"/>\n";
    if (!s.err.empty())
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!usable(s.y[i]) || !std::isfinite(s.err[i]) || s.err[i] <= 0.0) continue;
        const double lo = usable(s.y[i] - s.err[i]) ? s.y[i] - s.err[i] : s.y[i];
        const double x = f.sx(s.x[i]);
        os << "<line x1=\"" << px(x) << "\" y1=\"" << px(f.sy(lo)) << "\" x2=\"" << px(x) << "\" y2=\""
           << px(f.sy(s.y[i] + s.err[i])) << "\" stroke=\"" << color << "\"/>\n";
      }
    const double ly = f.top + 14 + 18 * static_cast<double>(k);
    const double lx = f.width - f.right + 12;
    os << "<line x1=\"" << px(lx) << "\" y1=\"" << px(ly - 4) << "\" x2=\"" << px(lx + 22) << "\" y2=\"" << px(ly - 4)
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "")
       << "/>\n<text x=\"" << px(lx + 28) << "\" y=\"" << px(ly) << "\" font-size=\"11\">" << escape_xml(s.label)
       << "</text>\n";
  }
  os << "</svg>\n";
  write_file(path, os.str());
}

void write_heatmap(const std::filesystem::path& path, const PlotSpec& spec, const std::vector<double>& xs,
                   const std::vector<double>& ys, const std::vector<std::vector<double>>& z) {
  if (xs.empty() || ys.empty() || z.size() != ys.size()) throw std::invalid_argument("write_heatmap: bad grid");
  double zlo = std::numeric_limits<double>::infinity(), zhi = -zlo;
  for (const auto& row : z) {
    if (row.size() != xs.size()) throw std::invalid_argument("write_heatmap: bad grid");
    for (double v : row)
      if (std::isfinite(v)) zlo = std::min(zlo, v), zhi = std::max(zhi, v);
  }
  if (!std::isfinite(zlo)) zlo = 0, zhi = 1;
  pad_range(zlo, zhi);

  // cell edges halfway between grid points
  auto edges = [](const std::vector<double>& v) {
    std::vector<double> e(v.size() + 1);
    if (v.size() == 1) {
      e[0] = v[0] - 0.5, e[1] = v[0] + 0.5;
      return e;
    }
    for (std::size_t i = 1; i < v.size(); ++i) e[i] = 0.5 * (v[i - 1] + v[i]);
    e[0] = v[0] - (e[1] - v[0]);
    e[v.size()] = v.back() + (v.back() - e[v.size() - 1]);
    return e;
  };
  const auto ex = edges(xs), ey = edges(ys);
  Frame f;
  f.right = 110;
  f.x0 = ex.front(), f.x1 = ex.back(), f.y0 = ey.front(), f.y1 = ey.back();

  // viridis-like ramp
  auto color = [&](double v) {
    static const double stops[5][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    double t = std::clamp((v - zlo) / (zhi - zlo), 0.0, 1.0) * 4.0;
    const int i = std::min(static_cast<int>(t), 3);
    t -= i;
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(stops[i][0] + t * (stops[i + 1][0] - stops[i][0])),
                  static_cast<int>(stops[i][1] + t * (stops[i + 1][1] - stops[i][1])),
                  static_cast<int>(stops[i][2] + t * (stops[i + 1][2] - stops[i][2])));
    return std::string(buf);
  };

  std::ostringstream os;
  os << svg_open(f);
  for (std::size_t iy = 0; iy < ys.size(); ++iy)
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
      const double x = f.sx(ex[ix]), w = f.sx(ex[ix + 1]) - x;
      const double y = f.sy(ey[iy + 1]), h = f.sy(ey[iy]) - y;
      const double v = z[iy][ix];
      os << "<rect x=\"" << px(x) << "\" y=\"" << px(y) << "\" width=\"" << px(w + 0.3) << "\" height=\""
         << px(h + 0.3) << "\" fill=\"" << (std::isfinite(v) ? color(v) : std::string("#bbbbbb")) << "\"/>\n";
    }
  draw_axes(os, f, spec);
  const double bx = f.width - f.right + 20, btop = f.top, bh = f.height - f.top - f.bottom;
  for (int i = 0; i < 50; ++i) {
    const double v = zhi - (zhi - zlo) * (i + 0.5) / 50.0;
    os << "<rect x=\"" << px(bx) << "\" y=\"" << px(btop + bh * i / 50.0) << "\" width=\"18\" height=\""
       << px(bh / 50.0 + 0.3) << "\" fill=\"" << color(v) << "\"/>\n";
  }
  os << "<text x=\"" << px(bx + 24) << "\" y=\"" << px(btop + 10) << "\" font-size=\"11\">" << tick_label(zhi)
     << "</text>\n<text x=\"" << px(bx + 24) << "\" y=\"" << px(btop + bh) << "\" font-size=\"11\">" << tick_label(zlo)
     << "</text>\n</svg>\n";
  write_file(path, os.str());
}

}  // namespace treewalk
