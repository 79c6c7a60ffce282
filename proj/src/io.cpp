#include "nlab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <variant>

namespace nlab::io {
namespace {

constexpr double kPi = std::numbers::pi;

std::string format_int(long long v) { return std::to_string(v); }

// Fixed palette for plot series.
const char* series_color(std::size_t i) {
  static const char* kColors[] = {"#1f4e9c", "#c03524", "#2a7a35", "#8a4fb0",
                                  "#b07b1e", "#1e8a8a"};
  return kColors[i % (sizeof(kColors) / sizeof(kColors[0]))];
}

std::string format_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Box {
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
};

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, p);
}

std::string csv_escape(const std::string& field) {
  const bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string to_string(const Csv& table) {
  std::string out;
  auto append_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(row[i]);
    }
    out += '\n';
  };
  append_row(table.header);
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw std::invalid_argument("csv row width differs from header");
    append_row(row);
  }
  return out;
}

void ensure_dir(const std::string& dir) {
  if (!dir.empty()) std::filesystem::create_directories(dir);
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(content.data(), std::streamsize(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_csv(const Csv& table, const std::string& path) {
  write_text(path, to_string(table));
}

Csv modes_table(const std::vector<spectra::ModeIndex>& modes) {
  Csv t;
  t.header = {"surface", "variant", "k1", "k2", "N", "m", "n", "parity", "lambda", "lambda_sq"};
  t.rows.reserve(modes.size());
  for (const auto& mode : modes) {
    std::vector<std::string> row(10);
    row[0] = geom::surface_name(mode.surface);
    if (const auto* tm = std::get_if<spectra::TorusMode>(&mode.id)) {
      row[1] = "fourier";
      row[2] = format_int(tm->k1);
      row[3] = format_int(tm->k2);
      row[7] = tm->parity == spectra::Parity::Cos ? "cos" : "sin";
    } else if (const auto* sm = std::get_if<spectra::SphereMode>(&mode.id)) {
      row[1] = "spherical";
      row[4] = format_int(sm->deg);
      row[5] = format_int(std::abs(sm->ord));
      row[7] = sm->ord < 0 ? "sin" : "cos";
    } else {
      const auto& dm = std::get<spectra::DiscMode>(mode.id);
      row[1] = dm.bc == spectra::BoundaryCondition::Dirichlet ? "dirichlet" : "neumann";
      row[5] = format_int(dm.ang);
      row[6] = format_int(dm.rad);
      row[7] = dm.parity == spectra::Parity::Cos ? "cos" : "sin";
    }
    row[8] = format_double(mode.lambda);
    row[9] = format_double(mode.lambda_sq);
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string svg_plot(const std::vector<Series>& series, const std::string& xlabel,
                     const std::string& ylabel) {
  const double W = 800, H = 600, ml = 70, mr = 20, mt = 20, mb = 50;
  Box b;
  bool any = false;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!any) {
        b = {s.x[i], s.x[i], s.y[i], s.y[i]};
        any = true;
      }
      b.xmin = std::min(b.xmin, s.x[i]);
      b.xmax = std::max(b.xmax, s.x[i]);
      b.ymin = std::min(b.ymin, s.y[i]);
      b.ymax = std::max(b.ymax, s.y[i]);
    }
  if (!any) b = {0, 1, 0, 1};
  if (b.xmax == b.xmin) b.xmax = b.xmin + 1.0;
  if (b.ymax == b.ymin) b.ymax = b.ymin + 1.0;
  auto px = [&](double x) { return ml + (x - b.xmin) / (b.xmax - b.xmin) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - b.ymin) / (b.ymax - b.ymin) * (H - mt - mb); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n";
  out += "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  char buf[256];
  // axes
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                ml, H - mb, W - mr, H - mb);
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                ml, mt, ml, H - mb);
  out += buf;
  for (int k = 0; k <= 5; ++k) {
    const double fx = b.xmin + (b.xmax - b.xmin) * k / 5.0;
    const double fy = b.ymin + (b.ymax - b.ymin) * k / 5.0;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" text-anchor=\"middle\">%s</text>\n",
                  px(fx), H - mb + 18, format_tick(fx).c_str());
    out += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" text-anchor=\"end\">%s</text>\n",
                  ml - 6, py(fy) + 4, format_tick(fy).c_str());
    out += buf;
  }
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"13\" text-anchor=\"middle\">%s</text>\n",
                (ml + W - mr) / 2, H - 12, xlabel.c_str());
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"16\" y=\"%.1f\" font-size=\"13\" text-anchor=\"middle\" "
                "transform=\"rotate(-90 16 %.1f)\">%s</text>\n",
                (mt + H - mb) / 2, (mt + H - mb) / 2, ylabel.c_str());
  out += buf;
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    out += "<polyline fill=\"none\" stroke=\"";
    out += series_color(si);
    out += "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
      out += buf;
    }
    out += "\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" fill=\"%s\">%s</text>\n",
                  W - mr - 150.0, mt + 16.0 * double(si + 1), series_color(si), s.label.c_str());
    out += buf;
  }
  out += "</svg>\n";
  return out;
}

std::string svg_curves(const nodal::CurveSet& curves, geom::Surface s) {
  // Chart box per surface; disc curves are drawn in the plane.
  Box b;
  bool polar = false;
  switch (s) {
    case geom::Surface::Torus:
      b = {0, 1, 0, 1};
      break;
    case geom::Surface::Sphere:
      b = {0, 2 * kPi, 0, kPi};  // x = theta, y = phi
      break;
    case geom::Surface::Disc:
      b = {-1, 1, -1, 1};
      polar = true;
      break;
  }
  const double W = 640, H = 640, m = 20;
  auto px = [&](double x) { return m + (x - b.xmin) / (b.xmax - b.xmin) * (W - 2 * m); };
  auto py = [&](double y) { return H - m - (y - b.ymin) / (b.ymax - b.ymin) * (H - 2 * m); };
  auto chart_xy = [&](geom::Point p) -> std::pair<double, double> {
    if (polar) return {p.a * std::cos(p.b), p.a * std::sin(p.b)};
    if (s == geom::Surface::Sphere) return {p.b, p.a};
    return {p.a, p.b};
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
         "viewBox=\"0 0 640 640\">\n";
  out += "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
  char buf[160];
  if (polar) {
    std::snprintf(buf, sizeof(buf),
                  "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"%.1f\" fill=\"none\" stroke=\"#999\"/>\n",
                  px(0.0), py(0.0), (W - 2 * m) / 2.0);
    out += buf;
  } else {
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                  "stroke=\"#999\"/>\n",
                  px(b.xmin), py(b.ymax), W - 2 * m, H - 2 * m);
    out += buf;
  }
  const double jump_x = 0.5 * (b.xmax - b.xmin);
  const double jump_y = 0.5 * (b.ymax - b.ymin);
  for (const auto& curve : curves.curves) {
    if (curve.pts.empty()) continue;
    out += "<path fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.2\" d=\"";
    double lx = 0, ly = 0;
    bool started = false;
    auto emit = [&](geom::Point p) {
      auto [cx, cy] = chart_xy(p);
      const bool jump =
          started && (std::abs(cx - lx) > jump_x || std::abs(cy - ly) > jump_y);
      std::snprintf(buf, sizeof(buf), "%c%.2f %.2f ", (!started || jump) ? 'M' : 'L', px(cx),
                    py(cy));
      out += buf;
      lx = cx;
      ly = cy;
      started = true;
    };
    for (const auto& p : curve.pts) emit(p);
    if (curve.closed && !curve.pts.empty()) emit(curve.pts.front());
    out += "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string svg_heatmap(const std::vector<double>& value, int nrow, int ncol) {
  if (nrow <= 0 || ncol <= 0 || value.size() != std::size_t(nrow) * std::size_t(ncol))
    throw std::invalid_argument("heatmap shape mismatch");
  double vmax = 0.0;
  for (double v : value) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0.0) vmax = 1.0;
  const double W = 800, H = 800;
  const double cw = W / ncol, ch = H / nrow;
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
         "viewBox=\"0 0 800 800\">\n";
  char buf[160];
  for (int i = 0; i < nrow; ++i) {
    for (int j = 0; j < ncol; ++j) {
      const double v = value[std::size_t(i) * ncol + j] / vmax;
      // blue (-1) -> white (0) -> red (+1)
      const int r = int(std::lround(255.0 * std::min(1.0, 1.0 + std::min(v, 0.0))));
      const int g = int(std::lround(255.0 * (1.0 - std::abs(v))));
      const int bch = int(std::lround(255.0 * std::min(1.0, 1.0 - std::max(v, 0.0))));
      std::snprintf(buf, sizeof(buf),
                    "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                    "fill=\"rgb(%d,%d,%d)\"/>\n",
                    j * cw, i * ch, cw + 0.5, ch + 0.5, r, g, bch);
      out += buf;
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace nlab::io
