#pragma once

// Deterministic artifact writers: CSV tables with RFC 4180 quoting, SVG
// figures assembled directly (paths, axes, heatmap cells), plain text files.
// Numbers render with shortest round-trip formatting, so equal data produces
// byte-identical files.

#include <string>
#include <vector>

#include "nlab/geom.hpp"
#include "nlab/nodal.hpp"
#include "nlab/spectra.hpp"

namespace nlab::io {

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string format_double(double v);
// Quotes a field when it contains commas, quotes or line breaks.
std::string csv_escape(const std::string& field);
std::string to_string(const Csv& table);

void ensure_dir(const std::string& dir);
void write_text(const std::string& path, const std::string& content);
void write_csv(const Csv& table, const std::string& path);

// Mode table, schema surface,variant,k1,k2,N,m,n,parity,lambda,lambda_sq.
// variant names the basis family (fourier, spherical, dirichlet, neumann);
// index columns that do not apply to the surface stay empty.
Csv modes_table(const std::vector<spectra::ModeIndex>& modes);

struct Series {
  std::string label;
  std::vector<double> x, y;
};

// Line plot with axes, ticks and a legend; one polyline per series.
std::string svg_plot(const std::vector<Series>& series, const std::string& xlabel,
                     const std::string& ylabel);

// Curve set drawn in chart coordinates; disc curves map to the plane and the
// unit circle is outlined. Periodic seam jumps break the drawn path.
std::string svg_curves(const nodal::CurveSet& curves, geom::Surface s);

// Row-major field as colored cells, blue negative, red positive.
std::string svg_heatmap(const std::vector<double>& value, int nrow, int ncol);

}  // namespace nlab::io
