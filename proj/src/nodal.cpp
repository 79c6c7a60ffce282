#include "nlab/nodal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlab::nodal {

namespace {

constexpr double kPi = std::numbers::pi;

struct Dsu {
  std::vector<int32_t> parent;
  explicit Dsu(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = int32_t(i);
  }
  int32_t find(int32_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(int32_t a, int32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[b] = a;
  }
};

double col_span(const geom::QuadGrid& g) {
  return g.surface == geom::Surface::Torus ? 1.0 : 2.0 * kPi;
}

// Chart coordinate of row/col index, one past the end wraps by the period.
double row_coord(const geom::QuadGrid& g, int i) {
  return i < g.nrow ? g.row[i] : g.row[0] + 1.0;  // only the torus wraps rows
}
double col_coord(const geom::QuadGrid& g, int j) {
  return j < g.ncol ? g.col[j] : g.col[0] + col_span(g);
}

// Metric scale of one grid step, used for detection tolerances.
double chart_step(const geom::QuadGrid& g) {
  return (g.surface == geom::Surface::Sphere ? kPi : 1.0) / g.nrow;
}

struct Crossing {
  geom::Point p;
  int32_t adj[2] = {-1, -1};
  int deg = 0;
};

// Marching squares over the grid. Saddle cells (both diagonals positive)
// connect around the corner pair that matches the sign of the cell-centre
// bilinear value.
struct Extraction {
  const geom::QuadGrid& g;
  const std::vector<double>& v;
  std::vector<int32_t> hx, vx;  // crossing id per horizontal/vertical edge
  std::vector<Crossing> cross;

  Extraction(const geom::QuadGrid& grid, const std::vector<double>& val)
      : g(grid), v(val), hx(grid.size(), -1), vx(grid.size(), -1) {}

  int32_t edge_crossing(bool horizontal, int i, int j) {
    auto& slot = (horizontal ? hx : vx)[g.idx(i, j)];
    if (slot >= 0) return slot;
    int i2 = horizontal ? i : (i + 1) % g.nrow;
    int j2 = horizontal ? (j + 1) % g.ncol : j;
    double va = v[g.idx(i, j)];
    double vb = v[g.idx(i2, j2)];
    double t = va / (va - vb);
    geom::Point p;
    if (horizontal) {
      p = {g.row[i], g.col[j] + t * (col_coord(g, j + 1) - g.col[j])};
    } else {
      p = {g.row[i] + t * (row_coord(g, i + 1) - g.row[i]), g.col[j]};
    }
    slot = int32_t(cross.size());
    cross.push_back({geom::canonical(g.surface, p), {-1, -1}, 0});
    return slot;
  }

  void link(int32_t a, int32_t b) {
    cross[a].adj[cross[a].deg++] = b;
    cross[b].adj[cross[b].deg++] = a;
  }

  void cell(int i, int j) {
    int in = (i + 1) % g.nrow, jn = (j + 1) % g.ncol;
    bool s00 = v[g.idx(i, j)] > 0.0;
    bool s01 = v[g.idx(i, jn)] > 0.0;
    bool s11 = v[g.idx(in, jn)] > 0.0;
    bool s10 = v[g.idx(in, j)] > 0.0;
    int code = int(s00) | int(s01) << 1 | int(s11) << 2 | int(s10) << 3;
    if (code == 0 || code == 15) return;
    auto B = [&] { return edge_crossing(true, i, j); };
    auto T = [&] { return edge_crossing(true, in, j); };
    auto L = [&] { return edge_crossing(false, i, j); };
    auto R = [&] { return edge_crossing(false, i, jn); };
    switch (code) {
      case 1: case 14: link(B(), L()); break;
      case 2: case 13: link(B(), R()); break;
      case 3: case 12: link(L(), R()); break;
      case 4: case 11: link(T(), R()); break;
      case 6: case 9: link(B(), T()); break;
      case 7: case 8: link(L(), T()); break;
      case 5: case 10: {
        double centre = 0.25 * (v[g.idx(i, j)] + v[g.idx(i, jn)] +
                                v[g.idx(in, jn)] + v[g.idx(in, j)]);
        bool diag00 = (code == 5);  // positive corners on the 00-11 diagonal
        if ((centre > 0.0) == diag00) {
          link(B(), R());
          link(T(), L());
        } else {
          link(B(), L());
          link(T(), R());
        }
        break;
      }
      default: break;
    }
  }
};

Polyline walk_chain(const Extraction& ex, std::vector<char>& used,
                    int32_t start) {
  Polyline line;
  int32_t prev = -1, cur = start;
  while (true) {
    used[cur] = 1;
    line.pts.push_back(ex.cross[cur].p);
    const Crossing& c = ex.cross[cur];
    int32_t next = (c.adj[0] != prev) ? c.adj[0] : c.adj[1];
    if (next < 0) break;
    if (next == start) {
      line.closed = true;
      break;
    }
    prev = cur;
    cur = next;
  }
  const auto s = ex.g.surface;
  for (std::size_t k = 0; k + 1 < line.pts.size(); ++k)
    line.length += geom::distance(s, line.pts[k], line.pts[k + 1]);
  if (line.closed && line.pts.size() > 2)
    line.length += geom::distance(s, line.pts.back(), line.pts.front());
  return line;
}

CurveSet extract_from_values(const geom::QuadGrid& g,
                             const std::vector<double>& v) {
  Extraction ex(g, v);
  int ib_end = g.row_periodic ? g.nrow : g.nrow - 1;
  int jb_end = g.col_periodic ? g.ncol : g.ncol - 1;
  for (int i = 0; i < ib_end; ++i)
    for (int j = 0; j < jb_end; ++j) ex.cell(i, j);

  CurveSet out;
  std::vector<char> used(ex.cross.size(), 0);
  for (std::size_t c = 0; c < ex.cross.size(); ++c)
    if (!used[c] && ex.cross[c].deg == 1)
      out.curves.push_back(walk_chain(ex, used, int32_t(c)));
  for (std::size_t c = 0; c < ex.cross.size(); ++c)
    if (!used[c] && ex.cross[c].deg == 2)
      out.curves.push_back(walk_chain(ex, used, int32_t(c)));
  for (const auto& pl : out.curves) out.total_length += pl.length;
  return out;
}

void nudge_zeros(std::vector<double>& v, double scale) {
  double eps = 1e-14 * (scale > 0.0 ? scale : 1.0);
  for (double& x : v)
    if (x == 0.0) x = eps;
}

// vec3 helpers for sphere work
using V3 = std::array<double, 3>;
double dot3(const V3& a, const V3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
V3 cross3(const V3& a, const V3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}
V3 scale3(const V3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
V3 add3(const V3& a, const V3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
double norm3(const V3& a) { return std::sqrt(dot3(a, a)); }
V3 normalize3(const V3& a) { return scale3(a, 1.0 / norm3(a)); }

// Orthonormal tangent frame at a sphere point.
void sphere_frame(const V3& x, V3& e1, V3& e2) {
  V3 up = std::abs(x[2]) < 0.9 ? V3{0.0, 0.0, 1.0} : V3{1.0, 0.0, 0.0};
  e1 = normalize3(cross3(up, x));
  e2 = cross3(x, e1);
}

geom::Point sphere_exp(const V3& x, const V3& e1, const V3& e2, double u,
                       double v) {
  double rho = std::hypot(u, v);
  if (rho < 1e-300) return geom::sphere_chart(x);
  V3 dir = add3(scale3(e1, u / rho), scale3(e2, v / rho));
  return geom::sphere_chart(
      add3(scale3(x, std::cos(rho)), scale3(dir, std::sin(rho))));
}

// Point at geodesic distance r from centre in tangent direction alpha.
geom::Point offset_point(geom::Surface s, geom::Point c, double alpha,
                         double r) {
  if (s == geom::Surface::Torus)
    return geom::canonical(
        s, {c.a + r * std::cos(alpha), c.b + r * std::sin(alpha)});
  if (s == geom::Surface::Sphere) {
    V3 x = geom::sphere_embed(c), e1, e2;
    sphere_frame(x, e1, e2);
    return sphere_exp(x, e1, e2, r * std::cos(alpha), r * std::sin(alpha));
  }
  throw std::invalid_argument("offset_point: torus and sphere only");
}

double sign_changes_on_ring(const spectra::EigenFn& fn, geom::Point c,
                            double r, int samples) {
  std::vector<int> s(samples);
  for (int k = 0; k < samples; ++k) {
    double val =
        spectra::eval(fn, offset_point(fn.surface, c, 2.0 * kPi * (k + 0.37) / samples, r));
    s[k] = val > 0.0 ? 1 : -1;
  }
  int changes = 0;
  for (int k = 0; k < samples; ++k) changes += s[k] != s[(k + 1) % samples];
  return changes;
}

}  // namespace

GridField make_field(const spectra::EigenFn& fn, const geom::QuadGrid& grid) {
  GridField f;
  f.grid = grid;
  f.value = spectra::sample_grid(fn, grid);
  f.lambda = fn.lambda;
  f.max_abs = 0.0;
  for (double x : f.value) f.max_abs = std::max(f.max_abs, std::abs(x));
  nudge_zeros(f.value, f.max_abs);
  return f;
}

GridField make_field_values(geom::QuadGrid grid, std::vector<double> values,
                            double lambda) {
  if (values.size() != grid.size())
    throw std::invalid_argument("make_field_values: size mismatch");
  GridField f;
  f.grid = std::move(grid);
  f.value = std::move(values);
  f.lambda = lambda;
  f.max_abs = 0.0;
  for (double x : f.value) f.max_abs = std::max(f.max_abs, std::abs(x));
  nudge_zeros(f.value, f.max_abs);
  return f;
}

CurveSet extract_nodal(const GridField& f) {
  return extract_from_values(f.grid, f.value);
}

CurveSet extract_level(const GridField& f, double c) {
  std::vector<double> shifted(f.value.size());
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] = f.value[i] - c;
  nudge_zeros(shifted, f.max_abs + std::abs(c));
  return extract_from_values(f.grid, shifted);
}

double integrate_over_curves(geom::Surface s, const CurveSet& cs,
                             const std::function<double(geom::Point)>& density) {
  double total = 0.0;
  double period = (s == geom::Surface::Torus) ? 1.0 : 2.0 * kPi;
  auto segment = [&](geom::Point a, geom::Point b) {
    double len = geom::distance(s, a, b);
    if (len == 0.0) return;
    // wrap-aware chart midpoint
    double db = b.b - a.b;
    db -= period * std::round(db / period);
    double da = b.a - a.a;
    if (s == geom::Surface::Torus) da -= std::round(da);
    geom::Point mid =
        geom::canonical(s, {a.a + 0.5 * da, a.b + 0.5 * db});
    total += len * density(mid);
  };
  for (const auto& pl : cs.curves) {
    for (std::size_t k = 0; k + 1 < pl.pts.size(); ++k)
      segment(pl.pts[k], pl.pts[k + 1]);
    if (pl.closed && pl.pts.size() > 2) segment(pl.pts.back(), pl.pts.front());
  }
  return total;
}

Domains count_domains(const GridField& f) {
  const geom::QuadGrid& g = f.grid;
  const std::size_t n = g.size();
  Dsu dsu(n);
  for (int i = 0; i < g.nrow; ++i) {
    for (int j = 0; j < g.ncol; ++j) {
      std::size_t a = g.idx(i, j);
      bool sa = f.value[a] > 0.0;
      if (j + 1 < g.ncol || g.col_periodic) {
        std::size_t b = g.idx(i, (j + 1) % g.ncol);
        if (sa == (f.value[b] > 0.0)) dsu.unite(int32_t(a), int32_t(b));
      }
      if (i + 1 < g.nrow || g.row_periodic) {
        std::size_t b = g.idx((i + 1) % g.nrow, j);
        if (sa == (f.value[b] > 0.0)) dsu.unite(int32_t(a), int32_t(b));
      }
    }
  }
  Domains out;
  out.label.assign(n, -1);
  std::vector<int32_t> root_label(n, -1);
  for (std::size_t k = 0; k < n; ++k) {
    int32_t r = dsu.find(int32_t(k));
    if (root_label[r] < 0) {
      root_label[r] = out.count++;
      out.area.push_back(0.0);
      out.sign.push_back(f.value[r] > 0.0 ? 1 : -1);
    }
    out.label[k] = root_label[r];
    out.area[root_label[r]] += g.weight[k];
  }
  return out;
}

InnerRadiusReport faber_krahn_check(const GridField& f) {
  if (!(f.lambda > 0.0))
    throw std::invalid_argument("faber_krahn_check: lambda must be positive");
  static const double j01 = spectra::bessel_zeros(0, 1)[0];
  Domains d = count_domains(f);
  InnerRadiusReport rep;
  rep.domains = d.count;
  rep.bound = kPi * j01 * j01 / (f.lambda * f.lambda);
  rep.min_area = *std::min_element(d.area.begin(), d.area.end());
  rep.min_margin_rel = rep.min_area / rep.bound - 1.0;
  for (double a : d.area)
    rep.min_margin_rel = std::min(rep.min_margin_rel, a / rep.bound - 1.0);
  return rep;
}

namespace {

// ---- embedded graph machinery ----

struct Vertex {
  geom::Point p;
  int deg = 0;
  bool on_gamma = false;
};

struct GammaGeometry {
  geom::Surface s;
  // torus: line through x0 with unit normal nrm2, parallel copies every `spacing`
  geom::Point x0;
  std::array<double, 2> nrm2{0.0, 0.0};
  double spacing = 0.0;
  // sphere: plane normal of the great circle
  V3 nrm3{0.0, 0.0, 0.0};

  double dist(geom::Point p) const {
    if (s == geom::Surface::Torus) {
      double w = (p.a - x0.a) * nrm2[0] + (p.b - x0.b) * nrm2[1];
      w -= spacing * std::round(w / spacing);
      return std::abs(w);
    }
    double c = std::clamp(dot3(geom::sphere_embed(p), nrm3), -1.0, 1.0);
    return std::abs(std::asin(c));
  }

  // side function whose sign flips exactly across gamma
  double side(geom::Point p) const {
    double w;
    if (s == geom::Surface::Torus) {
      w = (p.a - x0.a) * nrm2[0] + (p.b - x0.b) * nrm2[1];
      w -= spacing * std::round(w / spacing);
    } else {
      w = dot3(geom::sphere_embed(p), nrm3);
    }
    return w == 0.0 ? 1e-30 : w;
  }

  bool edge_crosses(geom::Point a, geom::Point b) const {
    double wa = side(a), wb = side(b);
    if (s == geom::Surface::Torus && std::abs(wa - wb) > 0.5 * spacing)
      return false;  // the two nodes straddle the wrap seam, not the line
    return wa * wb < 0.0;
  }
};

GammaGeometry gamma_geometry(const geom::GeodesicSegment& g) {
  GammaGeometry gg;
  gg.s = g.surface;
  if (g.surface == geom::Surface::Torus) {
    gg.x0 = g.base;
    gg.nrm2 = {-g.dir[1], g.dir[0]};
    int best_k = 0;
    for (int k = 1; k <= int(g.length + 0.5); ++k) {
      double t = g.length / k;
      double ax = t * g.dir[0], ay = t * g.dir[1];
      if (std::abs(ax - std::round(ax)) < 1e-9 * g.length &&
          std::abs(ay - std::round(ay)) < 1e-9 * g.length)
        best_k = k;
    }
    if (best_k == 0)
      throw std::invalid_argument("euler_graph: gamma is not a closed torus geodesic");
    gg.spacing = 1.0 / (g.length / best_k);
  } else {
    gg.nrm3 = normalize3(cross3(g.fp, g.ft));
  }
  return gg;
}

enum class ParityKind { Even, Odd };

ParityKind detect_parity(const spectra::EigenFn& fn,
                         const geom::GeodesicSegment& g) {
  std::mt19937_64 rng(0x5bd1e995u);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double scale = 0.0, d_even = 0.0, d_odd = 0.0;
  for (int k = 0; k < 48; ++k) {
    geom::Point p;
    geom::Point rp;
    if (fn.surface == geom::Surface::Torus) {
      p = {uni(rng), uni(rng)};
      double ra = p.a - g.base.a, rb = p.b - g.base.b;
      double t = ra * g.dir[0] + rb * g.dir[1];
      rp = geom::canonical(fn.surface,
                           {g.base.a + 2.0 * t * g.dir[0] - ra,
                            g.base.b + 2.0 * t * g.dir[1] - rb});
    } else {
      p = {std::acos(std::clamp(1.0 - 2.0 * uni(rng), -1.0, 1.0)),
           2.0 * kPi * uni(rng)};
      V3 n = normalize3(cross3(g.fp, g.ft));
      V3 x = geom::sphere_embed(p);
      rp = geom::sphere_chart(add3(x, scale3(n, -2.0 * dot3(x, n))));
    }
    double v = spectra::eval(fn, p);
    double w = spectra::eval(fn, rp);
    scale = std::max({scale, std::abs(v), std::abs(w)});
    d_even = std::max(d_even, std::abs(w - v));
    d_odd = std::max(d_odd, std::abs(w + v));
  }
  if (scale <= 0.0)
    throw std::invalid_argument("euler_graph: function vanishes on samples");
  bool even = d_even <= 1e-8 * scale;
  bool odd = d_odd <= 1e-8 * scale;
  if (even == odd)
    throw std::invalid_argument(
        "euler_graph: function has no definite parity across gamma");
  return even ? ParityKind::Even : ParityKind::Odd;
}

// chart gradient (d/da, d/db), converting the orthonormal-frame theta
// component back to a coordinate derivative
std::array<double, 2> chart_grad(const spectra::EigenFn& fn, geom::Point p) {
  auto g = spectra::grad(fn, p);
  if (fn.surface == geom::Surface::Sphere) g[1] *= std::sin(p.a);
  return g;
}

geom::Point clamp_chart(geom::Surface s, geom::Point p) {
  if (s == geom::Surface::Sphere)
    p.a = std::clamp(p.a, 1e-7, kPi - 1e-7);
  return geom::canonical(s, p);
}

// Newton iteration for grad f = 0 from a saddle-pattern cell; the Hessian is
// a central difference of the spectral gradient.
bool refine_critical_zero(const spectra::EigenFn& fn, geom::Point start,
                          double cell_diag, double f_tol, double g_tol,
                          geom::Point& out) {
  geom::Point p = clamp_chart(fn.surface, start);
  double step = 1e-4 / std::max(1.0, fn.lambda);
  for (int it = 0; it < 30; ++it) {
    auto gr = chart_grad(fn, p);
    double gn = std::hypot(gr[0], gr[1]);
    auto gpa = chart_grad(fn, clamp_chart(fn.surface, {p.a + step, p.b}));
    auto gma = chart_grad(fn, clamp_chart(fn.surface, {p.a - step, p.b}));
    auto gpb = chart_grad(fn, clamp_chart(fn.surface, {p.a, p.b + step}));
    auto gmb = chart_grad(fn, clamp_chart(fn.surface, {p.a, p.b - step}));
    double h00 = (gpa[0] - gma[0]) / (2 * step);
    double h10 = (gpa[1] - gma[1]) / (2 * step);
    double h01 = (gpb[0] - gmb[0]) / (2 * step);
    double h11 = (gpb[1] - gmb[1]) / (2 * step);
    double h01s = 0.5 * (h01 + h10);
    double det = h00 * h11 - h01s * h01s;
    if (std::abs(det) < 1e-14 * (std::abs(h00) + std::abs(h11) + 1e-300))
      return false;
    double da = -(h11 * gr[0] - h01s * gr[1]) / det;
    double db = -(-h01s * gr[0] + h00 * gr[1]) / det;
    double dn = std::hypot(da, db);
    if (dn > 2.0 * cell_diag) {
      da *= 2.0 * cell_diag / dn;
      db *= 2.0 * cell_diag / dn;
    }
    p = clamp_chart(fn.surface, {p.a + da, p.b + db});
    if (gn <= 0.01 * g_tol && dn <= 1e-12) break;
  }
  auto gr = chart_grad(fn, p);
  if (std::abs(spectra::eval(fn, p)) > f_tol) return false;
  if (std::hypot(gr[0], gr[1]) > g_tol) return false;
  out = p;
  return true;
}

struct CellMarks {
  int nbr = 0, nbc = 0;
  std::vector<uint8_t> kind;  // 1 = sign-mixed, 2 = crossed by gamma
  int cell_index(int bi, int bj) const { return bi * nbc + bj; }
};

// band of the cell containing chart point p; returns false inside a sphere
// polar cap (which no cell covers)
bool locate_cell(const geom::QuadGrid& g, geom::Point p, int& bi, int& bj) {
  p = geom::canonical(g.surface, p);
  if (g.surface == geom::Surface::Torus) {
    bi = std::min(int(p.a * g.nrow), g.nrow - 1);
  } else {
    if (p.a < g.row.front() || p.a > g.row.back()) return false;
    bi = int(std::upper_bound(g.row.begin(), g.row.end(), p.a) -
             g.row.begin()) - 1;
    bi = std::clamp(bi, 0, g.nrow - 2);
  }
  double span = col_span(g);
  bj = int(std::fmod(p.b - g.col[0] + span, span) / (span / g.ncol));
  bj = std::clamp(bj, 0, g.ncol - 1);
  return true;
}

}  // namespace

NodalGraph euler_graph(const spectra::EigenFn& fn,
                       const geom::GeodesicSegment& gamma, int resolution) {
  if (fn.surface != geom::Surface::Torus &&
      fn.surface != geom::Surface::Sphere)
    throw std::invalid_argument("euler_graph: torus and sphere only");
  if (fn.surface != gamma.surface)
    throw std::invalid_argument("euler_graph: surface mismatch");
  if (!gamma.closed)
    throw std::invalid_argument("euler_graph: gamma must be closed");
  if (!(fn.lambda > 0.0))
    throw std::invalid_argument("euler_graph: constant functions have no graph");

  const ParityKind parity = detect_parity(fn, gamma);
  const GammaGeometry gg = gamma_geometry(gamma);
  const geom::QuadGrid grid = geom::quadrature_grid(fn.surface, resolution);
  const GridField field = make_field(fn, grid);
  const double hm = chart_step(grid);
  const double f_tol = 1e-6 * field.max_abs;
  const double g_tol = 1e-4 * std::max(fn.lambda, 1.0) * field.max_abs;
  const bool sphere = fn.surface == geom::Surface::Sphere;

  if (gg.s == geom::Surface::Torus && gg.spacing < 6.0 * hm)
    throw std::invalid_argument("euler_graph: grid too coarse for gamma spacing");

  // ---- vertices: singular zeros of fn ----
  std::vector<Vertex> verts;
  auto near_vertex = [&](geom::Point p, double r) {
    for (const auto& vx : verts)
      if (geom::distance(fn.surface, p, vx.p) <= r) return true;
    return false;
  };

  // grid nodes where both |f| and |grad f| are tiny, clustered by proximity
  for (int i = 0; i < grid.nrow; ++i) {
    for (int j = 0; j < grid.ncol; ++j) {
      if (std::abs(field.value[grid.idx(i, j)]) > f_tol) continue;
      geom::Point p = grid.point(i, j);
      auto gr = spectra::grad(fn, p);
      if (std::hypot(gr[0], gr[1]) > g_tol) continue;
      if (!near_vertex(p, 3.0 * hm)) verts.push_back({p, 0, false});
    }
  }
  // saddle-pattern cells, polished by Newton on grad f = 0
  {
    int jb_end = grid.col_periodic ? grid.ncol : grid.ncol - 1;
    int ib_end = grid.row_periodic ? grid.nrow : grid.nrow - 1;
    for (int i = 0; i < ib_end; ++i) {
      for (int j = 0; j < jb_end; ++j) {
        int in = (i + 1) % grid.nrow, jn = (j + 1) % grid.ncol;
        bool s00 = field.value[grid.idx(i, j)] > 0.0;
        bool s01 = field.value[grid.idx(i, jn)] > 0.0;
        bool s11 = field.value[grid.idx(in, jn)] > 0.0;
        bool s10 = field.value[grid.idx(in, j)] > 0.0;
        if (s00 != s11 || s01 != s10 || s00 == s01) continue;
        geom::Point centre{0.5 * (grid.row[i] + row_coord(grid, i + 1)),
                           0.5 * (grid.col[j] + col_coord(grid, j + 1))};
        geom::Point zp;
        if (refine_critical_zero(fn, centre, 2.0 * hm, 0.1 * f_tol,
                                 0.01 * g_tol, zp) &&
            !near_vertex(zp, 3.0 * hm))
          verts.push_back({zp, 0, false});
      }
    }
  }
  // sphere poles are not grid nodes; test them directly
  if (sphere) {
    for (geom::Point pole : {geom::Point{0.0, 0.0}, geom::Point{kPi, 0.0}}) {
      if (std::abs(spectra::eval(fn, pole)) > f_tol) continue;
      auto gr = spectra::grad(fn, pole);
      if (std::hypot(gr[0], gr[1]) > g_tol) continue;
      if (!near_vertex(pole, 3.0 * hm)) verts.push_back({pole, 0, false});
    }
  }
  // a zero of order k has |f| and |grad f| below tolerance out to several
  // grid steps, so the scan admits satellite candidates around it; keep the
  // best-conditioned point of each cluster
  {
    std::vector<std::pair<double, Vertex>> ranked;
    ranked.reserve(verts.size());
    for (const auto& vx : verts) {
      auto gr = spectra::grad(fn, vx.p);
      ranked.emplace_back(std::hypot(gr[0], gr[1]), vx);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    verts.clear();
    for (const auto& rv : ranked) {
      if (!near_vertex(rv.second.p, 6.0 * hm)) verts.push_back(rv.second);
    }
  }
  for (auto& vx : verts) {
    vx.deg = int(sign_changes_on_ring(fn, vx.p, 4.0 * hm, 512));
    vx.on_gamma = gg.dist(vx.p) <= 4.0 * hm;
  }
  // A branch point of the zero set emits at least four rays (an order-k zero
  // emits 2k). Ring degree <= 2 marks a regular curve point, or a near-zero
  // dip, that slipped through the tolerance scan; it is not a graph vertex.
  std::erase_if(verts, [](const Vertex& vx) { return vx.deg <= 2; });

  // ---- transversal crossings of the zero set with gamma (even case) ----
  std::vector<geom::Point> crossings;
  int k_samples =
      std::max(2048, int(32.0 * fn.lambda * gamma.length / (2.0 * kPi)));
  std::vector<double> gvals(k_samples);
  std::vector<geom::Point> gpts(k_samples);
  for (int k = 0; k < k_samples; ++k) {
    double t = (k + 0.5) * gamma.length / k_samples;
    gpts[k] = geom::geodesic_point(gamma, t);
    gvals[k] = spectra::eval(fn, gpts[k]);
  }
  if (parity == ParityKind::Even) {
    for (int k = 0; k < k_samples; ++k) {
      int k2 = (k + 1) % k_samples;
      double va = gvals[k] == 0.0 ? 1e-300 : gvals[k];
      double vb = gvals[k2] == 0.0 ? 1e-300 : gvals[k2];
      if (va * vb >= 0.0) continue;
      double ta = (k + 0.5) * gamma.length / k_samples;
      double tb = ta + gamma.length / k_samples;
      for (int it = 0; it < 60; ++it) {
        double tm = 0.5 * (ta + tb);
        double vm = spectra::eval(
            fn, geom::geodesic_point(gamma, std::fmod(tm, gamma.length)));
        if (vm == 0.0) vm = 1e-300;
        if (vm * va < 0.0) tb = tm; else { ta = tm; va = vm; }
      }
      geom::Point cp =
          geom::geodesic_point(gamma, std::fmod(0.5 * (ta + tb), gamma.length));
      bool dup = near_vertex(cp, 4.0 * hm);
      for (const auto& q : crossings)
        dup = dup || geom::distance(fn.surface, cp, q) <= 0.5 * hm;
      if (!dup) crossings.push_back(cp);
    }
  }

  // ---- connected components of the graph, on the cell level ----
  CellMarks cm;
  cm.nbr = grid.row_periodic ? grid.nrow : grid.nrow - 1;
  cm.nbc = grid.col_periodic ? grid.ncol : grid.ncol - 1;
  cm.kind.assign(std::size_t(cm.nbr) * cm.nbc, 0);
  for (int i = 0; i < cm.nbr; ++i) {
    for (int j = 0; j < cm.nbc; ++j) {
      int in = (i + 1) % grid.nrow, jn = (j + 1) % grid.ncol;
      bool s00 = field.value[grid.idx(i, j)] > 0.0;
      bool same = s00 == (field.value[grid.idx(i, jn)] > 0.0) &&
                  s00 == (field.value[grid.idx(in, jn)] > 0.0) &&
                  s00 == (field.value[grid.idx(in, j)] > 0.0);
      if (!same) cm.kind[cm.cell_index(i, j)] |= 1;
    }
  }
  Dsu cells(cm.kind.size());
  bool include_gamma = parity == ParityKind::Even;
  int prev_gcell = -1, first_gcell = -1;
  bool north_cap_gamma = false, south_cap_gamma = false;
  if (include_gamma) {
    for (int k = 0; k < k_samples; ++k) {
      int bi, bj;
      if (!locate_cell(grid, gpts[k], bi, bj)) {
        if (gpts[k].a < grid.row.front()) north_cap_gamma = true;
        else south_cap_gamma = true;
        continue;
      }
      int c = cm.cell_index(std::min(bi, cm.nbr - 1), bj);
      cm.kind[c] |= 2;
      if (prev_gcell >= 0) cells.unite(prev_gcell, c);
      if (first_gcell < 0) first_gcell = c;
      prev_gcell = c;
    }
    if (prev_gcell >= 0 && first_gcell >= 0) cells.unite(prev_gcell, first_gcell);
  }
  for (int i = 0; i < cm.nbr; ++i) {
    for (int j = 0; j < cm.nbc; ++j) {
      int c = cm.cell_index(i, j);
      if (!cm.kind[c]) continue;
      int jr = (j + 1) % cm.nbc;
      if ((j + 1 < cm.nbc || grid.col_periodic) && cm.kind[cm.cell_index(i, jr)])
        cells.unite(c, cm.cell_index(i, jr));
      int ir = (i + 1) % cm.nbr;
      if ((i + 1 < cm.nbr || grid.row_periodic) && cm.kind[cm.cell_index(ir, j)])
        cells.unite(c, cm.cell_index(ir, j));
    }
  }
  // polar caps: everything that crosses the first/last node ring meets near
  // the pole, which no cell covers
  int north_rep = -1, south_rep = -1;
  if (sphere) {
    for (int j = 0; j < grid.ncol; ++j) {
      int jn = (j + 1) % grid.ncol;
      if ((field.value[grid.idx(0, j)] > 0.0) !=
          (field.value[grid.idx(0, jn)] > 0.0)) {
        int c = cm.cell_index(0, j);
        if (north_rep < 0) north_rep = c;
        cells.unite(north_rep, c);
      }
      if ((field.value[grid.idx(grid.nrow - 1, j)] > 0.0) !=
          (field.value[grid.idx(grid.nrow - 1, jn)] > 0.0)) {
        int c = cm.cell_index(cm.nbr - 1, j);
        if (south_rep < 0) south_rep = c;
        cells.unite(south_rep, c);
      }
    }
    if (north_cap_gamma && prev_gcell >= 0 && north_rep >= 0)
      cells.unite(north_rep, prev_gcell);
    if (south_cap_gamma && prev_gcell >= 0 && south_rep >= 0)
      cells.unite(south_rep, prev_gcell);
  }

  // vertices weld their incident cells together
  auto weld = [&](geom::Point p) {
    int bi, bj;
    if (!locate_cell(grid, p, bi, bj)) {
      return;  // pole vertex, handled by the cap stitch
    }
    bi = std::min(bi, cm.nbr - 1);
    int first = -1;
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        int ii = bi + di, jj = (bj + dj + cm.nbc) % cm.nbc;
        if (grid.row_periodic) ii = (ii + cm.nbr) % cm.nbr;
        if (ii < 0 || ii >= cm.nbr) continue;
        int c = cm.cell_index(ii, jj);
        if (!cm.kind[c]) continue;
        if (first < 0) first = c;
        cells.unite(first, c);
      }
    }
  };
  for (const auto& vx : verts) weld(vx.p);
  for (const auto& cp : crossings) weld(cp);

  // component census and which components own a vertex
  std::vector<int32_t> comp_root;
  std::vector<char> comp_has_vertex;
  auto comp_of = [&](int32_t root) {
    for (std::size_t k = 0; k < comp_root.size(); ++k)
      if (comp_root[k] == root) return int(k);
    comp_root.push_back(root);
    comp_has_vertex.push_back(0);
    return int(comp_root.size()) - 1;
  };
  for (std::size_t c = 0; c < cm.kind.size(); ++c)
    if (cm.kind[c]) comp_of(cells.find(int32_t(c)));
  auto flag_vertex_comp = [&](geom::Point p) {
    int bi, bj;
    bool in_cells = locate_cell(grid, p, bi, bj);
    if (!in_cells) {
      int rep = p.a < kPi / 2 ? north_rep : south_rep;
      if (rep >= 0) comp_has_vertex[comp_of(cells.find(rep))] = 1;
      return;
    }
    bi = std::min(bi, cm.nbr - 1);
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        int ii = bi + di, jj = (bj + dj + cm.nbc) % cm.nbc;
        if (grid.row_periodic) ii = (ii + cm.nbr) % cm.nbr;
        if (ii < 0 || ii >= cm.nbr) continue;
        int c = cm.cell_index(ii, jj);
        if (cm.kind[c]) comp_has_vertex[comp_of(cells.find(c))] = 1;
      }
    }
  };
  for (const auto& vx : verts) flag_vertex_comp(vx.p);
  for (const auto& cp : crossings) flag_vertex_comp(cp);

  int m_components = int(comp_root.size());
  int n_free = 0;
  for (char h : comp_has_vertex) n_free += h == 0;

  // ---- faces: complement components, cut by gamma in the even case ----
  int faces;
  {
    Dsu fdsu(grid.size());
    for (int i = 0; i < grid.nrow; ++i) {
      for (int j = 0; j < grid.ncol; ++j) {
        std::size_t a = grid.idx(i, j);
        bool sa = field.value[a] > 0.0;
        auto try_unite = [&](int i2, int j2) {
          std::size_t b = grid.idx(i2, j2);
          if (sa != (field.value[b] > 0.0)) return;
          if (include_gamma &&
              gg.edge_crosses(grid.point(i, j), grid.point(i2, j2)))
            return;
          fdsu.unite(int32_t(a), int32_t(b));
        };
        if (j + 1 < grid.ncol || grid.col_periodic) try_unite(i, (j + 1) % grid.ncol);
        if (i + 1 < grid.nrow || grid.row_periodic) try_unite((i + 1) % grid.nrow, j);
      }
    }
    std::vector<char> seen(grid.size(), 0);
    faces = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      int32_t r = fdsu.find(int32_t(k));
      if (!seen[r]) {
        seen[r] = 1;
        ++faces;
      }
    }
  }

  // ---- assemble counts ----
  NodalGraph out;
  out.odd = parity == ParityKind::Odd;
  out.genus = geom::genus(fn.surface);
  int deg_sum = 0, n_sing_on_gamma = 0;
  for (const auto& vx : verts) {
    deg_sum += vx.deg;
    n_sing_on_gamma += vx.on_gamma ? 1 : 0;
  }
  deg_sum += 2 * int(crossings.size());
  if (deg_sum % 2 != 0)
    throw std::runtime_error("euler_graph: odd branch degree sum, under-resolved");

  out.v = int(verts.size()) + int(crossings.size()) + n_free;
  out.e = deg_sum / 2 + n_free;
  if (include_gamma) {
    int on_gamma = int(crossings.size()) + n_sing_on_gamma;
    if (on_gamma > 0) out.e += on_gamma;
    // a vertex-free gamma was already counted as a free circle
  }
  out.f = faces;
  out.m = m_components;
  out.n_gamma = out.odd ? n_sing_on_gamma
                        : int(crossings.size()) + n_sing_on_gamma;
  out.euler_lhs = out.v - out.e + out.f - out.m;
  if (out.odd) {
    out.formula_bound = out.n_gamma + 2 - 2 * out.genus;
    out.face_bound = out.f;
  } else {
    out.formula_bound = (out.n_gamma + 1) / 2 + 1 - out.genus;
    out.face_bound = (out.f + 1) / 2;
  }
  return out;
}

namespace {

double max_probe_radius(geom::Surface s) {
  return s == geom::Surface::Sphere ? kPi : 0.5 * std::numbers::sqrt2;
}

geom::Point random_point(geom::Surface s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  if (s == geom::Surface::Torus) return {uni(rng), uni(rng)};
  return {std::acos(std::clamp(1.0 - 2.0 * uni(rng), -1.0, 1.0)),
          2.0 * kPi * uni(rng)};
}

// Smallest radius around `c` at which a sampled direction changes sign,
// coarse march then bisection; r_max caps the search.
double first_sign_change_radius(const spectra::EigenFn& fn, geom::Point c,
                                double r_max) {
  double f0 = spectra::eval(fn, c);
  if (f0 == 0.0) return 0.0;
  const int ndir = 32;
  const double dr = std::min(0.2 / std::max(fn.lambda, 1.0), r_max / 4.0);
  std::vector<double> alpha(ndir);
  for (int d = 0; d < ndir; ++d) alpha[d] = 2.0 * kPi * (d + 0.13) / ndir;
  for (double r = dr; r - dr < r_max; r += dr) {
    double rr = std::min(r, r_max);
    double best = -1.0;
    for (int d = 0; d < ndir; ++d) {
      double v = spectra::eval(fn, offset_point(fn.surface, c, alpha[d], rr));
      if (v * f0 < 0.0) {
        double lo = std::max(rr - dr, 0.0), hi = rr;
        for (int it = 0; it < 40; ++it) {
          double mid = 0.5 * (lo + hi);
          double vm =
              spectra::eval(fn, offset_point(fn.surface, c, alpha[d], mid));
          (vm * f0 < 0.0 ? hi : lo) = mid;
        }
        if (best < 0.0 || hi < best) best = hi;
      }
    }
    if (best >= 0.0) return best;
    if (rr >= r_max) break;
  }
  return -1.0;  // no sign change found up to r_max
}

}  // namespace

SmallBallReport small_ball_check(const spectra::EigenFn& fn, double a,
                                 int trials, uint64_t seed) {
  if (fn.surface == geom::Surface::Disc)
    throw std::invalid_argument("small_ball_check: torus and sphere only");
  if (!(fn.lambda > 0.0))
    throw std::invalid_argument("small_ball_check: lambda must be positive");
  std::mt19937_64 rng(seed);
  SmallBallReport rep;
  rep.trials = trials;
  rep.pass = true;
  double r_cap = std::min(a / fn.lambda, max_probe_radius(fn.surface));
  for (int t = 0; t < trials; ++t) {
    geom::Point c = random_point(fn.surface, rng);
    double r = first_sign_change_radius(fn, c, r_cap);
    double need = (r < 0.0 ? r_cap * (1.0 + 1e-9) : r) * fn.lambda;
    if (r < 0.0) rep.pass = false;
    if (need > rep.worst_need) {
      rep.worst_need = need;
      rep.worst_center = c;
    }
  }
  rep.pass = rep.pass && rep.worst_need <= a * (1.0 + 1e-12);
  return rep;
}

double calibrate_small_ball(const spectra::EigenFn& fn, int trials,
                            uint64_t seed) {
  if (fn.surface == geom::Surface::Disc)
    throw std::invalid_argument("calibrate_small_ball: torus and sphere only");
  if (!(fn.lambda > 0.0))
    throw std::invalid_argument("calibrate_small_ball: lambda must be positive");
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    geom::Point c = random_point(fn.surface, rng);
    double r = first_sign_change_radius(fn, c, max_probe_radius(fn.surface));
    if (r < 0.0)
      throw std::runtime_error("calibrate_small_ball: no sign change found");
    worst = std::max(worst, r * fn.lambda);
  }
  return worst;
}

LocalFit leading_polynomial_fit(const spectra::EigenFn& fn, geom::Point zero) {
  if (!(fn.lambda > 0.0))
    throw std::invalid_argument("leading_polynomial_fit: lambda must be positive");
  zero = geom::canonical(fn.surface, zero);

  // normal-coordinate chart at the base point
  V3 x0{0, 0, 0}, e1{0, 0, 0}, e2{0, 0, 0};
  double cx = 0.0, cy = 0.0;
  if (fn.surface == geom::Surface::Sphere) {
    x0 = geom::sphere_embed(zero);
    sphere_frame(x0, e1, e2);
  } else if (fn.surface == geom::Surface::Disc) {
    cx = zero.a * std::cos(zero.b);
    cy = zero.a * std::sin(zero.b);
  }
  auto at = [&](double u, double v) {
    switch (fn.surface) {
      case geom::Surface::Torus:
        return spectra::eval(
            fn, geom::canonical(fn.surface, {zero.a + u, zero.b + v}));
      case geom::Surface::Sphere:
        return spectra::eval(fn, sphere_exp(x0, e1, e2, u, v));
      case geom::Surface::Disc: {
        double px = cx + u, py = cy + v;
        double r = std::hypot(px, py);
        if (r > 1.0 - 1e-9)
          throw std::invalid_argument("leading_polynomial_fit: ball exits the disc");
        return spectra::eval(fn, {r, std::atan2(py, px)});
      }
    }
    throw std::logic_error("unreachable");
  };

  const double r0 = 0.25 / fn.lambda;
  const int na = 64;
  std::array<std::vector<double>, 3> ring;
  std::array<double, 3> rms{};
  double ring_max = 0.0;
  for (int m = 0; m < 3; ++m) {
    ring[m].resize(na);
    double rho = r0 / double(1 << m);
    double s2 = 0.0;
    for (int a = 0; a < na; ++a) {
      double al = 2.0 * kPi * (a + 0.5) / na;
      ring[m][a] = at(rho * std::cos(al), rho * std::sin(al));
      s2 += ring[m][a] * ring[m][a];
      ring_max = std::max(ring_max, std::abs(ring[m][a]));
    }
    rms[m] = std::sqrt(s2 / na);
  }
  double f_base = std::abs(at(0.0, 0.0));
  if (ring_max <= 0.0 || rms[2] < 1e-290)
    throw std::runtime_error("leading_polynomial_fit: field vanishes near point");
  if (f_base > 1e-6 * ring_max)
    throw std::invalid_argument("leading_polynomial_fit: point is not a zero");

  double k1 = std::log2(rms[0] / rms[1]);
  double k2 = std::log2(rms[1] / rms[2]);
  int k = int(std::lround(k2));
  if (k < 1 || k > 40 || std::abs(k2 - k) > 0.25 || std::abs(k1 - k) > 0.45)
    throw std::runtime_error("leading_polynomial_fit: vanishing order not resolved");

  // least-squares fit of the scaled homogeneous term on the finest ring
  const double rho = r0 / 4.0;
  const int nc = k + 1;
  std::vector<double> ata(std::size_t(nc) * nc, 0.0), atb(nc, 0.0);
  std::vector<double> basis(nc);
  for (int a = 0; a < na; ++a) {
    double al = 2.0 * kPi * (a + 0.5) / na;
    double ca = std::cos(al), sa = std::sin(al);
    for (int j = 0; j <= k; ++j)
      basis[j] = std::pow(ca, k - j) * std::pow(sa, j);
    for (int r = 0; r < nc; ++r) {
      atb[r] += basis[r] * ring[2][a];
      for (int c = 0; c < nc; ++c) ata[r * nc + c] += basis[r] * basis[c];
    }
  }
  // Gaussian elimination with partial pivoting
  for (int col = 0; col < nc; ++col) {
    int piv = col;
    for (int r = col + 1; r < nc; ++r)
      if (std::abs(ata[r * nc + col]) > std::abs(ata[piv * nc + col])) piv = r;
    for (int c = 0; c < nc; ++c) std::swap(ata[col * nc + c], ata[piv * nc + c]);
    std::swap(atb[col], atb[piv]);
    double d = ata[col * nc + col];
    if (std::abs(d) < 1e-200)
      throw std::runtime_error("leading_polynomial_fit: singular normal equations");
    for (int r = 0; r < nc; ++r) {
      if (r == col) continue;
      double f = ata[r * nc + col] / d;
      for (int c = col; c < nc; ++c) ata[r * nc + c] -= f * ata[col * nc + c];
      atb[r] -= f * atb[col];
    }
  }
  std::vector<double> chat(nc);
  for (int j = 0; j < nc; ++j) chat[j] = atb[j] / ata[j * nc + j];

  LocalFit fit;
  fit.order = k;
  fit.coeff.resize(nc);
  double descale = std::pow(rho, double(k));
  for (int j = 0; j < nc; ++j) fit.coeff[j] = chat[j] / descale;

  if (k >= 2) {
    double num = 0.0, den = 0.0;
    for (int j = 0; j < nc; ++j) den += chat[j] * chat[j];
    for (int i = 0; i + 2 <= k; ++i) {
      double d = chat[i] * double(k - i) * double(k - i - 1) +
                 chat[i + 2] * double(i + 2) * double(i + 1);
      num += d * d;
    }
    fit.laplacian_residual_rel =
        std::sqrt(num) / (double(k) * double(k - 1) * std::sqrt(den) + 1e-300);
  }
  return fit;
}

}  // namespace nlab::nodal
