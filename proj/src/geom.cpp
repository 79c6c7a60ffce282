#include "nlab/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace nlab::geom {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_unit(double x) { return x - std::floor(x); }

double wrap_2pi(double x) {
  double y = std::fmod(x, 2.0 * kPi);
  return y < 0.0 ? y + 2.0 * kPi : y;
}

}  // namespace

Surface parse_surface(const std::string& name) {
  if (name == "torus") return Surface::Torus;
  if (name == "sphere") return Surface::Sphere;
  if (name == "disc") return Surface::Disc;
  throw std::invalid_argument("unknown surface '" + name + "' (torus|sphere|disc)");
}

const char* surface_name(Surface s) {
  switch (s) {
    case Surface::Torus: return "torus";
    case Surface::Sphere: return "sphere";
    case Surface::Disc: return "disc";
  }
  return "?";
}

double surface_area(Surface s) {
  switch (s) {
    case Surface::Torus: return 1.0;
    case Surface::Sphere: return 4.0 * kPi;
    case Surface::Disc: return kPi;
  }
  return 0.0;
}

int genus(Surface s) { return s == Surface::Torus ? 1 : 0; }

Point canonical(Surface s, Point p) {
  switch (s) {
    case Surface::Torus:
      return {wrap_unit(p.a), wrap_unit(p.b)};
    case Surface::Sphere:
      if (p.a < -1e-12 || p.a > kPi + 1e-12)
        throw std::invalid_argument("sphere colatitude out of [0,pi]");
      return {std::clamp(p.a, 0.0, kPi), wrap_2pi(p.b)};
    case Surface::Disc:
      if (p.a < -1e-12 || p.a > 1.0 + 1e-12)
        throw std::invalid_argument("disc radius out of [0,1]");
      return {std::clamp(p.a, 0.0, 1.0), wrap_2pi(p.b)};
  }
  throw std::logic_error("bad surface");
}

std::array<double, 3> sphere_embed(Point p) {
  double sp = std::sin(p.a), cp = std::cos(p.a);
  return {sp * std::cos(p.b), sp * std::sin(p.b), cp};
}

Point sphere_chart(const std::array<double, 3>& v) {
  double phi = std::acos(std::clamp(v[2], -1.0, 1.0));
  double theta = std::atan2(v[1], v[0]);
  return {phi, theta < 0.0 ? theta + 2.0 * kPi : theta};
}

double distance(Surface s, Point p, Point q) {
  p = canonical(s, p);
  q = canonical(s, q);
  switch (s) {
    case Surface::Torus: {
      double dx = p.a - q.a; dx -= std::round(dx);
      double dy = p.b - q.b; dy -= std::round(dy);
      return std::hypot(dx, dy);
    }
    case Surface::Sphere: {
      auto u = sphere_embed(p), v = sphere_embed(q);
      double dotv = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
      std::array<double, 3> c = {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                                 u[0] * v[1] - u[1] * v[0]};
      double cn = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
      return std::atan2(cn, dotv);
    }
    case Surface::Disc: {
      double xa = p.a * std::cos(p.b), ya = p.a * std::sin(p.b);
      double xb = q.a * std::cos(q.b), yb = q.a * std::sin(q.b);
      return std::hypot(xa - xb, ya - yb);
    }
  }
  throw std::logic_error("bad surface");
}

GeodesicSegment torus_closed_geodesic(Point base, int p, int q, int loops) {
  if (p == 0 && q == 0) throw std::invalid_argument("torus geodesic direction must be nonzero");
  if (std::gcd(std::abs(p), std::abs(q)) != 1)
    throw std::invalid_argument("torus closed geodesic direction must be primitive");
  if (loops < 1) throw std::invalid_argument("loops must be >= 1");
  GeodesicSegment g;
  g.surface = Surface::Torus;
  g.base = canonical(Surface::Torus, base);
  double n = std::hypot(double(p), double(q));
  g.dir = {p / n, q / n};
  g.length = loops * n;
  g.closed = true;
  return g;
}

GeodesicSegment torus_segment(Point base, std::array<double, 2> dir, double length) {
  double n = std::hypot(dir[0], dir[1]);
  if (!(n > 0.0)) throw std::invalid_argument("torus segment direction must be nonzero");
  if (!(length > 0.0)) throw std::invalid_argument("torus segment length must be positive");
  GeodesicSegment g;
  g.surface = Surface::Torus;
  g.base = canonical(Surface::Torus, base);
  g.dir = {dir[0] / n, dir[1] / n};
  double ex = length * g.dir[0], ey = length * g.dir[1];
  g.length = length;
  g.closed = std::abs(ex - std::round(ex)) < 1e-10 && std::abs(ey - std::round(ey)) < 1e-10;
  return g;
}

GeodesicSegment sphere_great_circle(Point base, double azimuth, double length) {
  if (!(length > 0.0)) throw std::invalid_argument("great circle length must be positive");
  base = canonical(Surface::Sphere, base);
  GeodesicSegment g;
  g.surface = Surface::Sphere;
  g.base = base;
  g.dir = {std::cos(azimuth), std::sin(azimuth)};
  g.length = length;
  double sp = std::sin(base.a), cp = std::cos(base.a);
  double st = std::sin(base.b), ct = std::cos(base.b);
  std::array<double, 3> e_phi = {cp * ct, cp * st, -sp};
  std::array<double, 3> e_theta = {-st, ct, 0.0};
  g.fp = sphere_embed(base);
  for (int i = 0; i < 3; ++i) g.ft[i] = g.dir[0] * e_phi[i] + g.dir[1] * e_theta[i];
  double k = length / (2.0 * kPi);
  g.closed = std::abs(k - std::round(k)) < 1e-12 && std::round(k) >= 1.0;
  return g;
}

GeodesicSegment sphere_equator(double length) {
  return sphere_great_circle({kPi / 2.0, 0.0}, kPi / 2.0, length);
}

Point geodesic_point(const GeodesicSegment& g, double t) {
  if (t < -1e-9 || t > g.length + 1e-9)
    throw std::invalid_argument("geodesic parameter outside [0, length]");
  switch (g.surface) {
    case Surface::Torus:
      return canonical(Surface::Torus, {g.base.a + t * g.dir[0], g.base.b + t * g.dir[1]});
    case Surface::Sphere: {
      double c = std::cos(t), s = std::sin(t);
      return sphere_chart({c * g.fp[0] + s * g.ft[0], c * g.fp[1] + s * g.ft[1],
                           c * g.fp[2] + s * g.ft[2]});
    }
    case Surface::Disc:
      throw std::invalid_argument("disc geodesic flow is not supported");
  }
  throw std::logic_error("bad surface");
}

CxPoint complexified_geodesic_point(const GeodesicSegment& g, std::complex<double> w) {
  CxPoint out;
  out.surface = g.surface;
  switch (g.surface) {
    case Surface::Torus: {
      for (int i = 0; i < 2; ++i) {
        std::complex<double> zi = (i == 0 ? g.base.a : g.base.b) + w * g.dir[i];
        out.zeta[i] = {wrap_unit(zi.real()), zi.imag()};
      }
      return out;
    }
    case Surface::Sphere: {
      std::complex<double> c = std::cos(w), s = std::sin(w);
      for (int i = 0; i < 3; ++i) out.z[i] = c * g.fp[i] + s * g.ft[i];
      return out;
    }
    case Surface::Disc:
      throw std::invalid_argument("disc has no complexified geodesics");
  }
  throw std::logic_error("bad surface");
}

void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  int half = (n + 1) / 2;
  for (int k = 0; k < half; ++k) {
    double xi = std::cos(kPi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = xi;
      for (int j = 1; j < n; ++j) {
        double p2 = ((2.0 * j + 1.0) * xi * p1 - j * p0) / (j + 1.0);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      double step = p1 / dp;
      xi -= step;
      if (std::abs(step) < 1e-15) break;
    }
    double wk = 2.0 / ((1.0 - xi * xi) * dp * dp);
    x[n - 1 - k] = xi;
    x[k] = -xi;
    w[k] = w[n - 1 - k] = wk;
  }
  double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
  for (int k = 0; k < n; ++k) {
    x[k] = mid + hw * x[k];
    w[k] *= hw;
  }
}

QuadGrid quadrature_grid(Surface s, int resolution) {
  if (resolution < 8) throw std::invalid_argument("grid resolution must be >= 8");
  QuadGrid g;
  g.surface = s;
  switch (s) {
    case Surface::Torus: {
      g.nrow = g.ncol = resolution;
      g.row_periodic = g.col_periodic = true;
      g.h = 1.0 / resolution;
      g.row.resize(resolution);
      g.col.resize(resolution);
      for (int i = 0; i < resolution; ++i) g.row[i] = g.col[i] = double(i) / resolution;
      g.weight.assign(g.size(), 1.0 / (double(resolution) * resolution));
      return g;
    }
    case Surface::Sphere: {
      g.nrow = resolution;
      g.ncol = 2 * resolution + 1;
      g.col_periodic = true;
      g.h = kPi / resolution;
      std::vector<double> u, wu;
      gauss_legendre(resolution, -1.0, 1.0, u, wu);
      g.row.resize(g.nrow);
      std::vector<double> roww(g.nrow);
      for (int i = 0; i < g.nrow; ++i) {
        g.row[i] = std::acos(u[g.nrow - 1 - i]);
        roww[i] = wu[g.nrow - 1 - i];
      }
      double colw = 2.0 * kPi / g.ncol;
      g.col.resize(g.ncol);
      for (int j = 0; j < g.ncol; ++j) g.col[j] = colw * j;
      g.weight.resize(g.size());
      for (int i = 0; i < g.nrow; ++i)
        for (int j = 0; j < g.ncol; ++j) g.weight[g.idx(i, j)] = roww[i] * colw;
      return g;
    }
    case Surface::Disc: {
      g.nrow = resolution;
      g.ncol = 2 * resolution + 1;
      g.col_periodic = true;
      g.h = 1.0 / resolution;
      std::vector<double> r, wr;
      gauss_legendre(resolution, 0.0, 1.0, r, wr);
      g.row = r;
      double colw = 2.0 * kPi / g.ncol;
      g.col.resize(g.ncol);
      for (int j = 0; j < g.ncol; ++j) g.col[j] = colw * j;
      g.weight.resize(g.size());
      for (int i = 0; i < g.nrow; ++i)
        for (int j = 0; j < g.ncol; ++j) g.weight[g.idx(i, j)] = wr[i] * r[i] * colw;
      return g;
    }
  }
  throw std::logic_error("bad surface");
}

}  // namespace nlab::geom
