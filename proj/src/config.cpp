#include "nlab/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace nlab::config {
namespace {

// Shortest round-trip rendering keeps parse(serialize(s)) lossless.
std::string render(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("config: render failed");
  return std::string(buf, p);
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

int parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  int out = 0;
  try {
    out = std::stoi(v, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for " + key + ": " + v);
  }
  if (used != v.size()) throw std::invalid_argument("config: bad integer for " + key + ": " + v);
  return out;
}

double parse_num(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for " + key + ": " + v);
  }
  if (used != v.size()) throw std::invalid_argument("config: bad number for " + key + ": " + v);
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long out = 0;
  try {
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad seed for " + key + ": " + v);
  }
  if (used != v.size()) throw std::invalid_argument("config: bad seed for " + key + ": " + v);
  return out;
}

}  // namespace

void apply_pair(Settings& s, const std::string& key, const std::string& value) {
  if (key == "surface") {
    if (value != "torus" && value != "sphere" && value != "disc")
      throw std::invalid_argument("config: unknown surface: " + value);
    s.surface = value;
  } else if (key == "k") {
    const auto comma = value.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("config: k needs the form a,b");
    s.k1 = parse_int(key, trim(value.substr(0, comma)));
    s.k2 = parse_int(key, trim(value.substr(comma + 1)));
  } else if (key == "N") {
    s.deg = parse_int(key, value);
  } else if (key == "m") {
    s.ord = parse_int(key, value);
  } else if (key == "bc") {
    if (value != "dirichlet" && value != "neumann")
      throw std::invalid_argument("config: unknown bc: " + value);
    s.bc = value;
  } else if (key == "grid") {
    s.grid = parse_int(key, value);
  } else if (key == "lambda_max") {
    s.lambda_max = parse_num(key, value);
  } else if (key == "eps") {
    s.eps = parse_num(key, value);
  } else if (key == "out") {
    s.out = value;
  } else if (key == "format") {
    if (value != "csv" && value != "json" && value != "svg")
      throw std::invalid_argument("config: unknown format: " + value);
    s.format = value;
  } else if (key == "threads") {
    s.threads = parse_int(key, value);
  } else if (key == "seed") {
    s.seed = parse_u64(key, value);
  } else if (key == "simd") {
    if (value != "auto" && value != "scalar" && value != "avx2")
      throw std::invalid_argument("config: unknown simd lane: " + value);
    s.simd = value;
  } else {
    throw std::invalid_argument("config: unknown key: " + key);
  }
}

void load_file(Settings& s, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("config: cannot open " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not key=value: " + t);
    apply_pair(s, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
}

std::string serialize(const Settings& s) {
  std::ostringstream out;
  out << "surface=" << s.surface << "\n";
  out << "k=" << s.k1 << "," << s.k2 << "\n";
  out << "N=" << s.deg << "\n";
  out << "m=" << s.ord << "\n";
  out << "bc=" << s.bc << "\n";
  out << "grid=" << s.grid << "\n";
  out << "lambda_max=" << render(s.lambda_max) << "\n";
  out << "eps=" << render(s.eps) << "\n";
  out << "out=" << s.out << "\n";
  out << "format=" << s.format << "\n";
  out << "threads=" << s.threads << "\n";
  out << "seed=" << s.seed << "\n";
  out << "simd=" << s.simd << "\n";
  return out.str();
}

void validate(const Settings& s) {
  if (s.grid < 8) throw std::invalid_argument("config: grid must be >= 8");
  if (!(s.eps > 0.0)) throw std::invalid_argument("config: eps must be positive");
  if (s.lambda_max < 0.0) throw std::invalid_argument("config: lambda_max must be >= 0");
  if (s.threads < 0) throw std::invalid_argument("config: threads must be >= 0");
  if (s.deg < 0) throw std::invalid_argument("config: N must be >= 0");
}

}  // namespace nlab::config
