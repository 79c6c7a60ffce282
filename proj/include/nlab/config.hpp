#pragma once

// Flat key=value experiment configuration. The key set is fixed; unknown keys
// are rejected so a typo cannot silently fall back to a default. serialize()
// round-trips through load exactly.

#include <cstdint>
#include <string>

namespace nlab::config {

struct Settings {
  std::string surface = "torus";
  int k1 = 3, k2 = 4;        // torus wave vector
  int deg = 8;               // sphere degree N
  int ord = 0;               // sphere order m
  std::string bc = "dirichlet";
  int grid = 256;
  double lambda_max = 40.0;
  double eps = 0.5;          // spectral filter width
  std::string out = "out";
  std::string format = "csv";
  int threads = 0;           // 0 = hardware concurrency
  std::uint64_t seed = 1;
  std::string simd = "auto";
};

// Applies one key=value pair; throws std::invalid_argument naming the key on
// unknown keys or unparseable values.
void apply_pair(Settings& s, const std::string& key, const std::string& value);

// Reads key=value lines ('#' comments and blank lines allowed).
void load_file(Settings& s, const std::string& path);

std::string serialize(const Settings& s);

// Range checks shared by file and flag input (grid >= 8, eps > 0, ...).
void validate(const Settings& s);

}  // namespace nlab::config
