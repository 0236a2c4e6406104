#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace chl {

// Deterministic PRNG for all randomized sweeps; every call site passes an
// explicit seed so repeated runs produce identical streams.
inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

// i-th element (i >= 0) of the van der Corput sequence in the given base.
double halton(std::uint64_t i, unsigned base);

// Shortest-exact decimal rendering of a double ("%.17g"), locale-independent.
std::string fmt_g17(double x);

// Writes content to path atomically: temp file in the same directory, then rename.
void atomic_write_file(const std::string& path, const std::string& content);

// Minimal CSV accumulator with a fixed header; '.' decimal point, no quoting.
class CsvBuilder {
 public:
  explicit CsvBuilder(const std::vector<std::string>& header);
  void add_row(const std::vector<std::string>& cells);
  const std::string& str() const { return buf_; }

 private:
  std::size_t ncols_;
  std::string buf_;
};

}  // namespace chl
