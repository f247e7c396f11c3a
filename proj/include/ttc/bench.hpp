#pragma once

// Per-iteration timing harness. Scaling is reported as a fitted power-law
// exponent with its R^2; nothing here asserts a complexity bound.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ttc/solver.hpp"
#include "ttc/tensor.hpp"

namespace ttc {

struct BenchRecord {
  Algorithm algorithm = Algorithm::TMacTT;
  Dims dims;
  std::size_t rank = 1;
  std::size_t iterations = 0;
  double median_seconds = 0.0;
};

// Largest tensor the harness will allocate.
inline constexpr std::size_t kBenchMaxEntries = std::size_t{1} << 26;

// Times `iterations` (>= 5) solver iterations on a TT-rank-`rank` tensor with
// half its entries missing. The solver runs exactly as in a normal
// completion; `report`, when given, receives its output.
BenchRecord bench_iteration(Algorithm a, const Dims& dims, std::size_t rank, std::uint64_t seed,
                            std::size_t iterations = 5, CompletionReport* report = nullptr);

struct PowerFit {
  double exponent = 0.0;
  double r_squared = 0.0;
};

// Least-squares fit of log y = c + exponent * log x.
PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

// Columns: algorithm,dims,rank,iterations,median_seconds.
std::string bench_csv(const std::vector<BenchRecord>& records);

}  // namespace ttc
