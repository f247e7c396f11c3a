#include "ttc/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ttc/experiments.hpp"

namespace ttc {

BenchRecord bench_iteration(Algorithm a, const Dims& dims, std::size_t rank, std::uint64_t seed,
                            std::size_t iterations, CompletionReport* report) {
  validate_dims(dims);
  if (dims.size() < 2) throw ParameterError("bench needs a tensor of order >= 2");
  if (dim_product(dims) > kBenchMaxEntries) throw ParameterError("bench instance too large");
  if (iterations < 5) throw ParameterError("bench needs at least 5 iterations");
  if (rank < 1) throw ParameterError("bench rank must be >= 1");

  GroundTruthSpec truth_spec;
  truth_spec.dims = dims;
  truth_spec.ranks.assign(dims.size() - 1, rank);
  const TrialSeeds seeds = trial_seeds(seed);
  const DenseTensor truth = make_ground_truth(truth_spec, seeds.truth);
  const ObservationMask mask = gen_mask(truth, 0.5, seeds.mask);

  SolverConfig config;
  config.weights = make_weights(algorithm_family(a), dims, 0.1);
  if (uses_factorization(a)) config.ranks = induced_ranks(truth_spec, algorithm_family(a));
  config.tol = 1e-300;
  config.maxiter = iterations;
  config.seed = seeds.solver;
  CompletionReport r = run_algorithm(a, mask, config, &truth);

  std::vector<double> times;
  for (const IterationRecord& it : r.history) times.push_back(it.seconds);
  std::sort(times.begin(), times.end());
  BenchRecord rec;
  rec.algorithm = a;
  rec.dims = dims;
  rec.rank = rank;
  rec.iterations = times.size();
  const std::size_t mid = times.size() / 2;
  rec.median_seconds = times.size() % 2 == 1 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
  if (report != nullptr) *report = std::move(r);
  return rec;
}

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("power-law fit needs >= 2 paired points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ParameterError("power-law fit needs positive data");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  if (!(vx > 0.0)) throw ParameterError("power-law fit needs distinct x values");
  PowerFit fit;
  fit.exponent = cxy / vx;
  fit.r_squared = vy > 0.0 ? (cxy * cxy) / (vx * vy) : 1.0;
  return fit;
}

std::string bench_csv(const std::vector<BenchRecord>& records) {
  std::string out = "algorithm,dims,rank,iterations,median_seconds\n";
  char buf[64];
  for (const BenchRecord& r : records) {
    std::string dims;
    for (std::size_t k = 0; k < r.dims.size(); ++k) dims += (k ? "x" : "") + std::to_string(r.dims[k]);
    std::snprintf(buf, sizeof buf, "%.6e", r.median_seconds);
    out += std::string(algorithm_name(r.algorithm)) + "," + dims + "," + std::to_string(r.rank) + "," +
           std::to_string(r.iterations) + "," + buf + "\n";
  }
  return out;
}

}  // namespace ttc
