#include "ttc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ttc/augment.hpp"
#include "ttc/metrics.hpp"
#include "ttc/parallel.hpp"
#include "ttc/random.hpp"

namespace ttc {

DenseTensor make_ground_truth(const GroundTruthSpec& spec, std::uint64_t seed) {
  switch (spec.family) {
    case WeightFamily::TensorTrain: return gen_tt_tensor(spec.dims, spec.ranks, seed);
    case WeightFamily::Tucker: return gen_tucker_tensor(spec.dims, spec.ranks, seed);
    default: throw ParameterError("ground truth family must be tt or tucker");
  }
}

std::vector<std::size_t> induced_ranks(const GroundTruthSpec& truth, WeightFamily solver_family) {
  const Dims& dims = truth.dims;
  const std::size_t order = dims.size();
  const bool tucker_truth = truth.family == WeightFamily::Tucker;
  if (truth.ranks.size() != (tucker_truth ? order : order - 1)) throw ParameterError("ground-truth rank count");
  std::vector<std::size_t> out;
  if (solver_family == WeightFamily::Tucker) {
    for (std::size_t n = 1; n <= order; ++n) {
      std::size_t r = 0;
      if (tucker_truth) {
        r = truth.ranks[n - 1];
      } else {
        // X_(n) factors through bonds r_{n-1} and r_n.
        const std::size_t left = n >= 2 ? truth.ranks[n - 2] : 1;
        const std::size_t right = n <= order - 1 ? truth.ranks[n - 1] : 1;
        r = left * right;
      }
      out.push_back(std::min(r, rank_bound(solver_family, dims, n)));
    }
  } else {
    for (std::size_t k = 1; k < order; ++k) {
      std::size_t r = 0;
      if (tucker_truth) {
        std::size_t left = 1;
        std::size_t right = 1;
        for (std::size_t l = 0; l < k; ++l) left *= truth.ranks[l];
        for (std::size_t l = k; l < order; ++l) right *= truth.ranks[l];
        r = std::min(left, right);
      } else {
        r = truth.ranks[k - 1];
      }
      out.push_back(std::min(r, rank_bound(solver_family, dims, k)));
    }
  }
  return out;
}

TrialSeeds trial_seeds(std::uint64_t seed) {
  return {derive_seed(seed, 1), derive_seed(seed, 2), derive_seed(seed, 3)};
}

namespace {

bool better(const CompletionReport& candidate, const CompletionReport& best, bool have_truth) {
  const double a = have_truth ? candidate.final_rse() : candidate.final_epsilon();
  const double b = have_truth ? best.final_rse() : best.final_epsilon();
  if (std::isnan(b)) return !std::isnan(a);
  return a < b;
}

std::string format_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

SolveOutcome solve(Algorithm a, const ObservationMask& mask, const std::vector<std::size_t>& ranks,
                   const SolveOptions& options, const DenseTensor* truth) {
  const WeightFamily family = algorithm_family(a);
  SolverConfig config;
  config.ranks = ranks;
  config.tol = options.tol;
  config.maxiter = options.maxiter;
  config.seed = options.seed;
  config.init = options.init;
  config.threads = options.threads;

  std::vector<double> grid;
  if (options.f > 0.0) {
    grid.push_back(options.f);
  } else if (uses_factorization(a)) {
    // f only scales beta, which the factorization solvers never read.
    grid.push_back(1.0);
  } else {
    grid.assign(std::begin(kFGrid), std::end(kFGrid));
  }

  std::optional<SolveOutcome> best;
  for (double f : grid) {
    config.weights = make_weights(family, mask.dims(), f);
    SolveOutcome candidate{run_algorithm(a, mask, config, truth), f};
    if (!best || better(candidate.report, best->report, truth != nullptr)) best = std::move(candidate);
  }
  return std::move(*best);
}

TrialResult run_synthetic_trial(Algorithm a, const GroundTruthSpec& truth_spec, double mr, std::uint64_t seed,
                                const SolveOptions& options) {
  TrialResult row;
  row.algorithm = a;
  row.mr = mr;
  row.seed = seed;
  row.rse = std::numeric_limits<double>::quiet_NaN();
  row.epsilon = std::numeric_limits<double>::quiet_NaN();
  try {
    const TrialSeeds seeds = trial_seeds(seed);
    const DenseTensor truth = make_ground_truth(truth_spec, seeds.truth);
    const ObservationMask mask = gen_mask(truth, mr, seeds.mask);
    SolveOptions opts = options;
    opts.seed = seeds.solver;
    const std::vector<std::size_t> ranks =
        uses_factorization(a) ? induced_ranks(truth_spec, algorithm_family(a)) : std::vector<std::size_t>{};
    const SolveOutcome out = solve(a, mask, ranks, opts, &truth);
    row.rse = rse(out.report.recovered, truth);
    row.iterations = out.report.iterations;
    row.epsilon = out.report.final_epsilon();
    row.converged = out.report.converged;
    row.seconds = out.report.wall_time;
    row.f = out.f;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

std::vector<TrialResult> synth_experiment(const SynthExperimentSpec& spec) {
  if (spec.mr_list.empty() || spec.algorithms.empty() || spec.seeds.empty()) {
    throw ParameterError("synthetic experiment needs at least one mr, algorithm and seed");
  }
  const std::size_t n_alg = spec.algorithms.size();
  const std::size_t n_mr = spec.mr_list.size();
  std::vector<TrialResult> rows(spec.seeds.size() * n_mr * n_alg);
  parallel_for(rows.size(), spec.jobs, [&](std::size_t i) {
    const std::size_t a = i % n_alg;
    const std::size_t m = (i / n_alg) % n_mr;
    const std::size_t s = i / (n_alg * n_mr);
    rows[i] = run_synthetic_trial(spec.algorithms[a], spec.truth, spec.mr_list[m], spec.seeds[s], spec.options);
  });
  return rows;
}

std::string trials_csv(const std::vector<TrialResult>& rows, bool timing) {
  std::string out = "algorithm,mr,seed,rse,iterations,epsilon,converged,seconds,f,status\n";
  for (const TrialResult& r : rows) {
    out += std::string(algorithm_name(r.algorithm)) + "," + format_double("%.6g", r.mr) + "," +
           std::to_string(r.seed) + "," + format_double("%.10e", r.rse) + "," + std::to_string(r.iterations) + "," +
           format_double("%.10e", r.epsilon) + "," + (r.converged ? "1" : "0") + "," +
           (timing ? format_double("%.6f", r.seconds) : std::string("NA")) + "," + format_double("%.6g", r.f) + "," +
           (r.error.empty() ? std::string("ok") : csv_escape("error: " + r.error)) + "\n";
  }
  return out;
}

std::vector<std::size_t> image_ranks(const Dims& dims, WeightFamily family, std::size_t max_rank) {
  const std::size_t count = family == WeightFamily::Tucker ? dims.size() : dims.size() - 1;
  std::size_t cap = max_rank;
  if (cap == 0) {
    // Default: a fixed fraction of the side length of the image the tensor
    // came from, so raw and augmented forms of one image share a budget.
    const std::size_t pixels = dim_product(dims) / 3;
    const auto side = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(pixels))));
    cap = std::max<std::size_t>(1, side / 16);
  }
  std::vector<std::size_t> ranks;
  for (std::size_t k = 1; k <= count; ++k) ranks.push_back(std::min(cap, rank_bound(family, dims, k)));
  return ranks;
}

ImageExperimentResult image_experiment(const ImageExperimentSpec& spec) {
  const Dims& dims = spec.image.dims();
  if (dims.size() != 3 || dims[2] != 3) throw ShapeError("image experiment needs an H x W x 3 image");
  if (spec.algorithms.empty()) throw ParameterError("image experiment needs at least one algorithm");
  ImageExperimentResult result;
  if (spec.text) {
    result.mask = text_mask(spec.image, *spec.text);
  } else {
    result.mask = gen_mask(spec.image, spec.mr, derive_seed(spec.seed, 2));
  }
  std::vector<bool> forms;
  if (spec.ka != KaMode::Augmented) forms.push_back(false);
  if (spec.ka != KaMode::Raw) {
    ka_layout_for_image(dims);  // shape errors surface before any solver runs
    forms.push_back(true);
  }

  std::optional<DenseTensor> aug_image;
  std::optional<ObservationMask> aug_mask;
  if (spec.ka != KaMode::Raw) {
    aug_image = ka_forward(spec.image);
    aug_mask = ka_mask(result.mask);
  }

  result.runs.resize(spec.algorithms.size() * forms.size());
  parallel_for(result.runs.size(), spec.jobs, [&](std::size_t i) {
    const Algorithm a = spec.algorithms[i / forms.size()];
    const bool augmented = forms[i % forms.size()];
    ImageRunResult& run = result.runs[i];
    run.algorithm = a;
    run.augmented = augmented;
    run.mr = result.mask.missing_ratio();
    run.rse = std::numeric_limits<double>::quiet_NaN();
    run.epsilon = std::numeric_limits<double>::quiet_NaN();
    try {
      const DenseTensor& truth = augmented ? *aug_image : spec.image;
      const ObservationMask& mask = augmented ? *aug_mask : result.mask;
      const std::vector<std::size_t> ranks = uses_factorization(a)
                                                 ? image_ranks(truth.dims(), algorithm_family(a), spec.max_rank)
                                                 : std::vector<std::size_t>{};
      SolveOptions opts = spec.options;
      opts.seed = derive_seed(spec.seed, 3);
      SolveOutcome out = solve(a, mask, ranks, opts, &truth);
      run.iterations = out.report.iterations;
      run.epsilon = out.report.final_epsilon();
      run.converged = out.report.converged;
      run.seconds = out.report.wall_time;
      run.f = out.f;
      run.recovered = augmented ? ka_inverse(out.report.recovered) : std::move(out.report.recovered);
      run.rse = rse(run.recovered, spec.image);
    } catch (const std::exception& e) {
      run.error = e.what();
    }
  });
  return result;
}

std::string image_runs_csv(const std::vector<ImageRunResult>& rows, bool timing) {
  std::string out = "algorithm,ka,mr,rse,iterations,epsilon,converged,seconds,f,status\n";
  for (const ImageRunResult& r : rows) {
    out += std::string(algorithm_name(r.algorithm)) + "," + (r.augmented ? "1" : "0") + "," +
           format_double("%.6g", r.mr) + "," + format_double("%.10e", r.rse) + "," + std::to_string(r.iterations) +
           "," + format_double("%.10e", r.epsilon) + "," + (r.converged ? "1" : "0") + "," +
           (timing ? format_double("%.6f", r.seconds) : std::string("NA")) + "," + format_double("%.6g", r.f) + "," +
           (r.error.empty() ? std::string("ok") : csv_escape("error: " + r.error)) + "\n";
  }
  return out;
}

}  // namespace ttc
