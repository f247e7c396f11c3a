#pragma once

// Experiment drivers shared by the CLI, the phase-grid sweep and the tests:
// ground-truth construction, seed bookkeeping, the f sweep, and the synthetic
// and image protocols.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ttc/mask.hpp"
#include "ttc/solver.hpp"
#include "ttc/synth.hpp"
#include "ttc/tensor.hpp"

namespace ttc {

struct GroundTruthSpec {
  WeightFamily family = WeightFamily::TensorTrain;  // TensorTrain or Tucker
  Dims dims;
  std::vector<std::size_t> ranks;  // N-1 TT ranks or N Tucker ranks
};

DenseTensor make_ground_truth(const GroundTruthSpec& spec, std::uint64_t seed);

// Ranks of the unfoldings used by `solver_family` that the ground-truth
// construction guarantees, clamped to the unfolding bounds.
std::vector<std::size_t> induced_ranks(const GroundTruthSpec& truth, WeightFamily solver_family);

// Seeds of one synthetic trial. The mask seed does not depend on mr, so masks
// for increasing mr at one seed are nested.
struct TrialSeeds {
  std::uint64_t truth;
  std::uint64_t mask;
  std::uint64_t solver;
};
TrialSeeds trial_seeds(std::uint64_t seed);

struct SolveOptions {
  double f = 0.0;  // <= 0 sweeps kFGrid
  double tol = 1e-4;
  std::size_t maxiter = 1000;
  InitMode init = InitMode::ZeroFill;
  unsigned threads = 1;
  std::uint64_t seed = 0;
};

struct SolveOutcome {
  CompletionReport report;
  double f = 0.0;
};

// Runs `a` once, or over kFGrid when options.f <= 0 and the solver uses f.
// The sweep keeps the lowest final RSE when truth is given, else the lowest
// final epsilon; ties keep the smaller f.
SolveOutcome solve(Algorithm a, const ObservationMask& mask, const std::vector<std::size_t>& ranks,
                   const SolveOptions& options, const DenseTensor* truth = nullptr);

struct TrialResult {
  Algorithm algorithm = Algorithm::TMacTT;
  double mr = 0.0;
  std::uint64_t seed = 0;
  double rse = 0.0;
  std::size_t iterations = 0;
  double epsilon = 0.0;
  bool converged = false;
  double seconds = 0.0;
  double f = 0.0;
  std::string error;  // nonempty when the run threw
};

TrialResult run_synthetic_trial(Algorithm a, const GroundTruthSpec& truth_spec, double mr, std::uint64_t seed,
                                const SolveOptions& options);

struct SynthExperimentSpec {
  GroundTruthSpec truth;
  std::vector<double> mr_list;
  std::vector<Algorithm> algorithms;
  std::vector<std::uint64_t> seeds;
  SolveOptions options;
  unsigned jobs = 1;
};

// One row per (algorithm, mr, seed), ordered seed-major, then mr, then algorithm.
std::vector<TrialResult> synth_experiment(const SynthExperimentSpec& spec);

// CSV with columns algorithm,mr,seed,rse,iterations,epsilon,converged,seconds,f,status.
// Without `timing` the seconds column is written as NA so reruns are byte-identical.
std::string trials_csv(const std::vector<TrialResult>& rows, bool timing);

enum class KaMode { Raw, Augmented, Both };

struct ImageExperimentSpec {
  DenseTensor image;  // H x W x 3 in [0, 1]
  double mr = 0.7;
  std::optional<TextOverlay> text;  // replaces the random mask when set
  KaMode ka = KaMode::Both;
  std::vector<Algorithm> algorithms;
  SolveOptions options;
  std::size_t max_rank = 0;  // 0 picks the default cap, see image_ranks
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

// Ranks for an image-derived tensor: min(bound_k, max_rank) per unfolding.
// With max_rank == 0 the cap is side / 16, where side is the side length of
// the square image the tensor holds (16 for 256 x 256).
std::vector<std::size_t> image_ranks(const Dims& dims, WeightFamily family, std::size_t max_rank);

struct ImageRunResult {
  Algorithm algorithm = Algorithm::TMacTT;
  bool augmented = false;
  double mr = 0.0;
  double rse = 0.0;
  std::size_t iterations = 0;
  double epsilon = 0.0;
  bool converged = false;
  double seconds = 0.0;
  double f = 0.0;
  std::string error;
  DenseTensor recovered;  // H x W x 3, back in image layout
};

struct ImageExperimentResult {
  ObservationMask mask;  // over the image entries
  std::vector<ImageRunResult> runs;
};

ImageExperimentResult image_experiment(const ImageExperimentSpec& spec);

// CSV with columns algorithm,ka,mr,rse,iterations,epsilon,converged,seconds,f,status.
std::string image_runs_csv(const std::vector<ImageRunResult>& rows, bool timing);

}  // namespace ttc
