// ttc: command-line front end for tensor completion experiments.
//
// Exit status: 0 on success (and convergence, for `complete`), 2 when a
// completion hit maxiter without converging, 1 on any error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ttc/augment.hpp"
#include "ttc/bench.hpp"
#include "ttc/experiments.hpp"
#include "ttc/io.hpp"
#include "ttc/linalg.hpp"
#include "ttc/metrics.hpp"
#include "ttc/random.hpp"
#include "ttc/solver.hpp"
#include "ttc/synth.hpp"

#ifndef TTC_DEFAULT_IMAGE
#define TTC_DEFAULT_IMAGE "data/sample.ppm"
#endif

namespace fs = std::filesystem;
using namespace ttc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

// Bad arguments detected after CLI11 parsing; reported together with usage.
struct UsageError : Error {
  using Error::Error;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

unsigned default_jobs() {
  if (const char* env = std::getenv("TTC_JOBS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

std::vector<Algorithm> parse_algorithms(const std::vector<std::string>& names) {
  std::vector<Algorithm> out;
  for (const std::string& n : names) {
    if (n == "all") {
      out.insert(out.end(), std::begin(kAllAlgorithms), std::end(kAllAlgorithms));
      continue;
    }
    const auto a = parse_algorithm(n);
    if (!a) {
      throw UsageError("unknown algorithm '" + n +
                       "' (expected silrtc, silrtc-square, silrtc-tt, tmac, tmac-square or tmac-tt)");
    }
    out.push_back(*a);
  }
  if (out.empty()) throw UsageError("no algorithm given");
  return out;
}

// "auto" sweeps the f grid; otherwise a positive number.
double parse_f(const std::string& s) {
  if (s == "auto") return 0.0;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !(v > 0.0)) throw UsageError("--f must be 'auto' or a positive number, got '" + s + "'");
  return v;
}

InitMode parse_init(const std::string& s) { return s == "mean" ? InitMode::MeanFill : InitMode::ZeroFill; }

WeightFamily parse_truth_family(const std::string& s) {
  return s == "tucker" ? WeightFamily::Tucker : WeightFamily::TensorTrain;
}

// A single rank is broadcast to every unfolding of the solver's family.
std::vector<std::size_t> expand_ranks(const std::vector<std::size_t>& ranks, WeightFamily family, const Dims& dims) {
  const std::size_t count = family == WeightFamily::Tucker ? dims.size() : dims.size() - 1;
  if (ranks.size() == 1) return std::vector<std::size_t>(count, ranks[0]);
  return ranks;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

struct Common {
  std::string f = "auto";
  double tol = 1e-4;
  std::size_t maxiter = 1000;
  std::uint64_t seed = 0;
  std::string init = "zero";
  unsigned jobs = default_jobs();
  bool timing = false;

  SolveOptions options() const {
    SolveOptions o;
    o.f = parse_f(f);
    o.tol = tol;
    o.maxiter = maxiter;
    o.init = parse_init(init);
    return o;
  }
};

void add_solver_flags(CLI::App* app, Common& c) {
  app->add_option("--f", c.f, "beta = f * alpha; 'auto' sweeps 0.01,0.05,0.1,0.5,1 and keeps the best run")
      ->capture_default_str();
  app->add_option("--tol", c.tol, "stop when ||X^{l+1} - X^l||_F / ||T||_F < tol")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--maxiter", c.maxiter, "iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--seed", c.seed, "base seed; every random choice derives from it")->capture_default_str();
  app->add_option("--init", c.init, "fill for missing entries at iteration 0")
      ->check(CLI::IsMember({"zero", "mean"}))
      ->capture_default_str();
  app->add_option("--jobs", c.jobs, "worker threads (default: $TTC_JOBS or 1)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_flag("--timing", c.timing, "fill the seconds column (otherwise NA, keeping output byte-reproducible)");
}

// ---------------------------------------------------------------- complete

struct CompleteArgs {
  Common common;
  std::string algo;
  std::string tensor;
  std::string mask;
  std::string truth;
  std::string image;
  double mr = 0.0;
  std::string text;
  bool ka = false;
  std::vector<std::size_t> ranks;
  std::size_t max_rank = 0;
  std::string out;
  std::string csv;
  std::string history;
};

void setup_complete(CLI::App* app, CompleteArgs& a) {
  app->add_option("--algo", a.algo, "silrtc, silrtc-square, silrtc-tt, tmac, tmac-square or tmac-tt")->required();
  app->add_option("--mask", a.mask, "observed entries and values (DMSK file)");
  app->add_option("--truth", a.truth, "ground truth tensor; enables RSE");
  app->add_option("--tensor", a.tensor, "full tensor (DTNS or .txt); observed at random with --mr, also used as truth");
  app->add_option("--image", a.image, "P6 PPM image; observed at random with --mr (or --text), also used as truth");
  app->add_option("--mr", a.mr, "missing ratio for --tensor/--image")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app->add_option("--text", a.text, "with --image: hide the pixels under this text instead of a random mask");
  app->add_flag("--ka", a.ka, "with --image: complete the ket-augmented tensor");
  app->add_option("--ranks", a.ranks, "factorization ranks, one per unfolding or a single value for all")
      ->delimiter(',');
  app->add_option("--max-rank", a.max_rank, "with --image and no --ranks: rank cap (0 = side/16)")
      ->capture_default_str();
  app->add_option("--out", a.out, "recovered tensor (DTNS, .txt) or image (.ppm)");
  app->add_option("--csv", a.csv, "summary CSV (default stdout)");
  app->add_option("--history", a.history, "per-iteration CSV");
  add_solver_flags(app, a.common);
}

int run_complete(const CompleteArgs& a) {
  const Algorithm algo = parse_algorithms({a.algo}).front();
  const WeightFamily family = algorithm_family(algo);
  const int sources = !a.mask.empty() + !a.tensor.empty() + !a.image.empty();
  if (sources != 1) throw UsageError("give exactly one of --mask, --tensor or --image");
  if (!a.text.empty() && a.image.empty()) throw UsageError("--text needs --image");
  if (a.ka && a.image.empty()) throw UsageError("--ka needs --image");

  const TrialSeeds seeds = trial_seeds(a.common.seed);
  std::optional<DenseTensor> truth;
  ObservationMask mask;
  std::optional<DenseTensor> image;
  if (!a.mask.empty()) {
    mask = read_mask(a.mask);
    if (!a.truth.empty()) {
      truth = load_tensor_any(a.truth);
      if (truth->dims() != mask.dims()) throw ShapeError("--truth dims differ from --mask dims");
    }
  } else {
    if (!a.truth.empty()) throw UsageError("--truth only applies with --mask");
    if (a.mr >= 1.0) throw UsageError("--mr must be below 1");
    if (!a.image.empty()) {
      image = read_ppm(a.image).pixels;
      mask = a.text.empty() ? gen_mask(*image, a.mr, seeds.mask) : text_mask(*image, TextOverlay{a.text, 0});
      if (a.ka) {
        truth = ka_forward(*image);
        mask = ka_mask(mask);
      } else {
        truth = *image;
      }
    } else {
      truth = load_tensor_any(a.tensor);
      mask = gen_mask(*truth, a.mr, seeds.mask);
    }
  }

  std::vector<std::size_t> ranks;
  if (uses_factorization(algo)) {
    if (!a.ranks.empty()) {
      ranks = expand_ranks(a.ranks, family, mask.dims());
    } else if (image) {
      ranks = image_ranks(mask.dims(), family, a.max_rank);
    } else {
      throw UsageError("--ranks is required for " + std::string(algorithm_name(algo)));
    }
  }

  SolveOptions opts = a.common.options();
  opts.threads = a.common.jobs;
  opts.seed = seeds.solver;
  const SolveOutcome out = solve(algo, mask, ranks, opts, truth ? &*truth : nullptr);
  const CompletionReport& r = out.report;

  std::string csv = "algorithm,rse,iterations,epsilon,converged,seconds,f\n";
  std::string rse_text = "NA";
  if (image) {
    const DenseTensor rec = a.ka ? ka_inverse(r.recovered) : r.recovered;
    rse_text = fmt("%.10e", rse(rec, *image));
    if (!a.out.empty()) write_ppm(image_from_tensor(rec), a.out);
  } else {
    if (truth) rse_text = fmt("%.10e", rse(r.recovered, *truth));
    if (!a.out.empty()) save_tensor_any(r.recovered, a.out);
  }
  csv += std::string(algorithm_name(algo)) + "," + rse_text + "," + std::to_string(r.iterations) + "," +
         fmt("%.10e", r.final_epsilon()) + "," + (r.converged ? "1" : "0") + "," +
         (a.common.timing ? fmt("%.6f", r.wall_time) : std::string("NA")) + "," + fmt("%.6g", out.f) + "\n";
  emit(csv, a.csv);

  if (!a.history.empty()) {
    std::string h = "iteration,epsilon,rse,objective\n";
    for (std::size_t i = 0; i < r.history.size(); ++i) {
      const IterationRecord& it = r.history[i];
      h += std::to_string(i + 1) + "," + fmt("%.10e", it.epsilon) + "," +
           (std::isnan(it.rse) ? std::string("NA") : fmt("%.10e", it.rse)) + "," + fmt("%.10e", it.objective) + "\n";
    }
    write_file(a.history, h);
  }
  return r.converged ? kExitOk : kExitNotConverged;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string family = "tt";
  std::vector<std::size_t> dims;
  std::vector<std::size_t> ranks;
  double mr = 0.0;
  std::uint64_t seed = 0;
  std::string truth;
  std::string mask;
};

void setup_generate(CLI::App* app, GenerateArgs& a) {
  app->add_option("--family", a.family, "ground truth model")
      ->check(CLI::IsMember({"tt", "tucker"}))
      ->capture_default_str();
  app->add_option("--dims", a.dims, "tensor dims, e.g. 12,12,12,12")->delimiter(',')->required();
  app->add_option("--ranks", a.ranks, "N-1 TT ranks or N Tucker ranks (a single value is broadcast)")
      ->delimiter(',')
      ->required();
  app->add_option("--mr", a.mr, "missing ratio of the written mask")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  app->add_option("--seed", a.seed, "trial seed (the same seed in synth-experiment reproduces this instance)")
      ->capture_default_str();
  app->add_option("--truth", a.truth, "where to write the ground truth tensor")->required();
  app->add_option("--mask", a.mask, "where to write the observation mask");
}

int run_generate(const GenerateArgs& a) {
  GroundTruthSpec spec;
  spec.family = parse_truth_family(a.family);
  spec.dims = a.dims;
  spec.ranks = expand_ranks(a.ranks, spec.family, a.dims);
  const TrialSeeds seeds = trial_seeds(a.seed);
  const DenseTensor truth = make_ground_truth(spec, seeds.truth);
  save_tensor_any(truth, a.truth);
  if (!a.mask.empty()) write_mask(gen_mask(truth, a.mr, seeds.mask), a.mask);
  return kExitOk;
}

// ---------------------------------------------------------------- synth-experiment

struct SynthArgs {
  Common common;
  std::string family = "tt";
  std::vector<std::size_t> dims;
  std::vector<std::size_t> ranks;
  std::vector<double> mr;
  std::vector<std::string> algos{"all"};
  std::size_t trials = 1;
  std::string out;
};

void setup_synth(CLI::App* app, SynthArgs& a) {
  app->add_option("--family", a.family, "ground truth model")
      ->check(CLI::IsMember({"tt", "tucker"}))
      ->capture_default_str();
  app->add_option("--dims", a.dims, "tensor dims, e.g. 12,12,12,12")->delimiter(',')->required();
  app->add_option("--ranks", a.ranks, "N-1 TT ranks or N Tucker ranks (a single value is broadcast)")
      ->delimiter(',')
      ->required();
  app->add_option("--mr", a.mr, "missing ratios, e.g. 0.5,0.7,0.9")->delimiter(',')->required();
  app->add_option("--algo", a.algos, "algorithms, comma separated, or 'all'")->delimiter(',')->capture_default_str();
  app->add_option("--trials", a.trials, "instances per cell; trial t uses seed + t")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--out", a.out, "CSV path (default stdout)");
  add_solver_flags(app, a.common);
}

int run_synth(const SynthArgs& a) {
  SynthExperimentSpec spec;
  spec.truth.family = parse_truth_family(a.family);
  spec.truth.dims = a.dims;
  spec.truth.ranks = expand_ranks(a.ranks, spec.truth.family, a.dims);
  for (double m : a.mr) {
    if (!(m >= 0.0 && m < 1.0)) throw UsageError("--mr values must lie in [0, 1)");
  }
  spec.mr_list = a.mr;
  spec.algorithms = parse_algorithms(a.algos);
  for (std::size_t t = 0; t < a.trials; ++t) spec.seeds.push_back(a.common.seed + t);
  spec.options = a.common.options();
  spec.jobs = a.common.jobs;
  emit(trials_csv(synth_experiment(spec), a.common.timing), a.out);
  return kExitOk;
}

// ---------------------------------------------------------------- image-experiment

struct ImageArgs {
  Common common;
  std::string image = TTC_DEFAULT_IMAGE;
  double mr = 0.7;
  std::string text;
  std::string ka = "both";
  std::vector<std::string> algos{"tmac-tt", "tmac"};
  std::size_t max_rank = 0;
  std::string out;
};

void setup_image(CLI::App* app, ImageArgs& a) {
  app->add_option("--image", a.image, "P6 PPM image")->capture_default_str();
  app->add_option("--mr", a.mr, "missing ratio of the random pixel mask")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app->add_option("--text", a.text, "hide the pixels under this text instead of a random mask ('\\n' breaks lines)");
  app->add_option("--ka", a.ka, "run on the raw image, the ket-augmented tensor, or both")
      ->check(CLI::IsMember({"raw", "ka", "both"}))
      ->capture_default_str();
  app->add_option("--algo", a.algos, "algorithms, comma separated, or 'all'")->delimiter(',')->capture_default_str();
  app->add_option("--max-rank", a.max_rank, "rank cap for factorization solvers (0 = side/16)")->capture_default_str();
  app->add_option("--out", a.out, "output directory for results.csv, observed.ppm and recovered images")->required();
  add_solver_flags(app, a.common);
}

std::string unescape_newlines(std::string s) {
  for (std::size_t p = s.find("\\n"); p != std::string::npos; p = s.find("\\n", p + 1)) s.replace(p, 2, "\n");
  return s;
}

int run_image(const ImageArgs& a) {
  if (a.mr >= 1.0) throw UsageError("--mr must be below 1");
  ImageExperimentSpec spec;
  spec.image = read_ppm(a.image).pixels;
  spec.mr = a.mr;
  if (!a.text.empty()) spec.text = TextOverlay{unescape_newlines(a.text), 0};
  spec.ka = a.ka == "raw" ? KaMode::Raw : a.ka == "ka" ? KaMode::Augmented : KaMode::Both;
  spec.algorithms = parse_algorithms(a.algos);
  spec.options = a.common.options();
  spec.max_rank = a.max_rank;
  spec.seed = a.common.seed;
  spec.jobs = a.common.jobs;
  const ImageExperimentResult result = image_experiment(spec);

  const fs::path dir(a.out);
  fs::create_directories(dir);
  DenseTensor observed(spec.image.dims());
  result.mask.project(observed);
  write_ppm(image_from_tensor(observed), dir / "observed.ppm");
  for (const ImageRunResult& r : result.runs) {
    if (!r.error.empty()) continue;
    const std::string name =
        "recovered_" + std::string(algorithm_name(r.algorithm)) + (r.augmented ? "_ka" : "") + ".ppm";
    write_ppm(image_from_tensor(r.recovered), dir / name);
  }
  write_file(dir / "results.csv", image_runs_csv(result.runs, a.common.timing));
  std::cout << image_runs_csv(result.runs, a.common.timing);
  return kExitOk;
}

// ---------------------------------------------------------------- phase-diagram

struct PhaseArgs {
  Common common;
  std::string algo = "tmac-tt";
  std::string family = "tt";
  std::vector<std::size_t> dims;
  std::vector<std::size_t> rank_axis;
  std::vector<double> mr_axis;
  double epsilon = 1e-2;
  std::size_t trials = 1;
  std::string out;
};

void setup_phase(CLI::App* app, PhaseArgs& a) {
  app->add_option("--algo", a.algo, "solver")->capture_default_str();
  app->add_option("--family", a.family, "ground truth model; ranks on the axis are uniform TT or Tucker ranks")
      ->check(CLI::IsMember({"tt", "tucker"}))
      ->capture_default_str();
  app->add_option("--dims", a.dims, "tensor dims")->delimiter(',')->required();
  app->add_option("--rank-axis", a.rank_axis, "ranks, one grid row each")->delimiter(',')->required();
  app->add_option("--mr-axis", a.mr_axis, "missing ratios, one grid column each")->delimiter(',')->required();
  app->add_option("--epsilon", a.epsilon, "success threshold on RSE")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--trials", a.trials, "instances averaged per cell")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--out", a.out, "output prefix; writes <out>.csv and <out>.pgm")->required();
  add_solver_flags(app, a.common);
}

int run_phase(const PhaseArgs& a) {
  PhaseGridSpec spec;
  spec.algorithm = parse_algorithms({a.algo}).front();
  spec.truth_family = parse_truth_family(a.family);
  spec.dims = a.dims;
  spec.rank_axis = a.rank_axis;
  spec.mr_axis = a.mr_axis;
  spec.epsilon = a.epsilon;
  spec.seeds = a.trials;
  spec.seed = a.common.seed;
  const SolveOptions o = a.common.options();
  spec.f = o.f;
  spec.tol = o.tol;
  spec.maxiter = o.maxiter;
  spec.init = o.init;
  spec.jobs = a.common.jobs;
  const PhaseDiagram d = phase_grid(spec);
  write_file(a.out + ".csv", d.to_csv());
  write_file(a.out + ".pgm", d.to_pgm());
  for (const std::string& e : d.errors) {
    if (!e.empty()) std::cerr << "cell error: " << e << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- ka

struct KaArgs {
  std::string direction;
  std::string in;
  std::string out;
};

void setup_ka(CLI::App* app, KaArgs& a) {
  app->add_option("direction", a.direction, "forward (image -> 4x...x4x3 tensor) or inverse")
      ->check(CLI::IsMember({"forward", "inverse"}))
      ->required();
  app->add_option("--in", a.in, "input: .ppm image or tensor file")->required();
  app->add_option("--out", a.out, "output: .ppm image or tensor file")->required();
}

bool is_ppm(const std::string& p) { return fs::path(p).extension() == ".ppm"; }

int run_ka(const KaArgs& a) {
  const DenseTensor in = is_ppm(a.in) ? read_ppm(a.in).pixels : load_tensor_any(a.in);
  const DenseTensor out = a.direction == "forward" ? ka_forward(in) : ka_inverse(in);
  if (is_ppm(a.out)) {
    write_ppm(image_from_tensor(out), a.out);
  } else {
    save_tensor_any(out, a.out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- info

struct InfoArgs {
  std::string tensor;
  std::string image;
  double tol = kRankTolerance;
};

void setup_info(CLI::App* app, InfoArgs& a) {
  app->add_option("--tensor", a.tensor, "tensor file (DTNS or .txt)");
  app->add_option("--image", a.image, "P6 PPM image");
  app->add_option("--tol", a.tol, "relative rank tolerance")->check(CLI::PositiveNumber)->capture_default_str();
}

template <typename T>
std::string join(const std::vector<T>& v, const char* f) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(f, static_cast<double>(v[i]));
  return s;
}

int run_info(const InfoArgs& a) {
  if (a.tensor.empty() == a.image.empty()) throw UsageError("give exactly one of --tensor or --image");
  const DenseTensor x = a.tensor.empty() ? read_ppm(a.image).pixels : load_tensor_any(a.tensor);
  std::vector<std::size_t> dims(x.dims().begin(), x.dims().end());
  std::cout << "order," << x.order() << "\n";
  std::cout << "dims," << join(dims, "%.0f") << "\n";
  std::cout << "entries," << x.size() << "\n";
  std::cout << "frobenius_norm," << fmt("%.10e", frobenius_norm(x)) << "\n";
  if (x.order() >= 2) {
    std::cout << "tt_ranks," << join(tt_rank_profile(x, a.tol), "%.0f") << "\n";
    std::cout << "tucker_ranks," << join(tucker_rank_profile(x, a.tol), "%.0f") << "\n";
    if (frobenius_norm(x) > 0.0) std::cout << "tt_entropy," << join(tt_entropy_profile(x), "%.10e") << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::vector<std::string> algos{"tmac-tt"};
  std::vector<std::size_t> dims;
  std::vector<std::size_t> ranks;
  std::size_t iterations = 5;
  std::uint64_t seed = 0;
  std::string out;
};

void setup_bench(CLI::App* app, BenchArgs& a) {
  app->add_option("--algo", a.algos, "algorithms, comma separated, or 'all'")->delimiter(',')->capture_default_str();
  app->add_option("--dims", a.dims, "tensor dims")->delimiter(',')->required();
  app->add_option("--ranks", a.ranks, "TT ranks of the instance; one record per value")->delimiter(',')->required();
  app->add_option("--iterations", a.iterations, "timed iterations (>= 5)")->capture_default_str();
  app->add_option("--seed", a.seed, "instance seed")->capture_default_str();
  app->add_option("--out", a.out, "CSV path (default stdout)");
}

int run_bench(const BenchArgs& a) {
  const std::vector<Algorithm> algos = parse_algorithms(a.algos);
  std::vector<BenchRecord> records;
  for (Algorithm algo : algos) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t r : a.ranks) {
      records.push_back(bench_iteration(algo, a.dims, r, a.seed, a.iterations));
      xs.push_back(static_cast<double>(r));
      ys.push_back(records.back().median_seconds);
    }
    if (xs.size() >= 2) {
      try {
        const PowerFit fit = fit_power_law(xs, ys);
        std::cerr << algorithm_name(algo) << ": seconds ~ rank^" << fmt("%.3f", fit.exponent)
                  << " (R^2 = " << fmt("%.3f", fit.r_squared) << ")\n";
      } catch (const Error& e) {
        std::cerr << algorithm_name(algo) << ": no fit (" << e.what() << ")\n";
      }
    }
  }
  emit(bench_csv(records), a.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank tensor completion: SiLRTC, TMac and their tensor-train variants"};
  app.require_subcommand(1);

  CompleteArgs complete_args;
  GenerateArgs generate_args;
  SynthArgs synth_args;
  ImageArgs image_args;
  PhaseArgs phase_args;
  KaArgs ka_args;
  InfoArgs info_args;
  BenchArgs bench_args;

  CLI::App* complete = app.add_subcommand("complete", "complete one tensor, mask or image");
  CLI::App* generate = app.add_subcommand("generate", "write a synthetic ground truth and mask");
  CLI::App* synth = app.add_subcommand("synth-experiment", "RSE versus missing ratio on synthetic tensors");
  CLI::App* image = app.add_subcommand("image-experiment", "image recovery with and without ket augmentation");
  CLI::App* phase = app.add_subcommand("phase-diagram", "success grid over rank and missing ratio");
  CLI::App* ka = app.add_subcommand("ka", "ket augmentation of a 2^n x 2^n x 3 image and its inverse");
  CLI::App* info = app.add_subcommand("info", "dims, norm, rank and entropy profiles of a tensor");
  CLI::App* bench = app.add_subcommand("bench", "per-iteration timing");
  setup_complete(complete, complete_args);
  setup_generate(generate, generate_args);
  setup_synth(synth, synth_args);
  setup_image(image, image_args);
  setup_phase(phase, phase_args);
  setup_ka(ka, ka_args);
  setup_info(info, info_args);
  setup_bench(bench, bench_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    std::cerr << "\n" << sub->help();
    return kExitError;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    if (active == complete) return run_complete(complete_args);
    if (active == generate) return run_generate(generate_args);
    if (active == synth) return run_synth(synth_args);
    if (active == image) return run_image(image_args);
    if (active == phase) return run_phase(phase_args);
    if (active == ka) return run_ka(ka_args);
    if (active == info) return run_info(info_args);
    if (active == bench) return run_bench(bench_args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << active->help();
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
