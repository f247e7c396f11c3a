// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cli_support.hpp"
#include "oracles.hpp"
#include "ttc/augment.hpp"
#include "ttc/experiments.hpp"
#include "ttc/io.hpp"
#include "ttc/linalg.hpp"
#include "ttc/metrics.hpp"
#include "ttc/solver.hpp"
#include "ttc/synth.hpp"

#ifndef TTC_SAMPLE_IMAGE
#error "TTC_SAMPLE_IMAGE must name the bundled sample image"
#endif

using namespace ttc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

double final_rse(Algorithm a, const DenseTensor& truth, double mr, std::uint64_t seed, double f, std::size_t maxiter,
                 const std::vector<std::size_t>& ranks) {
  SolverConfig c;
  c.weights = make_weights(algorithm_family(a), truth.dims(), f);
  c.ranks = ranks;
  c.maxiter = maxiter;
  c.seed = seed;
  return run_algorithm(a, gen_mask(truth, mr, seed), c, &truth).final_rse();
}

Verdict round_trip() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(1);
  std::size_t tensors = 0;
  for (std::size_t order = 2; order <= 7; ++order) {
    for (int t = 0; t < 20; ++t) {
      const DenseTensor x = oracle::random_tensor(oracle::random_dims(order, 6, 4000, gen), gen);
      for (std::size_t n = 1; n <= order; ++n) {
        if (fold(matricize_mode_n(x, n)) != x) return {false, "mode-n fold mismatch"};
      }
      for (std::size_t k = 1; k < order; ++k) {
        if (fold(matricize_tt(x, k)) != x) return {false, "tt fold mismatch"};
      }
      ++tensors;
    }
  }
  const double s = seconds_since(t0);
  return {s < 10.0, std::to_string(tensors) + " tensors in " + num(s) + " s"};
}

Verdict prox() {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> normal;
  double worst_gap = 0.0;
  double worst_norm = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index r = 2 + static_cast<Eigen::Index>(gen() % 9);
    const Eigen::Index c = 2 + static_cast<Eigen::Index>(gen() % 9);
    const Matrix m = oracle::random_matrix(r, c, gen);
    const Vector sigma = singular_values(m);
    const double gamma = sigma(0) * (0.05 + 0.9 * static_cast<double>(gen() % 1000) / 1000.0);
    const Matrix x = svt(m, gamma);
    const double best = oracle::prox_objective(x, m, gamma);
    for (int p = 0; p < 1000; ++p) {
      const double scale = std::pow(10.0, -1.0 - static_cast<double>(p % 5));
      Matrix y = x;
      for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += scale * normal(gen);
      worst_gap = std::min(worst_gap, oracle::prox_objective(y, m, gamma) - best);
    }
    double expect = 0.0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) expect += std::max(sigma(i) - gamma, 0.0);
    worst_norm = std::max(worst_norm, std::abs(nuclear_norm(x) - expect));
  }
  return {worst_gap >= -1e-12 && worst_norm <= 1e-10,
          "min objective gap " + num(worst_gap) + ", nuclear norm error " + num(worst_norm)};
}

Verdict monotone() {
  const DenseTensor t = gen_tt_tensor({10, 10, 10, 10}, {3, 3, 3}, 3);
  const ObservationMask m = gen_mask(t, 0.5, 4);
  SolverConfig c;
  c.weights = make_weights(WeightFamily::TensorTrain, t.dims(), 0.1);
  c.tol = 1e-300;  // run all 200 iterations
  c.maxiter = 200;
  const CompletionReport r = silrtc_tt(m, c, &t);
  double worst = 0.0;
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    const double prev = r.history[i - 1].objective;
    worst = std::max(worst, (r.history[i].objective - prev) / std::abs(prev));
  }
  return {r.history.size() == 200 && worst <= 1e-10,
          std::to_string(r.history.size()) + " iterations, worst relative rise " + num(worst)};
}

Verdict tt_recovery() {
  const DenseTensor t = gen_tt_tensor({12, 12, 12, 12}, {3, 3, 3}, 5);
  const auto t0 = Clock::now();
  const double tmac = final_rse(Algorithm::TMacTT, t, 0.5, 6, 1.0, 300, {3, 3, 3});
  const double s = seconds_since(t0);
  const double sil = final_rse(Algorithm::SiLRTCTT, t, 0.5, 6, 0.1, 300, {});
  return {tmac <= 1e-3 && s < 60.0 && sil <= 5e-2, "TMac-TT " + num(tmac) + " in " + num(s) +
                                                        " s, SiLRTC-TT " + num(sil)};
}

Verdict ordering() {
  const DenseTensor t = gen_tt_tensor({12, 12, 12, 12}, {3, 3, 3}, 5);
  const GroundTruthSpec spec{WeightFamily::TensorTrain, t.dims(), {3, 3, 3}};
  const double tmac_tt = final_rse(Algorithm::TMacTT, t, 0.7, 7, 1.0, 300, {3, 3, 3});
  const double tmac = final_rse(Algorithm::TMac, t, 0.7, 7, 1.0, 300, induced_ranks(spec, WeightFamily::Tucker));
  const double sil_tt = final_rse(Algorithm::SiLRTCTT, t, 0.7, 7, 0.1, 300, {});
  const double sil = final_rse(Algorithm::SiLRTC, t, 0.7, 7, 0.1, 300, {});
  return {tmac_tt <= tmac && sil_tt <= sil + 1e-3, "TMac-TT " + num(tmac_tt) + " vs TMac " +
                                                       num(tmac) + ", SiLRTC-TT " + num(sil_tt) +
                                                       " vs SiLRTC " + num(sil)};
}

Verdict tucker_sanity() {
  const GroundTruthSpec spec{WeightFamily::Tucker, {10, 10, 10, 10}, {3, 3, 3, 3}};
  const DenseTensor t = gen_tucker_tensor(spec.dims, spec.ranks, 8);
  const double tmac = final_rse(Algorithm::TMac, t, 0.5, 9, 1.0, 1000, spec.ranks);
  const double tmac_tt =
      final_rse(Algorithm::TMacTT, t, 0.5, 9, 1.0, 1000, induced_ranks(spec, WeightFamily::TensorTrain));
  return {tmac <= 1e-2 && tmac_tt <= 1e-2, "TMac " + num(tmac) + ", TMac-TT " + num(tmac_tt)};
}

Verdict shortcut() {
  std::mt19937_64 gen(10);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index rows = 2 + static_cast<Eigen::Index>(gen() % 20);
    const Eigen::Index cols = 2 + static_cast<Eigen::Index>(gen() % 20);
    const Eigen::Index r = 1 + static_cast<Eigen::Index>(gen() % std::min(rows, cols));
    const Matrix x = oracle::random_matrix(rows, cols, gen);
    const Matrix v = oracle::random_matrix(r, cols, gen);
    const Matrix a = factor_block_update(x, v, true).product;
    const Matrix b = factor_block_update(x, v, false).product;
    worst = std::max(worst, (a - b).norm() / std::max(b.norm(), 1e-300));
  }
  return {worst <= 1e-9, "worst relative difference " + num(worst)};
}

Verdict ka() {
  std::mt19937_64 gen(11);
  for (std::size_t n = 1; n <= 9; ++n) {
    const std::size_t side = std::size_t{1} << n;
    const DenseTensor img = oracle::random_tensor({side, side, 3}, gen);
    const DenseTensor aug = ka_forward(img);
    if (aug.order() != n + 1) return {false, "wrong order at n = " + std::to_string(n)};
    if (ka_inverse(aug) != img) return {false, "round trip failed at n = " + std::to_string(n)};
  }
  Dims want(8, 4);
  want.push_back(3);
  const bool layout = ka_forward(DenseTensor(Dims{256, 256, 3})).dims() == want;
  return {layout, "n = 1..9 exact, 256x256x3 -> 4^8 x 3"};
}

Verdict image() {
  const auto t0 = Clock::now();
  ImageExperimentSpec spec;
  spec.image = read_ppm(TTC_SAMPLE_IMAGE).pixels;
  spec.mr = 0.7;
  spec.algorithms = {Algorithm::TMacTT, Algorithm::TMac};
  spec.seed = 1;
  const ImageExperimentResult res = image_experiment(spec);
  double tt_raw = NAN;
  double tt_ka = NAN;
  double tk_ka = NAN;
  for (const ImageRunResult& r : res.runs) {
    if (!r.error.empty()) return {false, r.error};
    if (r.algorithm == Algorithm::TMacTT) (r.augmented ? tt_ka : tt_raw) = r.rse;
    if (r.algorithm == Algorithm::TMac && r.augmented) tk_ka = r.rse;
  }
  const double s = seconds_since(t0);
  return {tt_ka < tt_raw && tt_ka < tk_ka && s < 900.0, "TMac-TT KA " + num(tt_ka) + ", raw " +
                                                             num(tt_raw) + ", TMac KA " +
                                                             num(tk_ka) + " in " + num(s) + " s"};
}

Verdict entropy() {
  std::mt19937_64 gen(12);
  const Matrix u = oracle::random_matrix(7, 1, gen);
  const Matrix v = oracle::random_matrix(5, 1, gen);
  const double rank1 = std::abs(vn_entropy(u * v.transpose()));
  double worst_equal = 0.0;
  for (Eigen::Index r = 1; r <= 6; ++r) {
    const Matrix q1 = Eigen::HouseholderQR<Matrix>(oracle::random_matrix(8, r, gen)).householderQ() * Matrix::Identity(8, r);
    const Matrix q2 = Eigen::HouseholderQR<Matrix>(oracle::random_matrix(9, r, gen)).householderQ() * Matrix::Identity(9, r);
    const double s = vn_entropy(2.5 * q1 * q2.transpose());
    worst_equal = std::max(worst_equal, std::abs(s - std::log2(static_cast<double>(r))));
  }
  bool bounds = true;
  for (int t = 0; t < 1000; ++t) {
    const Eigen::Index rows = 1 + static_cast<Eigen::Index>(gen() % 10);
    const Eigen::Index cols = 1 + static_cast<Eigen::Index>(gen() % 10);
    const double s = vn_entropy(oracle::random_matrix(rows, cols, gen));
    const double cap = std::log2(static_cast<double>(std::min(rows, cols)));
    if (!(s >= -1e-12 && s <= cap + 1e-12)) bounds = false;
  }
  return {rank1 <= 1e-9 && worst_equal <= 1e-9 && bounds,
          "rank-1 " + num(rank1) + ", equal-sigma error " + num(worst_equal)};
}

// Drops the median_seconds column of a bench CSV; the rest must still match.
std::string without_timing(const std::string& csv) {
  std::string out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t end = csv.find('\n', pos);
    if (end == std::string::npos) end = csv.size();
    const std::string line = csv.substr(pos, end - pos);
    out += line.substr(0, line.rfind(',')) + "\n";
    pos = end + 1;
  }
  return out;
}

Verdict determinism() {
  struct Run {
    std::string name;
    std::string args;
    std::vector<std::string> files;
    bool timing_column = false;
  };
  const std::string image = std::string("'") + TTC_SAMPLE_IMAGE + "'";
  const std::vector<Run> runs = {
      {"generate", "generate --dims 6,6,6,6 --ranks 2 --mr 0.5 --seed 4 --truth t.dtns --mask m.dmsk",
       {"t.dtns", "m.dmsk"}},
      {"complete", "complete --algo silrtc-tt --mask ../generate/m.dmsk --truth ../generate/t.dtns --seed 4 --maxiter 60 "
                   "--out x.dtns --history h.csv",
       {"x.dtns", "h.csv"}},
      {"complete-image", "complete --algo tmac-tt --image " + image + " --ka --mr 0.7 --seed 4 --maxiter 20 --out r.ppm",
       {"r.ppm"}},
      {"synth-experiment",
       "synth-experiment --dims 5,5,5,5 --ranks 2 --mr 0.3,0.6 --trials 2 --seed 4 --maxiter 40 --jobs 2 --out s.csv",
       {"s.csv"}},
      {"image-experiment",
       "image-experiment --image " + image + " --mr 0.7 --seed 4 --maxiter 15 --max-rank 4 --jobs 2 --out res",
       {"res/results.csv", "res/observed.ppm", "res/recovered_tmac-tt_ka.ppm", "res/recovered_tmac.ppm"}},
      {"phase-diagram",
       "phase-diagram --dims 5,5,5 --rank-axis 1,2 --mr-axis 0.2,0.6 --trials 2 --seed 4 --maxiter 40 --out pd",
       {"pd.csv", "pd.pgm"}},
      {"ka", "ka forward --in " + image + " --out aug.dtns", {"aug.dtns"}},
      {"info", "info --tensor ../generate/t.dtns", {}},
      {"bench", "bench --algo tmac-tt --dims 6,6,6,6 --ranks 1,2 --seed 4 --out b.csv", {"b.csv"}, true},
  };
  const auto root = cli::scratch("acceptance");
  for (const Run& run : runs) {
    std::vector<std::string> seen[2];
    for (int pass = 0; pass < 2; ++pass) {
      const auto dir = root / std::to_string(pass) / run.name;
      std::filesystem::create_directories(dir);
      // Later runs read files written by the generate run of the same pass.
      const cli::Result r = cli::run(dir, run.args);
      if (r.status != 0 && !(run.name.rfind("complete", 0) == 0 && r.status == 2)) {
        return {false, run.name + " exited " + std::to_string(r.status) + ": " + r.err};
      }
      seen[pass].push_back(run.timing_column ? without_timing(r.out) : r.out);
      for (const std::string& f : run.files) {
        const std::string bytes = cli::slurp(dir / f);
        if (bytes.empty()) return {false, run.name + " did not write " + f};
        seen[pass].push_back(run.timing_column ? without_timing(bytes) : bytes);
      }
    }
    if (seen[0] != seen[1]) return {false, run.name + " output differs between runs"};
  }
  return {true, std::to_string(runs.size()) + " subcommand runs byte-identical"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"fold/matricize round trip", round_trip},
      {"svt is the nuclear-norm prox", prox},
      {"SiLRTC-TT monotone descent", monotone},
      {"TT recovery at mr 0.5", tt_recovery},
      {"TT variants beat Tucker variants at mr 0.7", ordering},
      {"Tucker ground truth recovery", tucker_sanity},
      {"TMac shortcut equivalence", shortcut},
      {"KA bijectivity", ka},
      {"KA helps on the sample image", image},
      {"entropy diagnostics", entropy},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
