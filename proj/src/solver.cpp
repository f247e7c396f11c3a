#include "ttc/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "ttc/linalg.hpp"
#include "ttc/parallel.hpp"
#include "ttc/random.hpp"

namespace ttc {

std::string_view family_name(WeightFamily family) {
  switch (family) {
    case WeightFamily::TensorTrain: return "tt";
    case WeightFamily::Tucker: return "tucker";
    case WeightFamily::Square: return "square";
  }
  return "?";
}

WeightFamily parse_family(std::string_view name) {
  if (name == "tt") return WeightFamily::TensorTrain;
  if (name == "tucker") return WeightFamily::Tucker;
  if (name == "square") return WeightFamily::Square;
  throw ParameterError("unknown weight family '" + std::string(name) + "'");
}

UnfoldKind unfold_kind(WeightFamily family) {
  return family == WeightFamily::Tucker ? UnfoldKind::ModeN : UnfoldKind::TensorTrain;
}

WeightScheme make_weights(WeightFamily family, const Dims& dims, double f) {
  validate_dims(dims);
  if (!(f > 0.0) || !std::isfinite(f)) throw ParameterError("weight multiplier f must be positive");
  const std::size_t n = dims.size();
  WeightScheme w;
  w.family = family;
  w.f = f;
  switch (family) {
    case WeightFamily::TensorTrain: {
      if (n < 2) throw ParameterError("TT weights need a tensor of order >= 2");
      for (std::size_t k = 1; k < n; ++k) {
        const auto [rows, cols] = tt_shape(dims, k);
        w.alphas.push_back(static_cast<double>(std::min(rows, cols)));
      }
      break;
    }
    case WeightFamily::Tucker:
      for (std::size_t d : dims) w.alphas.push_back(static_cast<double>(d));
      break;
    case WeightFamily::Square: {
      if (n < 2) throw ParameterError("square weights need a tensor of order >= 2");
      w.alphas.assign(n - 1, 0.0);
      const auto mid = static_cast<std::size_t>(std::lround(static_cast<double>(n) / 2.0));
      w.alphas[mid - 1] = 1.0;
      break;
    }
    default: throw ParameterError("unknown weight family");
  }
  const double total = std::accumulate(w.alphas.begin(), w.alphas.end(), 0.0);
  for (double& a : w.alphas) a /= total;
  for (double a : w.alphas) w.betas.push_back(f * a);
  return w;
}

std::size_t rank_bound(WeightFamily family, const Dims& dims, std::size_t k) {
  if (family == WeightFamily::Tucker) {
    const auto [rows, cols] = mode_n_shape(dims, k);
    return std::min(rows, cols);
  }
  const auto [rows, cols] = tt_shape(dims, k);
  return std::min(rows, cols);
}

double CompletionReport::final_rse() const {
  return history.empty() ? std::numeric_limits<double>::quiet_NaN() : history.back().rse;
}

DenseTensor init_tensor(const ObservationMask& mask, InitMode init) {
  double fill = 0.0;
  if (init == InitMode::MeanFill) {
    if (mask.observed_count() == 0) throw DegenerateInputError("mean-fill needs at least one observed entry");
    const auto v = mask.values();
    fill = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  }
  DenseTensor x(mask.dims(), std::vector<double>(dim_product(mask.dims()), fill));
  mask.project(x);
  return x;
}

FactorBlock factor_block_update(const Matrix& unfolding, const Matrix& v_prev, bool shortcut) {
  if (v_prev.cols() != unfolding.cols()) throw ShapeError("factor update: V has wrong column count");
  FactorBlock b;
  b.u = unfolding * v_prev.transpose();
  if (!shortcut) b.u = b.u * pinv(v_prev * v_prev.transpose());
  const Matrix gram = b.u.transpose() * b.u;
  b.v = pinv(gram) * (b.u.transpose() * unfolding);
  b.product = b.u * b.v;
  return b;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Matricization unfold(const DenseTensor& x, UnfoldKind kind, std::size_t k) {
  return kind == UnfoldKind::ModeN ? matricize_mode_n(x, k) : matricize_tt(x, k);
}

std::size_t expected_weight_count(WeightFamily family, std::size_t order) {
  return family == WeightFamily::Tucker ? order : order - 1;
}

void validate_config(const ObservationMask& mask, const SolverConfig& config, bool factorization,
                     std::initializer_list<WeightFamily> allowed, const DenseTensor* truth) {
  validate_dims(mask.dims());
  const WeightScheme& w = config.weights;
  bool family_ok = false;
  for (WeightFamily f : allowed) family_ok = family_ok || f == w.family;
  if (!family_ok) throw ParameterError("solver does not accept the '" + std::string(family_name(w.family)) +
                                       "' weight family");
  const std::size_t order = mask.dims().size();
  if (w.family != WeightFamily::Tucker && order < 2) throw ParameterError("TT unfoldings need order >= 2");
  const std::size_t count = expected_weight_count(w.family, order);
  if (w.alphas.size() != count) {
    throw ParameterError("expected " + std::to_string(count) + " weights, got " + std::to_string(w.alphas.size()));
  }
  double total = 0.0;
  for (double a : w.alphas) {
    if (!(a >= 0.0)) throw ParameterError("weights must be nonnegative");
    total += a;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ParameterError("weights must sum to 1");
  if (!(config.tol > 0.0)) throw ParameterError("tol must be positive");
  if (config.maxiter < 1) throw ParameterError("maxiter must be >= 1");
  if (factorization) {
    if (config.ranks.size() != count) {
      throw ParameterError("expected " + std::to_string(count) + " ranks, got " + std::to_string(config.ranks.size()));
    }
    for (std::size_t k = 1; k <= count; ++k) {
      const std::size_t r = config.ranks[k - 1];
      const std::size_t bound = rank_bound(w.family, mask.dims(), k);
      if (r < 1 || r > bound) {
        throw ParameterError("rank " + std::to_string(r) + " for unfolding " + std::to_string(k) +
                             " outside [1, " + std::to_string(bound) + "]");
      }
    }
  } else {
    if (w.betas.size() != count) throw ParameterError("nuclear-norm solvers need one beta per weight");
    for (std::size_t k = 0; k < count; ++k) {
      if (w.alphas[k] > 0.0 && !(w.betas[k] > 0.0)) throw ParameterError("beta must be positive where alpha is");
    }
  }
  if (truth != nullptr && truth->dims() != mask.dims()) throw ShapeError("ground truth dims do not match mask");
  if (mask.observed_count() == 0) {
    throw DegenerateInputError("no observed entries: the all-zero tensor is a trivial fixed point");
  }
}

std::vector<std::size_t> active_blocks(const WeightScheme& w) {
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < w.alphas.size(); ++k) {
    if (w.alphas[k] > 0.0) active.push_back(k);
  }
  return active;
}

struct Progress {
  double denominator = 1.0;
  const DenseTensor* truth = nullptr;
  double truth_norm = 0.0;
};

Progress make_progress(const ObservationMask& mask, const DenseTensor* truth) {
  Progress p;
  p.truth = truth;
  if (truth != nullptr) {
    p.truth_norm = frobenius_norm(*truth);
    p.denominator = p.truth_norm;
  } else {
    p.denominator = mask.observed_norm();
  }
  if (!(p.denominator > 0.0)) p.denominator = 1.0;
  return p;
}

double relative_change(const DenseTensor& next, const DenseTensor& prev, double denominator) {
  double s = 0.0;
  for (std::size_t i = 0; i < next.size(); ++i) {
    const double d = next[i] - prev[i];
    s += d * d;
  }
  return std::sqrt(s) / denominator;
}

double rse_against(const DenseTensor& x, const Progress& p) {
  if (p.truth == nullptr || !(p.truth_norm > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - (*p.truth)[i];
    s += d * d;
  }
  return std::sqrt(s) / p.truth_norm;
}

double squared_distance(const DenseTensor& a, const DenseTensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

CompletionReport nuclear_norm_bcd(const ObservationMask& mask, const SolverConfig& config, const DenseTensor* truth) {
  const auto start = Clock::now();
  const WeightScheme& w = config.weights;
  const UnfoldKind kind = unfold_kind(w.family);
  const std::vector<std::size_t> active = active_blocks(w);
  const Progress progress = make_progress(mask, truth);

  double beta_total = 0.0;
  for (std::size_t k : active) beta_total += w.betas[k];

  CompletionReport report;
  DenseTensor x = init_tensor(mask, config.init);
  std::vector<DenseTensor> folded(active.size());
  std::vector<double> shrunk_norm(active.size());

  for (std::size_t it = 0; it < config.maxiter; ++it) {
    const auto iter_start = Clock::now();
    parallel_for(active.size(), config.threads, [&](std::size_t a) {
      const std::size_t k = active[a];
      const Matricization unf = unfold(x, kind, k + 1);
      const Shrinkage s = svt_detailed(unf.matrix, w.alphas[k] / w.betas[k]);
      folded[a] = fold(s.value, unf.provenance);
      shrunk_norm[a] = s.nuclear_norm;
    });

    DenseTensor next(x.dims());
    for (std::size_t a = 0; a < active.size(); ++a) {
      const double weight = w.betas[active[a]] / beta_total;
      const DenseTensor& m = folded[a];
      for (std::size_t i = 0; i < next.size(); ++i) next[i] += weight * m[i];
    }
    mask.project(next);

    IterationRecord rec;
    rec.epsilon = relative_change(next, x, progress.denominator);
    rec.rse = rse_against(next, progress);
    for (std::size_t a = 0; a < active.size(); ++a) {
      const std::size_t k = active[a];
      rec.objective += w.alphas[k] * shrunk_norm[a] + 0.5 * w.betas[k] * squared_distance(next, folded[a]);
    }
    x = std::move(next);
    rec.seconds = seconds_since(iter_start);
    report.history.push_back(rec);
    report.iterations = it + 1;
    if (rec.epsilon <= config.tol) {
      report.converged = true;
      break;
    }
  }
  report.recovered = std::move(x);
  report.wall_time = seconds_since(start);
  return report;
}

Matrix gaussian_matrix(CounterRng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  }
  return m;
}

CompletionReport parallel_factorization(const ObservationMask& mask, const SolverConfig& config,
                                        const DenseTensor* truth) {
  const auto start = Clock::now();
  const WeightScheme& w = config.weights;
  const UnfoldKind kind = unfold_kind(w.family);
  const std::vector<std::size_t> active = active_blocks(w);
  const Progress progress = make_progress(mask, truth);

  // One generator per unfolding so skipping zero-weight blocks leaves the
  // other streams untouched.
  std::vector<CounterRng> rngs;
  std::vector<Matrix> factors_v;
  for (std::size_t k : active) {
    rngs.emplace_back(derive_seed(config.seed, k + 1));
    const auto [rows, cols] = kind == UnfoldKind::ModeN ? mode_n_shape(mask.dims(), k + 1) : tt_shape(mask.dims(), k + 1);
    (void)rows;
    factors_v.push_back(gaussian_matrix(rngs.back(), static_cast<Eigen::Index>(config.ranks[k]),
                                        static_cast<Eigen::Index>(cols)));
  }

  CompletionReport report;
  DenseTensor x = init_tensor(mask, config.init);
  std::vector<DenseTensor> folded(active.size());

  for (std::size_t it = 0; it < config.maxiter; ++it) {
    const auto iter_start = Clock::now();
    parallel_for(active.size(), config.threads, [&](std::size_t a) {
      const Matricization unf = unfold(x, kind, active[a] + 1);
      FactorBlock b = factor_block_update(unf.matrix, factors_v[a]);
      if (b.v.cwiseAbs().maxCoeff() == 0.0) {
        // Degenerate start (e.g. X_k = 0): redraw V so the next sweep can move.
        b.v = gaussian_matrix(rngs[a], b.v.rows(), b.v.cols());
      }
      factors_v[a] = std::move(b.v);
      folded[a] = fold(b.product, unf.provenance);
    });

    DenseTensor next(x.dims());
    for (std::size_t a = 0; a < active.size(); ++a) {
      const double weight = w.alphas[active[a]];
      const DenseTensor& m = folded[a];
      for (std::size_t i = 0; i < next.size(); ++i) next[i] += weight * m[i];
    }
    mask.project(next);

    IterationRecord rec;
    rec.epsilon = relative_change(next, x, progress.denominator);
    rec.rse = rse_against(next, progress);
    for (std::size_t a = 0; a < active.size(); ++a) {
      rec.objective += 0.5 * w.alphas[active[a]] * squared_distance(next, folded[a]);
    }
    x = std::move(next);
    rec.seconds = seconds_since(iter_start);
    report.history.push_back(rec);
    report.iterations = it + 1;
    if (rec.epsilon <= config.tol) {
      report.converged = true;
      break;
    }
  }
  report.recovered = std::move(x);
  report.wall_time = seconds_since(start);
  return report;
}

}  // namespace

CompletionReport silrtc_tt(const ObservationMask& mask, const SolverConfig& config, const DenseTensor* truth) {
  validate_config(mask, config, false, {WeightFamily::TensorTrain, WeightFamily::Square}, truth);
  return nuclear_norm_bcd(mask, config, truth);
}

CompletionReport tmac_tt(const ObservationMask& mask, const SolverConfig& config, const DenseTensor* truth) {
  validate_config(mask, config, true, {WeightFamily::TensorTrain, WeightFamily::Square}, truth);
  return parallel_factorization(mask, config, truth);
}

CompletionReport silrtc(const ObservationMask& mask, const SolverConfig& config, const DenseTensor* truth) {
  validate_config(mask, config, false, {WeightFamily::Tucker}, truth);
  return nuclear_norm_bcd(mask, config, truth);
}

CompletionReport tmac(const ObservationMask& mask, const SolverConfig& config, const DenseTensor* truth) {
  validate_config(mask, config, true, {WeightFamily::Tucker}, truth);
  return parallel_factorization(mask, config, truth);
}

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::SiLRTC: return "silrtc";
    case Algorithm::SiLRTCSquare: return "silrtc-square";
    case Algorithm::SiLRTCTT: return "silrtc-tt";
    case Algorithm::TMac: return "tmac";
    case Algorithm::TMacSquare: return "tmac-square";
    case Algorithm::TMacTT: return "tmac-tt";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

WeightFamily algorithm_family(Algorithm a) {
  switch (a) {
    case Algorithm::SiLRTC:
    case Algorithm::TMac: return WeightFamily::Tucker;
    case Algorithm::SiLRTCSquare:
    case Algorithm::TMacSquare: return WeightFamily::Square;
    case Algorithm::SiLRTCTT:
    case Algorithm::TMacTT: return WeightFamily::TensorTrain;
  }
  return WeightFamily::TensorTrain;
}

bool uses_factorization(Algorithm a) {
  return a == Algorithm::TMac || a == Algorithm::TMacSquare || a == Algorithm::TMacTT;
}

CompletionReport run_algorithm(Algorithm a, const ObservationMask& mask, const SolverConfig& config,
                               const DenseTensor* truth) {
  if (config.weights.family != algorithm_family(a)) {
    throw ParameterError(std::string(algorithm_name(a)) + " expects '" +
                         std::string(family_name(algorithm_family(a))) + "' weights");
  }
  switch (a) {
    case Algorithm::SiLRTC: return silrtc(mask, config, truth);
    case Algorithm::SiLRTCSquare:
    case Algorithm::SiLRTCTT: return silrtc_tt(mask, config, truth);
    case Algorithm::TMac: return tmac(mask, config, truth);
    case Algorithm::TMacSquare:
    case Algorithm::TMacTT: return tmac_tt(mask, config, truth);
  }
  throw ParameterError("unknown algorithm");
}

}  // namespace ttc
