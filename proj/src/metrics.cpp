#include "ttc/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "ttc/experiments.hpp"
#include "ttc/parallel.hpp"

namespace ttc {

double rse(const DenseTensor& x, const DenseTensor& truth) {
  if (x.dims() != truth.dims()) throw ShapeError("rse: dims mismatch");
  const double denom = frobenius_norm(truth);
  if (!(denom > 0.0)) throw NumericError("rse: ground truth has zero norm");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - truth[i];
    s += d * d;
  }
  return std::sqrt(s) / denom;
}

double vn_entropy(const Matrix& m) {
  const Vector sigma = singular_values(m);
  const double total = sigma.squaredNorm();
  if (!(total > 0.0)) throw NumericError("entropy of the zero matrix is undefined");
  double s = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const double p = sigma(i) * sigma(i) / total;
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

std::vector<std::size_t> tt_rank_profile(const DenseTensor& x, double tol) {
  std::vector<std::size_t> ranks;
  for (std::size_t k = 1; k < x.order(); ++k) ranks.push_back(numerical_rank(matricize_tt(x, k).matrix, tol));
  return ranks;
}

std::vector<std::size_t> tucker_rank_profile(const DenseTensor& x, double tol) {
  std::vector<std::size_t> ranks;
  for (std::size_t n = 1; n <= x.order(); ++n) ranks.push_back(numerical_rank(matricize_mode_n(x, n).matrix, tol));
  return ranks;
}

std::vector<double> tt_entropy_profile(const DenseTensor& x) {
  std::vector<double> out;
  for (std::size_t k = 1; k < x.order(); ++k) out.push_back(vn_entropy(matricize_tt(x, k).matrix));
  return out;
}

CellOutcome PhaseDiagram::classify(std::size_t rank_index, std::size_t mr_index) const {
  const std::size_t cell = rank_index * mr_axis.size() + mr_index;
  if (!errors.empty() && !errors[cell].empty()) return CellOutcome::Error;
  const double v = rse[cell];
  if (!std::isfinite(v)) return CellOutcome::Error;
  if (v <= epsilon) return CellOutcome::Success;
  if (v >= 1.0) return CellOutcome::Failed;
  return CellOutcome::Partial;
}

std::string PhaseDiagram::to_csv() const {
  std::string out = "rank";
  char buf[64];
  for (double mr : mr_axis) {
    std::snprintf(buf, sizeof buf, ",%.6g", mr);
    out += buf;
  }
  out += '\n';
  for (std::size_t r = 0; r < rank_axis.size(); ++r) {
    out += std::to_string(rank_axis[r]);
    for (std::size_t m = 0; m < mr_axis.size(); ++m) {
      std::snprintf(buf, sizeof buf, ",%.9e", at(r, m));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string PhaseDiagram::to_pgm() const {
  std::string out = "P5\n" + std::to_string(mr_axis.size()) + " " + std::to_string(rank_axis.size()) + "\n255\n";
  for (std::size_t r = 0; r < rank_axis.size(); ++r) {
    for (std::size_t m = 0; m < mr_axis.size(); ++m) {
      unsigned char level = 0;
      switch (classify(r, m)) {
        case CellOutcome::Success: level = 255; break;
        case CellOutcome::Failed:
        case CellOutcome::Error: level = 0; break;
        case CellOutcome::Partial:
          level = static_cast<unsigned char>(std::lround(254.0 * (1.0 - at(r, m))));
          break;
      }
      out.push_back(static_cast<char>(level));
    }
  }
  return out;
}

PhaseDiagram phase_grid(const PhaseGridSpec& spec) {
  if (spec.rank_axis.empty() || spec.mr_axis.empty()) throw ParameterError("phase grid axes must be nonempty");
  if (spec.seeds < 1) throw ParameterError("phase grid needs at least one seed per cell");
  validate_dims(spec.dims);
  const std::size_t n_rank = spec.rank_axis.size();
  const std::size_t n_mr = spec.mr_axis.size();
  const std::size_t n_cells = n_rank * n_mr * spec.seeds;

  SolveOptions options;
  options.f = spec.f;
  options.tol = spec.tol;
  options.maxiter = spec.maxiter;
  options.init = spec.init;

  std::vector<TrialResult> trials(n_cells);
  parallel_for(n_cells, spec.jobs, [&](std::size_t cell) {
    const std::size_t s = cell % spec.seeds;
    const std::size_t m = (cell / spec.seeds) % n_mr;
    const std::size_t r = cell / (spec.seeds * n_mr);
    GroundTruthSpec truth;
    truth.family = spec.truth_family;
    truth.dims = spec.dims;
    const std::size_t count = spec.truth_family == WeightFamily::Tucker ? spec.dims.size() : spec.dims.size() - 1;
    truth.ranks.assign(count, spec.rank_axis[r]);
    trials[cell] = run_synthetic_trial(spec.algorithm, truth, spec.mr_axis[m], spec.seed + s, options);
  });

  PhaseDiagram d;
  d.rank_axis = spec.rank_axis;
  d.mr_axis = spec.mr_axis;
  d.epsilon = spec.epsilon;
  d.rse.assign(n_rank * n_mr, 0.0);
  d.errors.assign(n_rank * n_mr, std::string());
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    const std::size_t grid = cell / spec.seeds;
    const TrialResult& t = trials[cell];
    if (!t.error.empty()) {
      if (d.errors[grid].empty()) d.errors[grid] = t.error;
      d.rse[grid] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    d.rse[grid] += t.rse / static_cast<double>(spec.seeds);
  }
  return d;
}

}  // namespace ttc
