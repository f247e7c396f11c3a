#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ttc/linalg.hpp"
#include "ttc/mask.hpp"
#include "ttc/solver.hpp"
#include "ttc/tensor.hpp"

namespace ttc {

// ||X - T||_F / ||T||_F. Throws NumericError when T is zero.
double rse(const DenseTensor& x, const DenseTensor& truth);

inline double missing_ratio(const ObservationMask& mask) { return mask.missing_ratio(); }

// Von Neumann entropy of the normalized squared singular values, base 2.
// Throws NumericError for the zero matrix.
double vn_entropy(const Matrix& m);

std::vector<std::size_t> tt_rank_profile(const DenseTensor& x, double tol = kRankTolerance);
std::vector<std::size_t> tucker_rank_profile(const DenseTensor& x, double tol = kRankTolerance);
std::vector<double> tt_entropy_profile(const DenseTensor& x);

enum class CellOutcome { Success, Partial, Failed, Error };

struct PhaseDiagram {
  std::vector<std::size_t> rank_axis;
  std::vector<double> mr_axis;
  std::vector<double> rse;          // row-major: rank index major, mr index minor
  std::vector<std::string> errors;  // same layout; empty when the cell ran
  double epsilon = 1e-2;

  double at(std::size_t rank_index, std::size_t mr_index) const { return rse[rank_index * mr_axis.size() + mr_index]; }
  // Success iff RSE <= epsilon; Failed iff RSE >= 1.
  CellOutcome classify(std::size_t rank_index, std::size_t mr_index) const;
  // Header row is the mr axis, first column the rank axis.
  std::string to_csv() const;
  // Binary PGM: one pixel per cell, rows = ranks, columns = mr. White (255)
  // marks success; other cells get gray 254 * (1 - min(RSE, 1)); errors are 0.
  std::string to_pgm() const;
};

struct PhaseGridSpec {
  Algorithm algorithm = Algorithm::TMacTT;
  WeightFamily truth_family = WeightFamily::TensorTrain;  // TensorTrain or Tucker ground truth
  Dims dims;
  std::vector<std::size_t> rank_axis;
  std::vector<double> mr_axis;
  double epsilon = 1e-2;
  std::size_t seeds = 1;
  std::uint64_t seed = 0;
  double f = 0.0;  // <= 0 sweeps the f grid
  double tol = 1e-4;
  std::size_t maxiter = 1000;
  InitMode init = InitMode::ZeroFill;
  unsigned jobs = 1;
};

// One completion per (rank, mr, seed) cell, averaged over seeds. A failing
// cell records its error and leaves the rest of the grid running.
PhaseDiagram phase_grid(const PhaseGridSpec& spec);

}  // namespace ttc
