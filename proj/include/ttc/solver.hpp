#pragma once

// Low-rank tensor completion solvers.
//
// Two update skeletons, each run over either matricization family:
//
//   nuclear-norm BCD      M_k <- svt(X_k, alpha_k / beta_k)
//                         X   <- sum_k beta_k fold(M_k) / sum_k beta_k  on missing entries
//
//   parallel factorization U_k <- X_k V_k^T
//                         V_k <- (U_k^T U_k)^+ U_k^T X_k
//                         X   <- sum_k alpha_k fold(U_k V_k)            on missing entries
//
// X_k is the mode-(1..k) unfolding for the TT and Square weight families and
// the mode-k unfolding for the Tucker family. Observed entries are pinned to
// T_Omega after every iteration.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ttc/mask.hpp"
#include "ttc/tensor.hpp"

namespace ttc {

enum class WeightFamily { TensorTrain, Tucker, Square };

struct WeightScheme {
  WeightFamily family = WeightFamily::TensorTrain;
  std::vector<double> alphas;
  std::vector<double> betas;  // f * alphas
  double f = 1.0;
};

// Weight formulas:
//   TT      alpha_k ∝ min(prod_{l<=k} I_l, prod_{l>k} I_l),  k = 1..N-1
//   Tucker  alpha_k ∝ I_k,                                    k = 1..N
//   Square  alpha_k = 1 at k = round(N/2), else 0,            k = 1..N-1
WeightScheme make_weights(WeightFamily family, const Dims& dims, double f);

// The f grid swept when a solver's parameter is chosen automatically.
inline constexpr double kFGrid[] = {0.01, 0.05, 0.1, 0.5, 1.0};

UnfoldKind unfold_kind(WeightFamily family);
std::string_view family_name(WeightFamily family);
WeightFamily parse_family(std::string_view name);

enum class InitMode { ZeroFill, MeanFill };

struct SolverConfig {
  WeightScheme weights;
  std::vector<std::size_t> ranks;  // factorization solvers only
  double tol = 1e-4;
  std::size_t maxiter = 1000;
  std::uint64_t seed = 0;
  InitMode init = InitMode::ZeroFill;
  // Workers for the independent per-unfolding block updates. Results do not
  // depend on this value.
  unsigned threads = 1;
};

struct IterationRecord {
  double epsilon = 0.0;    // ||X^{l+1} - X^l||_F / ||T||_F
  double rse = 0.0;        // NaN without ground truth
  double objective = 0.0;  // model objective after the iteration
  double seconds = 0.0;
};

struct CompletionReport {
  DenseTensor recovered;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<IterationRecord> history;
  double wall_time = 0.0;

  double final_epsilon() const { return history.empty() ? 0.0 : history.back().epsilon; }
  double final_rse() const;
};

// X^0: T_Omega on observed entries; zero or the observed mean elsewhere.
DenseTensor init_tensor(const ObservationMask& mask, InitMode init);

// `truth`, when given, supplies ||T||_F for the stopping rule and the per
// iteration RSE. Without it the observed entries stand in for T.
CompletionReport silrtc_tt(const ObservationMask& mask, const SolverConfig& config,
                           const DenseTensor* truth = nullptr);
CompletionReport tmac_tt(const ObservationMask& mask, const SolverConfig& config,
                         const DenseTensor* truth = nullptr);
CompletionReport silrtc(const ObservationMask& mask, const SolverConfig& config,
                        const DenseTensor* truth = nullptr);
CompletionReport tmac(const ObservationMask& mask, const SolverConfig& config, const DenseTensor* truth = nullptr);

// One factorization block update for a fixed unfolding. With `shortcut` the
// U step skips the (V V^T)^+ factor; the product U V is unchanged when V has
// full row rank.
struct FactorBlock {
  Matrix u;
  Matrix v;
  Matrix product;
};
FactorBlock factor_block_update(const Matrix& unfolding, const Matrix& v_prev, bool shortcut = true);

enum class Algorithm { SiLRTC, SiLRTCSquare, SiLRTCTT, TMac, TMacSquare, TMacTT };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::SiLRTC,     Algorithm::SiLRTCSquare,
                                               Algorithm::SiLRTCTT,   Algorithm::TMac,
                                               Algorithm::TMacSquare, Algorithm::TMacTT};

std::string_view algorithm_name(Algorithm a);
// Accepts silrtc, silrtc-square, silrtc-tt, tmac, tmac-square, tmac-tt.
std::optional<Algorithm> parse_algorithm(std::string_view name);
WeightFamily algorithm_family(Algorithm a);
bool uses_factorization(Algorithm a);

// Dispatch to the matching solver. `config.weights` must already belong to
// algorithm_family(a).
CompletionReport run_algorithm(Algorithm a, const ObservationMask& mask, const SolverConfig& config,
                               const DenseTensor* truth = nullptr);

// Upper bound on the rank of unfolding k (1-based) for a family.
std::size_t rank_bound(WeightFamily family, const Dims& dims, std::size_t k);

}  // namespace ttc
