#pragma once

// Synthetic ground truth and random observation patterns.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ttc/mask.hpp"
#include "ttc/tensor.hpp"

namespace ttc {

// Cores of a tensor train. Core k (0-based) has shape
// bond[k] x dims[k] x bond[k+1], stored column-major, with bond[0] = bond[N] = 1.
struct TtCores {
  Dims dims;
  std::vector<std::size_t> bonds;  // N + 1 entries
  std::vector<std::vector<double>> cores;

  // Core k, entry (a, i, b), all 0-based.
  double at(std::size_t k, std::size_t a, std::size_t i, std::size_t b) const {
    return cores[k][a + bonds[k] * (i + dims[k] * b)];
  }
};

// Standard Gaussian cores with interior bonds `ranks` (length N - 1).
TtCores gen_tt_cores(const Dims& dims, const std::vector<std::size_t>& ranks, std::uint64_t seed);
// Full contraction of the train.
DenseTensor contract(const TtCores& cores);
DenseTensor gen_tt_tensor(const Dims& dims, const std::vector<std::size_t>& ranks, std::uint64_t seed);

// G x_1 A_1 ... x_N A_N with a Gaussian core of shape ranks and Gaussian
// I_k x r_k factors.
DenseTensor gen_tucker_tensor(const Dims& dims, const std::vector<std::size_t>& ranks, std::uint64_t seed);

// round(mr * total), halves away from zero.
std::size_t missing_count(std::size_t total, double mr);

// Observed offsets (sorted) after removing exactly missing_count entries
// chosen uniformly without replacement. Requires 0 <= mr < 1.
std::vector<std::size_t> gen_observed_offsets(const Dims& dims, double mr, std::uint64_t seed);
ObservationMask gen_mask(const DenseTensor& truth, double mr, std::uint64_t seed);

// Text drawn with a 5x7 bitmap font. Lines are separated by '\n'. A zero
// scale picks the largest integer scale that fits the longest line into 90%
// of the width; text is centered.
struct TextOverlay {
  std::string text = "TENSOR\nTRAIN";
  std::size_t scale = 0;
};

// Pixels of an H x W x 3 image covered by glyph strokes are missing in all
// three channels; everything else is observed.
std::vector<std::size_t> text_observed_offsets(const Dims& image_dims, const TextOverlay& overlay);
ObservationMask text_mask(const DenseTensor& image, const TextOverlay& overlay);

}  // namespace ttc
