#pragma once

// Ket augmentation: a 2^n x 2^n x 3 image becomes an (n+1)-order tensor of
// shape 4 x ... x 4 x 3 with the same entries.
//
// Within every 2x2 block the label i = 1, 2, 3, 4 selects the up-left,
// up-right, down-left and down-right pixel ("up" = smaller row index, "left"
// = smaller column index). Label i_1 addresses pixels inside the finest 2x2
// blocks, i_2 the 2x2 arrangement of those blocks, and so on up to i_n. The
// augmented modes are ordered (i_n, ..., i_1, j): coarsest block first, color
// last.

#include <cstddef>

#include "ttc/mask.hpp"
#include "ttc/tensor.hpp"

namespace ttc {

struct KaLayout {
  std::size_t depth = 0;  // n
  Dims dims;              // n fours, then 3

  std::size_t order() const noexcept { return dims.size(); }
  std::size_t side() const noexcept { return std::size_t{1} << depth; }
};

// Layout for an H x W x 3 image; ShapeError unless H == W == 2^n, n >= 1.
KaLayout ka_layout_for_image(const Dims& image_dims);
// Layout for an augmented tensor; ShapeError unless dims are (4, ..., 4, 3).
KaLayout ka_layout_for_augmented(const Dims& aug_dims);

// Flat offset in the augmented tensor of pixel (row, col, channel), 0-based.
std::size_t ka_offset(std::size_t row, std::size_t col, std::size_t channel, std::size_t depth);

DenseTensor ka_forward(const DenseTensor& image);
DenseTensor ka_inverse(const DenseTensor& augmented);
// Push an observation mask over image entries through the augmentation.
ObservationMask ka_mask(const ObservationMask& image_mask);

}  // namespace ttc
