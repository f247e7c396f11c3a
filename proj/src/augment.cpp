#include "ttc/augment.hpp"

#include <string>

namespace ttc {

KaLayout ka_layout_for_image(const Dims& image_dims) {
  validate_dims(image_dims);
  if (image_dims.size() != 3 || image_dims[2] != 3) {
    throw ShapeError("ket augmentation needs an H x W x 3 image");
  }
  const std::size_t side = image_dims[0];
  if (image_dims[1] != side) throw ShapeError("ket augmentation needs a square image");
  if (side < 2 || (side & (side - 1)) != 0) throw ShapeError("image side " + std::to_string(side) + " is not a power of 2");
  KaLayout layout;
  while ((std::size_t{1} << layout.depth) < side) ++layout.depth;
  layout.dims.assign(layout.depth, 4);
  layout.dims.push_back(3);
  return layout;
}

KaLayout ka_layout_for_augmented(const Dims& aug_dims) {
  validate_dims(aug_dims);
  if (aug_dims.size() < 2 || aug_dims.back() != 3) throw ShapeError("augmented tensor must end in a color mode of size 3");
  for (std::size_t k = 0; k + 1 < aug_dims.size(); ++k) {
    if (aug_dims[k] != 4) throw ShapeError("augmented block modes must have size 4");
  }
  KaLayout layout;
  layout.depth = aug_dims.size() - 1;
  layout.dims = aug_dims;
  return layout;
}

std::size_t ka_offset(std::size_t row, std::size_t col, std::size_t channel, std::size_t depth) {
  // Level l (1 = finest) reads bit l-1 of row and column and sits in mode
  // n + 1 - l, whose stride is 4^(n - l).
  std::size_t offset = 0;
  std::size_t stride = std::size_t{1} << (2 * (depth - 1));
  for (std::size_t level = 1; level <= depth; ++level) {
    const std::size_t quadrant = 2 * ((row >> (level - 1)) & 1U) + ((col >> (level - 1)) & 1U);
    offset += quadrant * stride;
    stride >>= 2;
  }
  return offset + channel * (std::size_t{1} << (2 * depth));
}

DenseTensor ka_forward(const DenseTensor& image) {
  const KaLayout layout = ka_layout_for_image(image.dims());
  const std::size_t side = layout.side();
  DenseTensor out(layout.dims);
  for (std::size_t ch = 0; ch < 3; ++ch) {
    for (std::size_t c = 0; c < side; ++c) {
      for (std::size_t r = 0; r < side; ++r) {
        out[ka_offset(r, c, ch, layout.depth)] = image[r + side * (c + side * ch)];
      }
    }
  }
  return out;
}

DenseTensor ka_inverse(const DenseTensor& augmented) {
  const KaLayout layout = ka_layout_for_augmented(augmented.dims());
  const std::size_t side = layout.side();
  DenseTensor out(Dims{side, side, 3});
  for (std::size_t ch = 0; ch < 3; ++ch) {
    for (std::size_t c = 0; c < side; ++c) {
      for (std::size_t r = 0; r < side; ++r) {
        out[r + side * (c + side * ch)] = augmented[ka_offset(r, c, ch, layout.depth)];
      }
    }
  }
  return out;
}

ObservationMask ka_mask(const ObservationMask& image_mask) {
  const KaLayout layout = ka_layout_for_image(image_mask.dims());
  const std::size_t side = layout.side();
  std::vector<std::size_t> offsets;
  offsets.reserve(image_mask.observed_count());
  for (std::size_t off : image_mask.offsets()) {
    const std::size_t r = off % side;
    const std::size_t c = (off / side) % side;
    const std::size_t ch = off / (side * side);
    offsets.push_back(ka_offset(r, c, ch, layout.depth));
  }
  const auto v = image_mask.values();
  return ObservationMask(layout.dims, std::move(offsets), std::vector<double>(v.begin(), v.end()));
}

}  // namespace ttc
