#pragma once

// File formats.
//
// DTNS tensor   "DTNS" | u32 order N | N x u64 dims | prod(dims) x f64 values
// DMSK mask     "DMSK" | u32 order N | N x u64 dims | u64 count |
//               count x u64 offsets (strictly increasing) | count x f64 values
// Text tensor   line 1: N; line 2: dims; then one value per line
// PPM           binary P6, maxval 255
//
// Integers and floats are little-endian; values follow the tensor
// linearization (first index fastest). Parsers never read past the buffer and
// report malformed input as FormatError with the byte offset.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "ttc/mask.hpp"
#include "ttc/tensor.hpp"

namespace ttc {

// An RGB image as an H x W x 3 tensor (row index first) with values in [0, 1].
struct ImageBuffer {
  DenseTensor pixels;

  std::size_t height() const { return pixels.dims()[0]; }
  std::size_t width() const { return pixels.dims()[1]; }
};

// Clamp to [0, 1] and wrap an H x W x 3 tensor.
ImageBuffer image_from_tensor(const DenseTensor& t);

ImageBuffer parse_ppm(std::string_view bytes);
std::string encode_ppm(const ImageBuffer& image);
ImageBuffer read_ppm(const std::filesystem::path& path);
void write_ppm(const ImageBuffer& image, const std::filesystem::path& path);

DenseTensor parse_tensor(std::string_view bytes);
std::string encode_tensor(const DenseTensor& t);
DenseTensor read_tensor(const std::filesystem::path& path);
void write_tensor(const DenseTensor& t, const std::filesystem::path& path);

DenseTensor parse_tensor_text(std::string_view text);
std::string encode_tensor_text(const DenseTensor& t);

ObservationMask parse_mask(std::string_view bytes);
std::string encode_mask(const ObservationMask& mask);
ObservationMask read_mask(const std::filesystem::path& path);
void write_mask(const ObservationMask& mask, const std::filesystem::path& path);

// Whole-file helpers. Errors raise ttc::Error with the path.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Picks the tensor format from the extension: .txt is text, anything else DTNS.
DenseTensor load_tensor_any(const std::filesystem::path& path);
void save_tensor_any(const DenseTensor& t, const std::filesystem::path& path);

}  // namespace ttc
