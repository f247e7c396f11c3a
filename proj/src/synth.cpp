#include "ttc/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ttc/random.hpp"

namespace ttc {

TtCores gen_tt_cores(const Dims& dims, const std::vector<std::size_t>& ranks, std::uint64_t seed) {
  validate_dims(dims);
  if (ranks.size() + 1 != dims.size()) {
    throw ParameterError("a TT of order " + std::to_string(dims.size()) + " needs " +
                         std::to_string(dims.size() - 1) + " ranks, got " + std::to_string(ranks.size()));
  }
  for (std::size_t r : ranks) {
    if (r < 1) throw ParameterError("TT ranks must be >= 1");
  }
  TtCores tt;
  tt.dims = dims;
  tt.bonds.push_back(1);
  tt.bonds.insert(tt.bonds.end(), ranks.begin(), ranks.end());
  tt.bonds.push_back(1);
  CounterRng rng(seed);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    std::vector<double> core(tt.bonds[k] * dims[k] * tt.bonds[k + 1]);
    for (double& v : core) v = rng.normal();
    tt.cores.push_back(std::move(core));
  }
  return tt;
}

DenseTensor contract(const TtCores& tt) {
  // Left partial product, (I_1 ... I_k) x bond[k+1], column-major. Multiplying
  // by core k+1 viewed as bond x (I x bond') yields the next partial product
  // with no reshuffling.
  Matrix left = Eigen::Map<const Matrix>(tt.cores[0].data(), static_cast<Eigen::Index>(tt.dims[0]),
                                         static_cast<Eigen::Index>(tt.bonds[1]));
  for (std::size_t k = 1; k < tt.dims.size(); ++k) {
    Eigen::Map<const Matrix> core(tt.cores[k].data(), static_cast<Eigen::Index>(tt.bonds[k]),
                                  static_cast<Eigen::Index>(tt.dims[k] * tt.bonds[k + 1]));
    const Matrix product = left * core;
    left = Eigen::Map<const Matrix>(product.data(), product.rows() * static_cast<Eigen::Index>(tt.dims[k]),
                                    static_cast<Eigen::Index>(tt.bonds[k + 1]));
  }
  return DenseTensor(tt.dims, std::vector<double>(left.data(), left.data() + left.size()));
}

DenseTensor gen_tt_tensor(const Dims& dims, const std::vector<std::size_t>& ranks, std::uint64_t seed) {
  return contract(gen_tt_cores(dims, ranks, seed));
}

DenseTensor gen_tucker_tensor(const Dims& dims, const std::vector<std::size_t>& ranks, std::uint64_t seed) {
  validate_dims(dims);
  if (ranks.size() != dims.size()) {
    throw ParameterError("Tucker generator needs one rank per mode (" + std::to_string(dims.size()) + "), got " +
                         std::to_string(ranks.size()));
  }
  for (std::size_t r : ranks) {
    if (r < 1) throw ParameterError("Tucker ranks must be >= 1");
  }
  CounterRng rng(seed);
  DenseTensor t(Dims(ranks.begin(), ranks.end()));
  for (double& v : t.values()) v = rng.normal();
  for (std::size_t k = 0; k < dims.size(); ++k) {
    Matrix factor(static_cast<Eigen::Index>(dims[k]), static_cast<Eigen::Index>(ranks[k]));
    for (Eigen::Index j = 0; j < factor.cols(); ++j) {
      for (Eigen::Index i = 0; i < factor.rows(); ++i) factor(i, j) = rng.normal();
    }
    t = mode_n_product(t, factor, k + 1);
  }
  return t;
}

std::size_t missing_count(std::size_t total, double mr) {
  return static_cast<std::size_t>(std::llround(mr * static_cast<double>(total)));
}

std::vector<std::size_t> gen_observed_offsets(const Dims& dims, double mr, std::uint64_t seed) {
  validate_dims(dims);
  if (!(mr >= 0.0 && mr < 1.0)) throw ParameterError("missing ratio must lie in [0, 1)");
  const std::size_t total = dim_product(dims);
  const std::size_t missing = missing_count(total, mr);
  // Partial Fisher-Yates: the first `missing` slots become the missing set.
  std::vector<std::size_t> perm(total);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  CounterRng rng(seed);
  for (std::size_t i = 0; i < missing; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(total - i));
    std::swap(perm[i], perm[j]);
  }
  std::vector<std::size_t> observed(perm.begin() + static_cast<std::ptrdiff_t>(missing), perm.end());
  std::sort(observed.begin(), observed.end());
  return observed;
}

ObservationMask gen_mask(const DenseTensor& truth, double mr, std::uint64_t seed) {
  return ObservationMask::observe(truth, gen_observed_offsets(truth.dims(), mr, seed));
}

namespace {

constexpr std::size_t kGlyphWidth = 5;
constexpr std::size_t kGlyphHeight = 7;

// Rows top to bottom; bit 4 is the leftmost column.
const std::array<std::uint8_t, kGlyphHeight>* glyph(char c) {
  struct Entry {
    char c;
    std::array<std::uint8_t, kGlyphHeight> rows;
  };
  static const Entry font[] = {
      {'A', {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}}, {'B', {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}},
      {'C', {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}}, {'D', {0x1E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1E}},
      {'E', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}}, {'F', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}},
      {'G', {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}}, {'H', {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
      {'I', {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}}, {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C}},
      {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}}, {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
      {'M', {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}}, {'N', {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11}},
      {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}, {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
      {'Q', {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}}, {'R', {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}},
      {'S', {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}}, {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
      {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}, {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}},
      {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}}, {'X', {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}},
      {'Y', {0x11, 0x11, 0x11, 0x0A, 0x04, 0x04, 0x04}}, {'Z', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}},
      {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}}, {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
      {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}}, {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
      {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}}, {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
      {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}}, {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
      {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}}, {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
      {' ', {0, 0, 0, 0, 0, 0, 0}},                      {'.', {0, 0, 0, 0, 0, 0x0C, 0x0C}},
      {',', {0, 0, 0, 0, 0x0C, 0x04, 0x08}},             {'-', {0, 0, 0, 0x1F, 0, 0, 0}},
      {'!', {0x04, 0x04, 0x04, 0x04, 0x04, 0x00, 0x04}}, {'?', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x00, 0x04}},
  };
  const char upper = (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
  for (const Entry& e : font) {
    if (e.c == upper) return &e.rows;
  }
  return nullptr;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  if (lines.empty()) lines.emplace_back();
  return lines;
}

}  // namespace

std::vector<std::size_t> text_observed_offsets(const Dims& image_dims, const TextOverlay& overlay) {
  validate_dims(image_dims);
  if (image_dims.size() != 3 || image_dims[2] != 3) throw ShapeError("text mask needs an H x W x 3 image");
  const std::size_t height = image_dims[0];
  const std::size_t width = image_dims[1];
  const std::vector<std::string> lines = split_lines(overlay.text);
  std::size_t longest = 0;
  for (const auto& line : lines) {
    for (char c : line) {
      if (glyph(c) == nullptr) throw ParameterError(std::string("no glyph for character '") + c + "'");
    }
    longest = std::max(longest, line.size());
  }
  const std::size_t cell_w = kGlyphWidth + 1;
  const std::size_t cell_h = kGlyphHeight + 1;
  std::size_t scale = overlay.scale;
  if (scale == 0) {
    scale = longest == 0 ? 1 : std::max<std::size_t>(1, (width * 9 / 10) / (cell_w * longest));
    scale = std::min(scale, std::max<std::size_t>(1, (height * 9 / 10) / (cell_h * lines.size())));
  }

  std::vector<std::uint8_t> hidden(height * width, 0);
  const std::size_t block_h = cell_h * scale * lines.size();
  const std::size_t top = block_h < height ? (height - block_h) / 2 : 0;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string& line = lines[li];
    const std::size_t line_w = cell_w * scale * line.size();
    const std::size_t left = line_w < width ? (width - line_w) / 2 : 0;
    for (std::size_t ci = 0; ci < line.size(); ++ci) {
      const auto& rows = *glyph(line[ci]);
      for (std::size_t gy = 0; gy < kGlyphHeight; ++gy) {
        for (std::size_t gx = 0; gx < kGlyphWidth; ++gx) {
          if (((rows[gy] >> (kGlyphWidth - 1 - gx)) & 1U) == 0) continue;
          for (std::size_t sy = 0; sy < scale; ++sy) {
            for (std::size_t sx = 0; sx < scale; ++sx) {
              const std::size_t r = top + (li * cell_h + gy) * scale + sy;
              const std::size_t c = left + (ci * cell_w + gx) * scale + sx;
              if (r < height && c < width) hidden[r * width + c] = 1;
            }
          }
        }
      }
    }
  }

  std::vector<std::size_t> observed;
  observed.reserve(height * width * 3);
  for (std::size_t ch = 0; ch < 3; ++ch) {
    for (std::size_t c = 0; c < width; ++c) {
      for (std::size_t r = 0; r < height; ++r) {
        if (hidden[r * width + c] == 0) observed.push_back(r + height * (c + width * ch));
      }
    }
  }
  return observed;
}

ObservationMask text_mask(const DenseTensor& image, const TextOverlay& overlay) {
  return ObservationMask::observe(image, text_observed_offsets(image.dims(), overlay));
}

}  // namespace ttc
