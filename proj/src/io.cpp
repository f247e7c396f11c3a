#include "ttc/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

namespace ttc {
namespace {

constexpr std::size_t kMaxOrder = 64;
// Masks carry a per-entry bitmap, so their tensor size is capped.
constexpr std::size_t kMaxMaskEntries = std::size_t{1} << 28;

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  void expect_magic(std::string_view magic, const char* what) {
    if (remaining() < magic.size() || bytes_.substr(pos_, magic.size()) != magic) {
      throw FormatError(std::string("bad magic, not a ") + what + " file", pos_);
    }
    pos_ += magic.size();
  }

  std::uint64_t u(std::size_t width, const char* what) {
    if (remaining() < width) throw FormatError(std::string("truncated ") + what, pos_);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += width;
    return v;
  }

  double f64(const char* what) { return std::bit_cast<double>(u(8, what)); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

void put_u(std::string& out, std::uint64_t v, std::size_t width) {
  for (std::size_t i = 0; i < width; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFU));
}

void put_f64(std::string& out, double v) { put_u(out, std::bit_cast<std::uint64_t>(v), 8); }

// Reads order + dims and returns the element count, guarding overflow.
std::pair<Dims, std::size_t> read_dims(Reader& r) {
  const std::size_t at = r.pos();
  const auto order = r.u(4, "order");
  if (order == 0 || order > kMaxOrder) throw FormatError("order " + std::to_string(order) + " out of range", at);
  Dims dims;
  std::size_t total = 1;
  for (std::uint64_t k = 0; k < order; ++k) {
    const std::size_t dim_at = r.pos();
    const std::uint64_t d = r.u(8, "dims");
    if (d == 0) throw FormatError("zero dimension", dim_at);
    if (total > std::numeric_limits<std::size_t>::max() / d) throw FormatError("dims product overflows", dim_at);
    total *= static_cast<std::size_t>(d);
    dims.push_back(static_cast<std::size_t>(d));
  }
  return {dims, total};
}

void put_dims(std::string& out, const Dims& dims) {
  put_u(out, dims.size(), 4);
  for (std::size_t d : dims) put_u(out, d, 8);
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

ImageBuffer image_from_tensor(const DenseTensor& t) {
  if (t.order() != 3 || t.dims()[2] != 3) throw ShapeError("an image tensor must be H x W x 3");
  ImageBuffer img{t};
  for (double& v : img.pixels.values()) v = std::clamp(v, 0.0, 1.0);
  return img;
}

// --- PPM -------------------------------------------------------------------

ImageBuffer parse_ppm(std::string_view bytes) {
  std::size_t pos = 0;
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') throw FormatError("not a binary PPM (P6)", 0);
  pos = 2;
  auto skip_space = [&] {
    for (;;) {
      while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        continue;
      }
      return;
    }
  };
  auto number = [&](const char* what) -> std::size_t {
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
      throw FormatError(std::string("expected whitespace before ") + what, pos);
    }
    skip_space();
    const std::size_t start = pos;
    std::size_t v = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      if (v > 100000000) throw FormatError(std::string(what) + " too large", start);
      v = v * 10 + static_cast<std::size_t>(bytes[pos] - '0');
      ++pos;
    }
    if (pos == start) throw FormatError(std::string("expected ") + what, start);
    return v;
  };
  const std::size_t width = number("width");
  const std::size_t height = number("height");
  const std::size_t maxval_at = pos;
  const std::size_t maxval = number("maxval");
  if (width == 0 || height == 0) throw FormatError("zero image size", maxval_at);
  if (maxval != 255) throw FormatError("only maxval 255 is supported", maxval_at);
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw FormatError("expected a single whitespace byte after maxval", pos);
  }
  ++pos;
  const std::size_t need = width * height * 3;
  if (bytes.size() - pos < need) throw FormatError("truncated pixel payload", bytes.size());
  if (bytes.size() - pos > need) throw FormatError("trailing bytes after pixel payload", pos + need);
  DenseTensor t(Dims{height, width, 3});
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      for (std::size_t ch = 0; ch < 3; ++ch) {
        const auto byte = static_cast<unsigned char>(bytes[pos + (r * width + c) * 3 + ch]);
        t[r + height * (c + width * ch)] = static_cast<double>(byte) / 255.0;
      }
    }
  }
  return ImageBuffer{std::move(t)};
}

std::string encode_ppm(const ImageBuffer& image) {
  const std::size_t h = image.height();
  const std::size_t w = image.width();
  std::string out = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  out.reserve(out.size() + w * h * 3);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      for (std::size_t ch = 0; ch < 3; ++ch) {
        const double v = std::clamp(image.pixels[r + h * (c + w * ch)], 0.0, 1.0);
        out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
      }
    }
  }
  return out;
}

ImageBuffer read_ppm(const std::filesystem::path& path) { return parse_ppm(read_file(path)); }

void write_ppm(const ImageBuffer& image, const std::filesystem::path& path) { write_file(path, encode_ppm(image)); }

// --- DTNS ------------------------------------------------------------------

DenseTensor parse_tensor(std::string_view bytes) {
  Reader r(bytes);
  r.expect_magic("DTNS", "DTNS tensor");
  auto [dims, total] = read_dims(r);
  if (r.remaining() / 8 != total || r.remaining() % 8 != 0) {
    throw FormatError("payload holds " + std::to_string(r.remaining()) + " bytes, dims need " +
                          std::to_string(total) + " doubles",
                      r.pos());
  }
  std::vector<double> values(total);
  for (double& v : values) v = r.f64("values");
  return DenseTensor(std::move(dims), std::move(values));
}

std::string encode_tensor(const DenseTensor& t) {
  std::string out = "DTNS";
  put_dims(out, t.dims());
  out.reserve(out.size() + 8 * t.size());
  for (double v : t.values()) put_f64(out, v);
  return out;
}

DenseTensor read_tensor(const std::filesystem::path& path) { return parse_tensor(read_file(path)); }

void write_tensor(const DenseTensor& t, const std::filesystem::path& path) { write_file(path, encode_tensor(t)); }

// --- text tensor -----------------------------------------------------------

DenseTensor parse_tensor_text(std::string_view text) {
  std::size_t pos = 0;
  auto token = [&](const char* what) -> std::string {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) throw FormatError(std::string("expected ") + what, start);
    return std::string(text.substr(start, pos - start));
  };
  auto integer = [&](const char* what) -> std::size_t {
    const std::size_t at = pos;
    const std::string tok = token(what);
    if (tok.size() > 18 || tok.find_first_not_of("0123456789") != std::string::npos) {
      throw FormatError(std::string("bad ") + what + " '" + tok + "'", at);
    }
    return static_cast<std::size_t>(std::stoull(tok));
  };
  const std::size_t order_at = pos;
  const std::size_t order = integer("order");
  if (order == 0 || order > kMaxOrder) throw FormatError("order out of range", order_at);
  Dims dims;
  std::size_t total = 1;
  for (std::size_t k = 0; k < order; ++k) {
    const std::size_t at = pos;
    const std::size_t d = integer("dimension");
    if (d == 0) throw FormatError("zero dimension", at);
    if (total > (std::size_t{1} << 40) / d) throw FormatError("tensor too large", at);
    total *= d;
    dims.push_back(d);
  }
  std::vector<double> values;
  values.reserve(std::min<std::size_t>(total, 1 << 20));
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t at = pos;
    const std::string tok = token("value");
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) throw FormatError("bad value '" + tok + "'", at);
    values.push_back(v);
  }
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) throw FormatError("more values than dims allow", pos);
  return DenseTensor(std::move(dims), std::move(values));
}

std::string encode_tensor_text(const DenseTensor& t) {
  std::string out = std::to_string(t.order()) + "\n";
  for (std::size_t k = 0; k < t.order(); ++k) {
    if (k) out += ' ';
    out += std::to_string(t.dims()[k]);
  }
  out += '\n';
  char buf[40];
  for (double v : t.values()) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out += buf;
  }
  return out;
}

// --- DMSK ------------------------------------------------------------------

ObservationMask parse_mask(std::string_view bytes) {
  Reader r(bytes);
  r.expect_magic("DMSK", "DMSK mask");
  const std::size_t dims_at = r.pos();
  auto [dims, total] = read_dims(r);
  if (total > kMaxMaskEntries) throw FormatError("mask tensor too large", dims_at);
  const std::size_t count_at = r.pos();
  const std::uint64_t count = r.u(8, "count");
  if (count > total) throw FormatError("more observed entries than tensor entries", count_at);
  if (r.remaining() / 16 != count || r.remaining() % 16 != 0) {
    throw FormatError("payload does not hold " + std::to_string(count) + " offsets and values", r.pos());
  }
  std::vector<std::size_t> offsets(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const std::size_t at = r.pos();
    const std::uint64_t off = r.u(8, "offsets");
    if (off >= total) throw FormatError("offset out of range", at);
    if (i > 0 && off <= offsets[i - 1]) throw FormatError("offsets not strictly increasing", at);
    offsets[i] = static_cast<std::size_t>(off);
  }
  std::vector<double> values(offsets.size());
  for (double& v : values) v = r.f64("values");
  return ObservationMask(std::move(dims), std::move(offsets), std::move(values));
}

std::string encode_mask(const ObservationMask& mask) {
  std::string out = "DMSK";
  put_dims(out, mask.dims());
  put_u(out, mask.observed_count(), 8);
  for (std::size_t off : mask.offsets()) put_u(out, off, 8);
  for (double v : mask.values()) put_f64(out, v);
  return out;
}

ObservationMask read_mask(const std::filesystem::path& path) { return parse_mask(read_file(path)); }

void write_mask(const ObservationMask& mask, const std::filesystem::path& path) { write_file(path, encode_mask(mask)); }

DenseTensor load_tensor_any(const std::filesystem::path& path) {
  if (path.extension() == ".txt") return parse_tensor_text(read_file(path));
  return read_tensor(path);
}

void save_tensor_any(const DenseTensor& t, const std::filesystem::path& path) {
  if (path.extension() == ".txt") {
    write_file(path, encode_tensor_text(t));
  } else {
    write_tensor(t, path);
  }
}

}  // namespace ttc
