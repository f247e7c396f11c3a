#include "ttc/mask.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ttc {

ObservationMask::ObservationMask(Dims dims, std::vector<std::size_t> offsets, std::vector<double> values)
    : dims_(std::move(dims)) {
  validate_dims(dims_);
  if (offsets.size() != values.size()) throw ShapeError("mask: offset and value counts differ");
  const std::size_t total = dim_product(dims_);
  std::vector<std::size_t> perm(offsets.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  if (!std::is_sorted(offsets.begin(), offsets.end())) {
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return offsets[a] < offsets[b]; });
  }
  observed_.assign(total, 0);
  offsets_.reserve(offsets.size());
  values_.reserve(values.size());
  for (std::size_t p : perm) {
    const std::size_t off = offsets[p];
    if (off >= total) throw IndexError("mask offset " + std::to_string(off) + " out of range");
    if (observed_[off] != 0) throw IndexError("mask offset " + std::to_string(off) + " duplicated");
    observed_[off] = 1;
    offsets_.push_back(off);
    values_.push_back(values[p]);
  }
}

ObservationMask ObservationMask::observe(const DenseTensor& truth, std::vector<std::size_t> offsets) {
  std::vector<double> values;
  values.reserve(offsets.size());
  for (std::size_t off : offsets) {
    if (off >= truth.size()) throw IndexError("mask offset " + std::to_string(off) + " out of range");
    values.push_back(truth[off]);
  }
  return ObservationMask(truth.dims(), std::move(offsets), std::move(values));
}

ObservationMask ObservationMask::full(const DenseTensor& truth) {
  std::vector<std::size_t> offsets(truth.size());
  std::iota(offsets.begin(), offsets.end(), std::size_t{0});
  return observe(truth, std::move(offsets));
}

double ObservationMask::missing_ratio() const noexcept {
  if (observed_.empty()) return 0.0;
  return static_cast<double>(missing_count()) / static_cast<double>(total_count());
}

void ObservationMask::project(DenseTensor& x) const {
  if (x.dims() != dims_) throw ShapeError("mask dims do not match tensor dims");
  for (std::size_t i = 0; i < offsets_.size(); ++i) x[offsets_[i]] = values_[i];
}

double ObservationMask::observed_norm() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

}  // namespace ttc
