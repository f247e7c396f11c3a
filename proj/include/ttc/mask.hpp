#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ttc/tensor.hpp"

namespace ttc {

// The observed index set Omega together with the observed values T_Omega.
// Offsets are 0-based flat offsets in the tensor linearization, kept sorted.
class ObservationMask {
 public:
  ObservationMask() = default;
  // Offsets may arrive in any order; they are sorted together with their
  // values. Duplicates or out-of-range offsets throw IndexError.
  ObservationMask(Dims dims, std::vector<std::size_t> offsets, std::vector<double> values);

  // Observe `truth` at the given offsets.
  static ObservationMask observe(const DenseTensor& truth, std::vector<std::size_t> offsets);
  // Every entry observed.
  static ObservationMask full(const DenseTensor& truth);

  const Dims& dims() const noexcept { return dims_; }
  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t observed_count() const noexcept { return offsets_.size(); }
  std::size_t total_count() const noexcept { return observed_.size(); }
  std::size_t missing_count() const noexcept { return total_count() - observed_count(); }
  double missing_ratio() const noexcept;

  bool is_observed(std::size_t offset) const { return observed_[offset] != 0; }

  // Overwrite the observed entries of x with T_Omega.
  void project(DenseTensor& x) const;
  // Frobenius norm of T_Omega.
  double observed_norm() const noexcept;

  bool operator==(const ObservationMask& other) const {
    return dims_ == other.dims_ && offsets_ == other.offsets_ && values_ == other.values_;
  }

 private:
  Dims dims_;
  std::vector<std::size_t> offsets_;
  std::vector<double> values_;
  std::vector<std::uint8_t> observed_;
};

}  // namespace ttc
