#pragma once

// Dense N-way tensors and their two matricization families.
//
// Storage is column-major over the index tuple: i_1 varies fastest. With that
// layout the mode-(1..k) unfolding is a reshape of the flat buffer, and the
// mode-n unfolding is a block transpose. Indices at the public boundary are
// 1-based; flat offsets are 0-based.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ttc/error.hpp"

namespace ttc {

using Dims = std::vector<std::size_t>;
using Index = std::vector<std::size_t>;
using Matrix = Eigen::MatrixXd;

// Product of dims[first, last). Empty range gives 1.
std::size_t dim_product(std::span<const std::size_t> dims, std::size_t first, std::size_t last);
std::size_t dim_product(std::span<const std::size_t> dims);

// Throws ShapeError unless dims is nonempty with every entry >= 1.
void validate_dims(std::span<const std::size_t> dims);

// 1-based index tuple -> 0-based flat offset.
std::size_t element_offset(std::span<const std::size_t> index, std::span<const std::size_t> dims);
// 0-based flat offset -> 1-based index tuple.
Index offset_to_index(std::size_t offset, std::span<const std::size_t> dims);

class DenseTensor {
 public:
  DenseTensor() = default;
  // Zero-filled tensor.
  explicit DenseTensor(Dims dims);
  DenseTensor(Dims dims, std::vector<double> values);

  const Dims& dims() const noexcept { return dims_; }
  std::size_t order() const noexcept { return dims_.size(); }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  const double* data() const noexcept { return values_.data(); }
  double* data() noexcept { return values_.data(); }

  double operator[](std::size_t offset) const { return values_[offset]; }
  double& operator[](std::size_t offset) { return values_[offset]; }

  // 1-based element access.
  double at(std::span<const std::size_t> index) const;
  double& at(std::span<const std::size_t> index);
  double at(std::initializer_list<std::size_t> index) const;
  double& at(std::initializer_list<std::size_t> index);

  bool operator==(const DenseTensor&) const = default;

 private:
  Dims dims_;
  std::vector<double> values_;
};

enum class UnfoldKind { ModeN, TensorTrain };

// Enough information to fold a matricization back into its tensor.
struct UnfoldProvenance {
  Dims source_dims;
  UnfoldKind kind = UnfoldKind::TensorTrain;
  // Mode n (ModeN) or split point k (TensorTrain), 1-based.
  std::size_t mode = 1;
};

struct Matricization {
  Matrix matrix;
  UnfoldProvenance provenance;

  Eigen::Index rows() const noexcept { return matrix.rows(); }
  Eigen::Index cols() const noexcept { return matrix.cols(); }
};

// Row/column counts of the two unfoldings without building them.
std::pair<std::size_t, std::size_t> mode_n_shape(const Dims& dims, std::size_t n);
std::pair<std::size_t, std::size_t> tt_shape(const Dims& dims, std::size_t k);

// X_(n): I_n rows, mode-n fibers as columns.
Matricization matricize_mode_n(const DenseTensor& x, std::size_t n);
// X_[k]: the first k indices enumerate rows, the rest columns.
Matricization matricize_tt(const DenseTensor& x, std::size_t k);
DenseTensor fold(const Matricization& m);
// Fold a bare matrix using a provenance record; used when the matrix was
// produced by arithmetic on an unfolding.
DenseTensor fold(const Matrix& m, const UnfoldProvenance& provenance);

// X x_n A, with A of shape J x I_n.
DenseTensor mode_n_product(const DenseTensor& x, const Matrix& a, std::size_t n);

double inner_product(const DenseTensor& x, const DenseTensor& y);
double frobenius_norm(const DenseTensor& x);

}  // namespace ttc
