#include "ttc/tensor.hpp"

#include <cmath>
#include <string>

namespace ttc {

std::size_t dim_product(std::span<const std::size_t> dims, std::size_t first, std::size_t last) {
  std::size_t p = 1;
  for (std::size_t k = first; k < last; ++k) p *= dims[k];
  return p;
}

std::size_t dim_product(std::span<const std::size_t> dims) { return dim_product(dims, 0, dims.size()); }

void validate_dims(std::span<const std::size_t> dims) {
  if (dims.empty()) throw ShapeError("tensor dims must be nonempty");
  for (std::size_t d : dims) {
    if (d == 0) throw ShapeError("tensor dims must be >= 1");
  }
}

std::size_t element_offset(std::span<const std::size_t> index, std::span<const std::size_t> dims) {
  if (index.size() != dims.size()) {
    throw IndexError("index has " + std::to_string(index.size()) + " components, tensor has order " +
                     std::to_string(dims.size()));
  }
  std::size_t offset = 0;
  std::size_t stride = 1;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (index[k] < 1 || index[k] > dims[k]) {
      throw IndexError("index component " + std::to_string(k + 1) + " = " + std::to_string(index[k]) +
                       " outside [1, " + std::to_string(dims[k]) + "]");
    }
    offset += (index[k] - 1) * stride;
    stride *= dims[k];
  }
  return offset;
}

Index offset_to_index(std::size_t offset, std::span<const std::size_t> dims) {
  if (offset >= dim_product(dims)) throw IndexError("flat offset out of range");
  Index index(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) {
    index[k] = offset % dims[k] + 1;
    offset /= dims[k];
  }
  return index;
}

DenseTensor::DenseTensor(Dims dims) : dims_(std::move(dims)) {
  validate_dims(dims_);
  values_.assign(dim_product(dims_), 0.0);
}

DenseTensor::DenseTensor(Dims dims, std::vector<double> values)
    : dims_(std::move(dims)), values_(std::move(values)) {
  validate_dims(dims_);
  if (values_.size() != dim_product(dims_)) {
    throw ShapeError("value count " + std::to_string(values_.size()) + " does not match dims product " +
                     std::to_string(dim_product(dims_)));
  }
}

double DenseTensor::at(std::span<const std::size_t> index) const { return values_[element_offset(index, dims_)]; }

double& DenseTensor::at(std::span<const std::size_t> index) { return values_[element_offset(index, dims_)]; }

double DenseTensor::at(std::initializer_list<std::size_t> index) const {
  return at(std::span<const std::size_t>(index.begin(), index.size()));
}

double& DenseTensor::at(std::initializer_list<std::size_t> index) {
  return at(std::span<const std::size_t>(index.begin(), index.size()));
}

namespace {

void check_mode(const Dims& dims, std::size_t n) {
  if (n < 1 || n > dims.size()) {
    throw ModeError("mode " + std::to_string(n) + " invalid for order-" + std::to_string(dims.size()) + " tensor");
  }
}

void check_split(const Dims& dims, std::size_t k) {
  if (dims.size() < 2 || k < 1 || k > dims.size() - 1) {
    throw ModeError("split point " + std::to_string(k) + " invalid for order-" + std::to_string(dims.size()) +
                    " tensor");
  }
}

}  // namespace

std::pair<std::size_t, std::size_t> mode_n_shape(const Dims& dims, std::size_t n) {
  check_mode(dims, n);
  return {dims[n - 1], dim_product(dims) / dims[n - 1]};
}

std::pair<std::size_t, std::size_t> tt_shape(const Dims& dims, std::size_t k) {
  check_split(dims, k);
  return {dim_product(dims, 0, k), dim_product(dims, k, dims.size())};
}

Matricization matricize_mode_n(const DenseTensor& x, std::size_t n) {
  const Dims& dims = x.dims();
  check_mode(dims, n);
  // View the buffer as (left, I_n, right); column j of X_(n) is l + left * r.
  const std::size_t left = dim_product(dims, 0, n - 1);
  const std::size_t mid = dims[n - 1];
  const std::size_t right = dim_product(dims, n, dims.size());
  Matrix m(static_cast<Eigen::Index>(mid), static_cast<Eigen::Index>(left * right));
  const double* src = x.data();
  for (std::size_t r = 0; r < right; ++r) {
    for (std::size_t i = 0; i < mid; ++i) {
      const double* slab = src + (r * mid + i) * left;
      for (std::size_t l = 0; l < left; ++l) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l + left * r)) = slab[l];
      }
    }
  }
  return {std::move(m), {dims, UnfoldKind::ModeN, n}};
}

Matricization matricize_tt(const DenseTensor& x, std::size_t k) {
  const auto [rows, cols] = tt_shape(x.dims(), k);
  Matrix m = Eigen::Map<const Matrix>(x.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  return {std::move(m), {x.dims(), UnfoldKind::TensorTrain, k}};
}

DenseTensor fold(const Matrix& m, const UnfoldProvenance& prov) {
  validate_dims(prov.source_dims);
  const Dims& dims = prov.source_dims;
  const auto [rows, cols] =
      prov.kind == UnfoldKind::ModeN ? mode_n_shape(dims, prov.mode) : tt_shape(dims, prov.mode);
  if (static_cast<std::size_t>(m.rows()) != rows || static_cast<std::size_t>(m.cols()) != cols) {
    throw ShapeError("fold: matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                     " but provenance implies " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  DenseTensor out(dims);
  if (prov.kind == UnfoldKind::TensorTrain) {
    Eigen::Map<Matrix>(out.data(), m.rows(), m.cols()) = m;
    return out;
  }
  const std::size_t n = prov.mode;
  const std::size_t left = dim_product(dims, 0, n - 1);
  const std::size_t mid = dims[n - 1];
  const std::size_t right = dim_product(dims, n, dims.size());
  double* dst = out.data();
  for (std::size_t r = 0; r < right; ++r) {
    for (std::size_t i = 0; i < mid; ++i) {
      double* slab = dst + (r * mid + i) * left;
      for (std::size_t l = 0; l < left; ++l) {
        slab[l] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l + left * r));
      }
    }
  }
  return out;
}

DenseTensor fold(const Matricization& m) { return fold(m.matrix, m.provenance); }

DenseTensor mode_n_product(const DenseTensor& x, const Matrix& a, std::size_t n) {
  const Dims& dims = x.dims();
  check_mode(dims, n);
  if (static_cast<std::size_t>(a.cols()) != dims[n - 1]) {
    throw ShapeError("mode_n_product: matrix has " + std::to_string(a.cols()) + " columns, mode " +
                     std::to_string(n) + " has size " + std::to_string(dims[n - 1]));
  }
  Dims out_dims = dims;
  out_dims[n - 1] = static_cast<std::size_t>(a.rows());
  if (a.rows() == 0) throw ShapeError("mode_n_product: matrix has no rows");
  DenseTensor out(out_dims);
  const auto left = static_cast<Eigen::Index>(dim_product(dims, 0, n - 1));
  const auto mid = static_cast<Eigen::Index>(dims[n - 1]);
  const auto right = dim_product(dims, n, dims.size());
  const Eigen::Index j = a.rows();
  // Each slab r is a (left x I_n) column-major block; multiply by A^T on the right.
  for (std::size_t r = 0; r < right; ++r) {
    Eigen::Map<const Matrix> in(x.data() + r * left * mid, left, mid);
    Eigen::Map<Matrix> res(out.data() + r * left * j, left, j);
    res.noalias() = in * a.transpose();
  }
  return out;
}

double inner_product(const DenseTensor& x, const DenseTensor& y) {
  if (x.dims() != y.dims()) throw ShapeError("inner_product: dims mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double frobenius_norm(const DenseTensor& x) {
  double s = 0.0;
  for (double v : x.values()) s += v * v;
  return std::sqrt(s);
}

}  // namespace ttc
