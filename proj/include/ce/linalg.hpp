#ifndef CE_LINALG_HPP_
#define CE_LINALG_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace ce {

/// Dense row-major matrix of doubles. Small and explicit on purpose: every
/// consumer in this project iterates rows or runs matvec-style kernels, so a
/// flat buffer with row views is all that is needed.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double> column(std::size_t c) const;

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Vector kernels. All spans must already have consistent lengths; these are
// hot inner loops and do not re-validate.
double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double euclidean_distance(std::span<const double> a, std::span<const double> b);
void axpy(double scale, std::span<const double> x, std::span<double> y);  // y += scale*x
void scale_in_place(std::span<double> x, double s);

std::vector<double> matvec(const Matrix& m, std::span<const double> x);    // m * x
std::vector<double> matvec_t(const Matrix& m, std::span<const double> y);  // m^T * y
void add_outer(Matrix& m, std::span<const double> u, std::span<const double> v,
               double scale = 1.0);  // m += scale * u v^T
Matrix transpose(const Matrix& m);
Matrix multiply(const Matrix& a, const Matrix& b);

/// Eigendecomposition of a symmetric matrix (cyclic Jacobi rotations).
/// Values are sorted descending; vectors.row(i) is the unit eigenvector for
/// values[i], sign-fixed so the entry of largest magnitude is positive.
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};
SymmetricEigen eigen_symmetric(Matrix a);

}  // namespace ce

#endif  // CE_LINALG_HPP_
