#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace padeforge {

// Small dense complex matrices for the Hankel/Toeplitz systems. Sizes here are
// at most a few dozen, so everything is plain row-major storage.
class DenseMatrix {
 public:
  explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n) {}

  std::size_t size() const noexcept { return n_; }
  std::complex<double>& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const std::complex<double>& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  /// Sup-norm of each row.
  std::vector<double> row_norms() const;

 private:
  std::size_t n_;
  std::vector<std::complex<double>> data_;
};

/// Determinant by Gaussian elimination with partial pivoting. The empty
/// matrix has determinant 1.
std::complex<double> determinant(DenseMatrix a);

/// Reciprocal infinity-norm condition number of a after scaling every row
/// and then every column to unit sup-norm. Zero for a matrix with a zero row
/// or column or an exactly singular factorization; 1 for the empty matrix.
double equilibrated_rcond(DenseMatrix a);

/// Solves a x = b after scaling every row to unit sup-norm, with partial
/// pivoting. Throws SingularSystem when a pivot of the scaled system falls
/// below pivot_tol.
std::vector<std::complex<double>> solve(DenseMatrix a, std::vector<std::complex<double>> b,
                                        double pivot_tol = 1e-13);

}  // namespace padeforge
