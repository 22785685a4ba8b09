#include "padeforge/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "padeforge/errors.hpp"

namespace padeforge {

std::vector<double> DenseMatrix::row_norms() const {
  std::vector<double> out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out[i] = std::max(out[i], std::abs((*this)(i, j)));
  return out;
}

std::complex<double> determinant(DenseMatrix a) {
  const std::size_t n = a.size();
  std::complex<double> det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (a(piv, k) == std::complex<double>{}) return {};
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const auto factor = a(i, k) / a(k, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= factor * a(k, j);
    }
  }
  return det;
}

double equilibrated_rcond(DenseMatrix a) {
  const std::size_t n = a.size();
  if (n == 0) return 1.0;
  const auto rows = a.row_norms();
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i] == 0.0) return 0.0;
    for (std::size_t j = 0; j < n; ++j) a(i, j) /= rows[i];
  }
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col = std::max(col, std::abs(a(i, j)));
    if (col == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) a(i, j) /= col;
  }

  double norm_a = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(a(i, j));
    norm_a = std::max(norm_a, row);
  }

  // LU with partial pivoting, then the inverse column by column.
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (a(piv, k) == std::complex<double>{}) return 0.0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(perm[k], perm[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      a(i, k) /= a(k, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= a(i, k) * a(k, j);
    }
  }
  std::vector<double> inv_rows(n, 0.0);
  std::vector<std::complex<double>> x(n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) x[i] = perm[i] == col ? 1.0 : 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) x[i] -= a(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) x[i] -= a(i, j) * x[j];
      x[i] /= a(i, i);
    }
    for (std::size_t i = 0; i < n; ++i) inv_rows[i] += std::abs(x[i]);
  }
  const double norm_inv = *std::max_element(inv_rows.begin(), inv_rows.end());
  if (!std::isfinite(norm_inv) || norm_inv == 0.0) return 0.0;
  return 1.0 / (norm_a * norm_inv);
}

std::vector<std::complex<double>> solve(DenseMatrix a, std::vector<std::complex<double>> b,
                                        double pivot_tol) {
  const std::size_t n = a.size();
  if (b.size() != n) throw Error(ErrorKind::InvalidArgument, "rhs size mismatch");

  const auto norms = a.row_norms();
  for (std::size_t i = 0; i < n; ++i) {
    if (norms[i] == 0.0)
      throw Error(ErrorKind::SingularSystem, "row " + std::to_string(i) + " is identically zero");
    for (std::size_t j = 0; j < n; ++j) a(i, j) /= norms[i];
    b[i] /= norms[i];
  }

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (std::abs(a(piv, k)) < pivot_tol)
      throw Error(ErrorKind::SingularSystem, "pivot " + std::to_string(k) + " below threshold");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const auto factor = a(i, k) / a(k, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= factor * a(k, j);
      b[i] -= factor * b[k];
    }
  }

  std::vector<std::complex<double>> x(n);
  for (std::size_t k = n; k-- > 0;) {
    auto acc = b[k];
    for (std::size_t j = k + 1; j < n; ++j) acc -= a(k, j) * x[j];
    x[k] = acc / a(k, k);
  }
  return x;
}

}  // namespace padeforge
