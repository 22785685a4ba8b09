#pragma once

#include <complex>
#include <span>
#include <vector>

namespace padeforge {

using cplx = std::complex<double>;

/// Dense polynomial c_0 + c_1 z + ... with complex coefficients.
///
/// Trailing coefficients that are exactly zero are dropped on construction,
/// so degree() always refers to a nonzero coefficient. The zero polynomial
/// has no coefficients and degree -1.
class ComplexPoly {
 public:
  ComplexPoly() = default;
  explicit ComplexPoly(std::vector<cplx> coeffs);
  ComplexPoly(std::initializer_list<cplx> coeffs);

  static ComplexPoly constant(cplx value);
  /// value * z^k
  static ComplexPoly monomial(int k, cplx value = 1.0);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  /// Coefficient of z^k, zero outside the support.
  cplx operator[](int k) const noexcept;

  cplx operator()(cplx z) const noexcept;
  /// out[i] = p(z[i]); faster than pointwise calls on long spans.
  void evaluate(std::span<const cplx> z, std::span<cplx> out) const noexcept;
  ComplexPoly derivative() const;
  /// Sum of |c_k| r^k, the natural magnitude scale of the polynomial on |z| = r.
  double abs_sum(double r = 1.0) const noexcept;
  double max_abs_coeff() const noexcept;

  ComplexPoly& operator+=(const ComplexPoly& other);
  ComplexPoly& operator-=(const ComplexPoly& other);
  ComplexPoly& operator*=(cplx scale);

  friend ComplexPoly operator+(ComplexPoly a, const ComplexPoly& b) { return a += b; }
  friend ComplexPoly operator-(ComplexPoly a, const ComplexPoly& b) { return a -= b; }
  friend ComplexPoly operator*(ComplexPoly a, cplx s) { return a *= s; }
  friend ComplexPoly operator*(cplx s, ComplexPoly a) { return a *= s; }
  friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b);
  friend bool operator==(const ComplexPoly&, const ComplexPoly&) = default;

  /// Multiplies by z^k (k >= 0).
  ComplexPoly shifted(int k) const;

 private:
  void trim();
  std::vector<cplx> coeffs_;
};

/// Truncated Maclaurin series a_0 + a_1 z + ... + a_M z^M.
class TaylorSeries {
 public:
  /// Throws InvalidArgument for an empty vector or non-finite entries.
  explicit TaylorSeries(std::vector<cplx> coeffs);

  int truncation_order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  /// a_v, with a_v = 0 for v < 0. Throws TruncationExceeded for v > M.
  cplx at(int v) const;
  cplx operator()(cplx z) const noexcept;

  friend bool operator==(const TaylorSeries&, const TaylorSeries&) = default;

 private:
  std::vector<cplx> coeffs_;
};

/// Expands num/den around 0 through order M by the long-division recurrence
/// den_0 a_v = num_v - sum_{j>=1} den_j a_{v-j}.
TaylorSeries series_from_rational(const ComplexPoly& num, const ComplexPoly& den, int M);

/// S_k: sum of a_v z^v for v <= k, the zero polynomial for k < 0.
ComplexPoly partial_sum(const TaylorSeries& s, int k);

/// Cauchy product truncated at order M.
TaylorSeries series_multiply(const TaylorSeries& a, const TaylorSeries& b, int M);

TaylorSeries series_from_poly(const ComplexPoly& p, int M);

/// Built-in generators.
TaylorSeries exp_series(int M);
TaylorSeries geometric_series(int M);

}  // namespace padeforge
