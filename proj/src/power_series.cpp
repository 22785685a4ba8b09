#include "padeforge/power_series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "padeforge/errors.hpp"

namespace padeforge {

namespace {

// Horner in real arithmetic: std::complex multiplication goes through the
// Annex G inf/nan recovery path, which dominates grid sweeps.
cplx horner(const std::vector<cplx>& c, cplx z) noexcept {
  const double x = z.real();
  const double y = z.imag();
  double re = 0.0;
  double im = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    const double t = re * x - im * y + it->real();
    im = re * y + im * x + it->imag();
    re = t;
  }
  return {re, im};
}

}  // namespace

ComplexPoly::ComplexPoly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

ComplexPoly::ComplexPoly(std::initializer_list<cplx> coeffs) : coeffs_(coeffs) { trim(); }

ComplexPoly ComplexPoly::constant(cplx value) { return ComplexPoly(std::vector<cplx>{value}); }

ComplexPoly ComplexPoly::monomial(int k, cplx value) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "monomial degree must be >= 0");
  std::vector<cplx> c(static_cast<std::size_t>(k) + 1, cplx{});
  c.back() = value;
  return ComplexPoly(std::move(c));
}

void ComplexPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == cplx{}) coeffs_.pop_back();
}

cplx ComplexPoly::operator[](int k) const noexcept {
  if (k < 0 || k > degree()) return {};
  return coeffs_[static_cast<std::size_t>(k)];
}

cplx ComplexPoly::operator()(cplx z) const noexcept { return horner(coeffs_, z); }

__attribute__((target_clones("avx2", "default")))
void ComplexPoly::evaluate(std::span<const cplx> z, std::span<cplx> out) const noexcept {
  // Coefficient-outer Horner: the points are independent, so the inner loop
  // pipelines instead of waiting on one multiply chain.
  constexpr std::size_t kChunk = 256;
  double re[kChunk];
  double im[kChunk];
  const std::size_t count = std::min(z.size(), out.size());
  for (std::size_t base = 0; base < count; base += kChunk) {
    const std::size_t len = std::min(kChunk, count - base);
    const cplx* zz = z.data() + base;
    const double top_re = coeffs_.empty() ? 0.0 : coeffs_.back().real();
    const double top_im = coeffs_.empty() ? 0.0 : coeffs_.back().imag();
    for (std::size_t i = 0; i < len; ++i) {
      re[i] = top_re;
      im[i] = top_im;
    }
    for (std::size_t k = coeffs_.size(); k-- > 1;) {
      const double cr = coeffs_[k - 1].real();
      const double ci = coeffs_[k - 1].imag();
      for (std::size_t i = 0; i < len; ++i) {
        const double x = zz[i].real();
        const double y = zz[i].imag();
        const double t = re[i] * x - im[i] * y + cr;
        im[i] = re[i] * y + im[i] * x + ci;
        re[i] = t;
      }
    }
    for (std::size_t i = 0; i < len; ++i) out[base + i] = {re[i], im[i]};
  }
}

ComplexPoly ComplexPoly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<cplx> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
  return ComplexPoly(std::move(d));
}

double ComplexPoly::abs_sum(double r) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

double ComplexPoly::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

ComplexPoly& ComplexPoly::operator+=(const ComplexPoly& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  trim();
  return *this;
}

ComplexPoly& ComplexPoly::operator-=(const ComplexPoly& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  trim();
  return *this;
}

ComplexPoly& ComplexPoly::operator*=(cplx scale) {
  for (auto& c : coeffs_) c *= scale;
  trim();
  return *this;
}

ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<cplx> out(a.coeffs_.size() + b.coeffs_.size() - 1, cplx{});
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return ComplexPoly(std::move(out));
}

ComplexPoly ComplexPoly::shifted(int k) const {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "shift must be >= 0");
  if (is_zero()) return {};
  std::vector<cplx> out(static_cast<std::size_t>(k), cplx{});
  out.insert(out.end(), coeffs_.begin(), coeffs_.end());
  return ComplexPoly(std::move(out));
}

TaylorSeries::TaylorSeries(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error(ErrorKind::InvalidArgument, "series needs at least a_0");
  for (std::size_t v = 0; v < coeffs_.size(); ++v) {
    if (!std::isfinite(coeffs_[v].real()) || !std::isfinite(coeffs_[v].imag()))
      throw Error(ErrorKind::InvalidArgument, "non-finite coefficient a_" + std::to_string(v));
  }
}

cplx TaylorSeries::at(int v) const {
  if (v < 0) return {};
  if (v > truncation_order())
    throw Error(ErrorKind::TruncationExceeded, "a_" + std::to_string(v) + " beyond order " +
                                                   std::to_string(truncation_order()));
  return coeffs_[static_cast<std::size_t>(v)];
}

cplx TaylorSeries::operator()(cplx z) const noexcept { return horner(coeffs_, z); }

TaylorSeries series_from_rational(const ComplexPoly& num, const ComplexPoly& den, int M) {
  if (M < 0) throw Error(ErrorKind::InvalidArgument, "truncation order must be >= 0");
  const cplx d0 = den[0];
  if (std::abs(d0) == 0.0)
    throw Error(ErrorKind::DenominatorVanishesAtZero, "den(0) = 0, expansion point is a pole");
  std::vector<cplx> a(static_cast<std::size_t>(M) + 1);
  const int dq = den.degree();
  for (int v = 0; v <= M; ++v) {
    cplx acc = num[v];
    for (int j = 1; j <= std::min(v, dq); ++j) acc -= den[j] * a[static_cast<std::size_t>(v - j)];
    a[static_cast<std::size_t>(v)] = acc / d0;
  }
  return TaylorSeries(std::move(a));
}

ComplexPoly partial_sum(const TaylorSeries& s, int k) {
  if (k < 0) return {};
  if (k > s.truncation_order())
    throw Error(ErrorKind::TruncationExceeded, "S_" + std::to_string(k) + " beyond order " +
                                                   std::to_string(s.truncation_order()));
  auto c = s.coeffs().first(static_cast<std::size_t>(k) + 1);
  return ComplexPoly(std::vector<cplx>(c.begin(), c.end()));
}

TaylorSeries series_multiply(const TaylorSeries& a, const TaylorSeries& b, int M) {
  if (M < 0) throw Error(ErrorKind::InvalidArgument, "truncation order must be >= 0");
  if (M > a.truncation_order() || M > b.truncation_order())
    throw Error(ErrorKind::TruncationExceeded, "product order " + std::to_string(M) +
                                                   " exceeds an operand's truncation");
  std::vector<cplx> out(static_cast<std::size_t>(M) + 1, cplx{});
  const auto ac = a.coeffs();
  const auto bc = b.coeffs();
  for (int v = 0; v <= M; ++v) {
    cplx acc{};
    for (int i = 0; i <= v; ++i) acc += ac[static_cast<std::size_t>(i)] * bc[static_cast<std::size_t>(v - i)];
    out[static_cast<std::size_t>(v)] = acc;
  }
  return TaylorSeries(std::move(out));
}

TaylorSeries series_from_poly(const ComplexPoly& p, int M) {
  if (M < 0) throw Error(ErrorKind::InvalidArgument, "truncation order must be >= 0");
  std::vector<cplx> c(static_cast<std::size_t>(M) + 1);
  for (int v = 0; v <= M; ++v) c[static_cast<std::size_t>(v)] = p[v];
  return TaylorSeries(std::move(c));
}

TaylorSeries exp_series(int M) {
  if (M < 0) throw Error(ErrorKind::InvalidArgument, "truncation order must be >= 0");
  std::vector<cplx> c(static_cast<std::size_t>(M) + 1);
  double term = 1.0;
  for (int v = 0; v <= M; ++v) {
    if (v > 0) term /= v;
    c[static_cast<std::size_t>(v)] = term;
  }
  return TaylorSeries(std::move(c));
}

TaylorSeries geometric_series(int M) {
  if (M < 0) throw Error(ErrorKind::InvalidArgument, "truncation order must be >= 0");
  return TaylorSeries(std::vector<cplx>(static_cast<std::size_t>(M) + 1, cplx{1.0}));
}

}  // namespace padeforge
