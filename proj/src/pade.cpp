#include "padeforge/pade.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "padeforge/errors.hpp"
#include "padeforge/linalg.hpp"

namespace padeforge {
namespace {

std::string index_str(PadeIndex idx) {
  return "[" + std::to_string(idx.p) + "/" + std::to_string(idx.q) + "]";
}

void check_index(PadeIndex idx) {
  if (idx.p < 0 || idx.q < 0)
    throw Error(ErrorKind::InvalidArgument, "negative Pade index " + index_str(idx));
}

void require_truncation(const TaylorSeries& s, PadeIndex idx) {
  if (s.truncation_order() < idx.p + idx.q)
    throw Error(ErrorKind::InsufficientTruncation,
                index_str(idx) + " needs order " + std::to_string(idx.p + idx.q) + ", series has " +
                    std::to_string(s.truncation_order()));
}

// q x q block of (*) for an arbitrary coefficient accessor.
template <class Coeff>
DenseMatrix hankel_block(const Coeff& a, PadeIndex idx) {
  const auto q = static_cast<std::size_t>(idx.q);
  DenseMatrix m(q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j)
      m(i, j) = a(idx.p - idx.q + 1 + static_cast<int>(i + j));
  return m;
}

MembershipReport report_for(const DenseMatrix& m) {
  MembershipReport r;
  r.determinant_value = determinant(m);
  r.condition_estimate = r.determinant_value == cplx{} ? 0.0 : equilibrated_rcond(m);
  r.in_Dpq = r.condition_estimate > kMembershipThreshold;
  return r;
}

PadeApproximant pade_linear_solve(const TaylorSeries& s, PadeIndex idx) {
  const int p = idx.p;
  const int q = idx.q;
  const auto n = static_cast<std::size_t>(q);
  DenseMatrix t(n);
  std::vector<cplx> rhs(n);
  for (int i = 1; i <= q; ++i) {
    for (int j = 1; j <= q; ++j)
      t(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = s.at(p + i - j);
    rhs[static_cast<std::size_t>(i - 1)] = -s.at(p + i);
  }
  const auto tail = solve(std::move(t), std::move(rhs));

  std::vector<cplx> den(n + 1);
  den[0] = 1.0;
  std::copy(tail.begin(), tail.end(), den.begin() + 1);

  std::vector<cplx> num(static_cast<std::size_t>(p) + 1);
  for (int v = 0; v <= p; ++v) {
    cplx acc{};
    for (int j = 0; j <= std::min(v, q); ++j) acc += den[static_cast<std::size_t>(j)] * s.at(v - j);
    num[static_cast<std::size_t>(v)] = acc;
  }
  return {ComplexPoly(std::move(num)), ComplexPoly(std::move(den)), idx};
}

// First-row cofactor expansion of the two (q+1) x (q+1) determinants in
// Jacobi's formula. Row k (1..q), column j (0..q) holds a_{p-q+k+j}.
PadeApproximant pade_jacobi(const TaylorSeries& s, PadeIndex idx) {
  const int p = idx.p;
  const int q = idx.q;
  const auto n = static_cast<std::size_t>(q);

  ComplexPoly num;
  ComplexPoly den;
  cplx den0{};
  for (int j = 0; j <= q; ++j) {
    DenseMatrix minor(n);
    for (int k = 1; k <= q; ++k) {
      std::size_t col = 0;
      for (int jj = 0; jj <= q; ++jj) {
        if (jj == j) continue;
        minor(static_cast<std::size_t>(k - 1), col++) = s.at(p - q + k + jj);
      }
    }
    const cplx cof = (j % 2 == 0 ? 1.0 : -1.0) * determinant(std::move(minor));
    num += partial_sum(s, p - q + j).shifted(q - j) * cof;
    den += ComplexPoly::monomial(q - j, cof);
    if (j == q) den0 = cof;
  }
  if (den0 == cplx{}) throw Error(ErrorKind::NotInDpq, "Jacobi denominator vanishes at 0");

  const cplx inv = 1.0 / den0;
  num *= inv;
  std::vector<cplx> dc(static_cast<std::size_t>(q) + 1, cplx{});
  for (int v = 0; v <= q; ++v) dc[static_cast<std::size_t>(v)] = den[v] * inv;
  dc[0] = 1.0;
  std::vector<cplx> nc(static_cast<std::size_t>(p) + 1, cplx{});
  for (int v = 0; v <= p; ++v) nc[static_cast<std::size_t>(v)] = num[v];
  return {ComplexPoly(std::move(nc)), ComplexPoly(std::move(dc)), idx};
}

}  // namespace

MembershipReport hankel_determinant(const TaylorSeries& s, PadeIndex idx) {
  check_index(idx);
  require_truncation(s, idx);
  if (idx.q == 0) return {1.0, 1.0, true};
  return report_for(hankel_block([&](int v) { return s.at(v); }, idx));
}

PadeApproximant compute_pade(const TaylorSeries& s, PadeIndex idx, PadeMethod method) {
  const auto membership = hankel_determinant(s, idx);
  if (idx.q == 0) return {partial_sum(s, idx.p), ComplexPoly::constant(1.0), idx};
  if (!membership.in_Dpq)
    throw Error(ErrorKind::NotInDpq, index_str(idx) + " condition estimate " +
                                         std::to_string(membership.condition_estimate));
  return method == PadeMethod::jacobi ? pade_jacobi(s, idx) : pade_linear_solve(s, idx);
}

double order_condition_residual(const TaylorSeries& s, const PadeApproximant& r) {
  const int order = r.index.p + r.index.q;
  require_truncation(s, r.index);
  const auto b = series_from_rational(r.numerator, r.denominator, order);
  double worst = 0.0;
  for (int v = 0; v <= order; ++v) {
    const auto av = s.at(v);
    worst = std::max(worst, std::abs(b.at(v) - av) / (1.0 + std::abs(av)));
  }
  return worst;
}

ComplexPoly determinant_poly_in_d(const TaylorSeries& base, const TaylorSeries& dir, PadeIndex idx,
                                  double radius) {
  check_index(idx);
  if (idx.q < 1) throw Error(ErrorKind::InvalidArgument, "determinant in d needs q >= 1");
  require_truncation(base, idx);
  require_truncation(dir, idx);
  for (int v = 0; v < idx.p; ++v)
    if (dir.at(v) != cplx{})
      throw Error(ErrorKind::DirectionViolation, "direction coefficient " + std::to_string(v) +
                                                     " below p is nonzero");
  const cplx lead = dir.at(idx.p);
  if (lead == cplx{}) throw Error(ErrorKind::DirectionViolation, "direction coefficient at p is zero");

  if (!(radius > 0.0)) {
    double base_scale = 0.0;
    for (int v = 0; v <= idx.p + idx.q; ++v) base_scale = std::max(base_scale, std::abs(base.at(v)));
    radius = base_scale > 0.0 ? base_scale / std::abs(lead) : 1.0;
  }

  struct Sample {
    cplx value;
    double scale;  // product of row norms: magnitude of the terms in det
  };
  auto sample = [&](cplx d) {
    const auto m = hankel_block([&](int v) { return v < 0 ? cplx{} : dir.at(v) * d + base.at(v); }, idx);
    double scale = 1.0;
    for (double rn : m.row_norms()) scale *= rn;
    return Sample{determinant(m), scale};
  };

  const int count = idx.q + 1;
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<cplx> values(static_cast<std::size_t>(count));
  double scale = 0.0;
  for (int k = 0; k < count; ++k) {
    const auto s = sample(std::polar(radius, two_pi * k / count));
    values[static_cast<std::size_t>(k)] = s.value;
    scale = std::max(scale, s.scale);
  }

  // Interpolation on roots of unity is a discrete Fourier transform.
  std::vector<cplx> coeffs(static_cast<std::size_t>(count));
  for (int m = 0; m < count; ++m) {
    cplx acc{};
    for (int k = 0; k < count; ++k)
      acc += values[static_cast<std::size_t>(k)] * std::polar(1.0, -two_pi * k * m / count);
    coeffs[static_cast<std::size_t>(m)] = acc / (static_cast<double>(count) * std::pow(radius, m));
  }
  ComplexPoly poly(std::move(coeffs));

  const cplx held_out = std::polar(0.5 * radius, std::numbers::pi / count);
  const auto check = sample(held_out);
  scale = std::max({scale, check.scale, std::abs(check.value)});
  const double residual = std::abs(poly(held_out) - check.value);
  if (!(residual <= 1e-8 * scale))
    throw Error(ErrorKind::InterpolationInconsistent,
                "held-out residual " + std::to_string(residual / std::max(scale, 1e-300)));
  return poly;
}

cplx select_d(const ComplexPoly& bad, double delta_tilde) {
  if (!(delta_tilde > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta_tilde must be positive");
  const double ring = 0.5 * delta_tilde;
  cplx best{};
  double best_abs = -1.0;
  for (int k = 0; k < 16; ++k) {
    const cplx d = std::polar(ring, 2.0 * std::numbers::pi * k / 16.0);
    const double v = std::abs(bad(d));
    if (v > best_abs) {
      best_abs = v;
      best = d;
    }
  }
  if (!(best_abs > 1e-14 * bad.abs_sum(ring)))
    throw Error(ErrorKind::NoAdmissibleD, "determinant polynomial vanishes on the candidate ring");
  return best;
}

}  // namespace padeforge
