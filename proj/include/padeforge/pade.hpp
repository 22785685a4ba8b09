#pragma once

#include "padeforge/power_series.hpp"

namespace padeforge {

struct PadeIndex {
  int p = 0;
  int q = 0;
  friend bool operator==(const PadeIndex&, const PadeIndex&) = default;
};

/// [p/q] approximant: numerator / denominator with denominator(0) == 1 exactly.
struct PadeApproximant {
  ComplexPoly numerator;
  ComplexPoly denominator;
  PadeIndex index;

  cplx operator()(cplx z) const { return numerator(z) / denominator(z); }
};

/// Threshold on the condition estimate below which a series is treated as
/// outside D_{p,q}.
inline constexpr double kMembershipThreshold = 1e-12;

struct MembershipReport {
  cplx determinant_value;
  double condition_estimate = 0.0;
  bool in_Dpq = false;
};

enum class PadeMethod { linear_solve, jacobi };

/// Determinant of the q x q Hankel block with (i, j) entry a_{p-q+1+i+j}
/// (a_v = 0 for v < 0). condition_estimate is the reciprocal condition number
/// of the block after row and column equilibration (see equilibrated_rcond),
/// and exactly 0 when the determinant vanishes. For q = 0 the report is
/// {1, 1, true}.
MembershipReport hankel_determinant(const TaylorSeries& s, PadeIndex idx);

/// Throws NotInDpq when hankel_determinant rejects the index and
/// SingularSystem when the scaled order-condition solve hits a tiny pivot.
PadeApproximant compute_pade(const TaylorSeries& s, PadeIndex idx,
                             PadeMethod method = PadeMethod::linear_solve);

/// max_{v <= p+q} |b_v - a_v| / (1 + |a_v|) where b is the expansion of r.
double order_condition_residual(const TaylorSeries& s, const PadeApproximant& r);

/// Interpolates d -> det(*) for the coefficient family a_v(d) = dir_v d + base_v.
///
/// The Hankel determinant is sampled at q+1 points on the circle |d| = radius
/// and the degree-q interpolant is checked at a held-out point. radius <= 0
/// picks a scale from the data.
ComplexPoly determinant_poly_in_d(const TaylorSeries& base, const TaylorSeries& dir, PadeIndex idx,
                                  double radius = 0.0);

/// Picks d on the ring |d| = delta_tilde / 2 (16 equally spaced arguments)
/// maximizing |bad(d)|; the first candidate wins ties.
cplx select_d(const ComplexPoly& bad, double delta_tilde);

}  // namespace padeforge
