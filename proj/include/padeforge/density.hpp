#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padeforge/geometry.hpp"
#include "padeforge/pade.hpp"
#include "padeforge/power_series.hpp"

namespace padeforge {

/// num / den as an evaluable rational function.
struct RationalPair {
  ComplexPoly num;
  ComplexPoly den = ComplexPoly::constant(1.0);

  cplx operator()(cplx z) const { return num(z) / den(z); }
  TaylorSeries series(int M) const { return series_from_rational(num, den, M); }
};

enum class TargetKind { polynomial, rational };

/// The function being approximated: a polynomial P (den == 1) or A/B.
struct Target {
  TargetKind kind = TargetKind::polynomial;
  RationalPair value;

  static Target polynomial(ComplexPoly P) { return {TargetKind::polynomial, {std::move(P), ComplexPoly::constant(1.0)}}; }
  static Target rational(ComplexPoly A, ComplexPoly B) { return {TargetKind::rational, {std::move(A), std::move(B)}}; }
};

/// How f_final is obtained from f_tilde.
enum class RungeStep {
  exact_q0,          // q = 0: f = P + d z^p is its own [p/0] approximant
  taylor_surrogate,  // simply connected: Taylor partial sum of f_tilde
  pole_audit,        // general: f = f_tilde, poles audited against K_lambda'
};

struct AchievedBounds {
  double sup_ftilde_minus_target = 0.0;  // on K_lambda
  double sup_pade_error_Kn = 0.0;
  double sup_f_minus_target_KN = 0.0;
  double inf_denominator = 0.0;  // inf over K_lambda of |den(f_tilde)|
};

struct PoleAuditEntry {
  int lambda = 0;
  double margin = 0.0;
  double min_distance = 0.0;
  bool pole_free = false;
};

struct DensityCertificate {
  Target target;
  PadeIndex index;
  Region region = Region::whole_plane();
  cplx c;
  cplx d;
  double delta_tilde = 0.0;
  double delta = 0.0;
  int lambda = 0;
  double r_radius = 0.0;
  int n = 0;
  int s = 0;
  int N = 0;
  double epsilon = 0.0;
  RationalPair f_tilde;
  RationalPair f_final;
  RungeStep runge_step = RungeStep::exact_q0;
  int surrogate_order = -1;  // degree cap M of the Taylor surrogate, -1 if unused
  int audit_horizon = 0;
  std::vector<PoleAuditEntry> pole_audit;
  AchievedBounds achieved;
};

struct ConstructionOptions {
  GridPitch pitch;
  int max_retries = 6;        // halvings of delta_tilde before giving up
  int surrogate_cap = 500;
  int audit_extra = 3;        // pole audit runs up to lambda + audit_extra
};

struct ClauseResult {
  std::string clause;
  double bound = 0.0;
  double measured = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<ClauseResult> clauses;

  bool passed() const;
  /// First failing clause, if any.
  const ClauseResult* first_failure() const;
};

/// Smallest lambda > max(n, N) with the closed disk of radius
/// r = 1/(2 max(n, N) + 2) inside the interior of K_lambda.
struct LambdaChoice {
  int lambda = 0;
  double r_radius = 0.0;
};
LambdaChoice select_lambda(const Region& region, int n, int N);

/// f_tilde for parameters (c, d):
///   q = 0:  P + d z^p
///   q >= 1: (A + d z^p) / (B - (c z)^q)
/// Throws InvalidArgument for c = 0 (q >= 1) or d = 0.
RationalPair build_f_tilde(const Target& target, PadeIndex idx, cplx c, cplx d);

/// Largest deviation between compute_pade(series of f) and f normalized to
/// den(0) = 1, relative to each polynomial's largest coefficient.
double fixed_point_deviation(const RationalPair& f, PadeIndex idx);

DensityCertificate construct_simply_connected(const ComplexPoly& P, PadeIndex idx, double eps,
                                              const Region& region, int n, int s, int N,
                                              const ConstructionOptions& opts = {});

DensityCertificate construct_general(const ComplexPoly& A, const ComplexPoly& B, PadeIndex idx, double eps,
                                     const Region& region, int n, int s, int N,
                                     const ConstructionOptions& opts = {});

/// Runs the remaining construction steps for fixed (c, d): membership, fixed
/// point, Runge step, delta choice and the achieved bounds. Throws
/// CertificateFailed or PoleInRegion naming the broken inequality.
DensityCertificate complete_certificate(const Target& target, PadeIndex idx, double eps, const Region& region,
                                        int n, int s, int N, cplx c, cplx d, double delta_tilde,
                                        const ConstructionOptions& opts = {});

/// Shortest Taylor partial sum S_M (M >= min_order) with sampled
/// sup |f_tilde - S_M| < delta on K. Throws SurrogateDivergence past the cap
/// or when a pole of f_tilde lies inside the disk of radius max|z| on K.
ComplexPoly polynomial_surrogate(const RationalPair& f_tilde, const CompactGrid& K, double delta,
                                 int cap = 500, int min_order = 0);
ComplexPoly polynomial_surrogate(const RationalPair& f_tilde, int lambda, double delta, const Region& region,
                                 const GridPitch& pitch = {}, int cap = 500, int min_order = 0);

/// Recomputes f_tilde and f_final from the certificate's parameters and checks
/// every inequality of the construction. Never throws on a failed check.
VerificationReport verify_certificate(const DensityCertificate& cert, const GridPitch& pitch = {},
                                      int surrogate_cap = 500);

/// Empirical delta of the continuity lemma: halves delta from eps until
/// `trials` seeded random polynomial perturbations of sampled sup delta/2 all
/// keep membership and move [p/q] by less than eps on K_lambda.
double lemma22_delta_search(const RationalPair& f_tilde, PadeIndex idx, int lambda, double eps,
                            const Region& region, int trials, std::uint64_t seed,
                            const GridPitch& pitch = {});

/// Taylor coefficients a_0..a_{count-1} of f from `nodes` equally spaced
/// samples on |z| = r (trapezoidal Cauchy integral).
std::vector<cplx> cauchy_coefficients(const Evaluable& f, double r, int count, int nodes);

}  // namespace padeforge
