#include "padeforge/density.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "padeforge/errors.hpp"
#include "padeforge/roots.hpp"

namespace padeforge {
namespace {

constexpr double kFixedPointTol = 1e-8;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kUnbounded = std::numeric_limits<double>::max();

// Padé computations downstream of a construction use this much extra
// truncation beyond the p+q window.
constexpr int kSeriesSlack = 20;

struct Grids {
  CompactGrid Kn;
  CompactGrid KN;
  CompactGrid Klambda;
};

Grids make_grids(const Region& region, int n, int N, int lambda, const GridPitch& pitch) {
  return {exhaustion_K(region, n, pitch), exhaustion_K(region, N, pitch), exhaustion_K(region, lambda, pitch)};
}

double delta_bound(int s, double eps) { return std::min(1.0 / (2.0 * s), eps / 2.0); }

void check_common(PadeIndex idx, double eps, int n, int s, int N) {
  if (idx.p < 0 || idx.q < 0) throw Error(ErrorKind::InvalidArgument, "negative Pade index");
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  if (n < 1 || s < 1 || N < 1) throw Error(ErrorKind::InvalidArgument, "n, s, N must be >= 1");
}

// Largest t in (0, upper) with estimate(t) < target for increasing estimate.
double largest_admissible(const std::function<double(double)>& estimate, double target, double upper) {
  double hi = upper * (1.0 - 1e-12);
  if (estimate(hi) < target) return hi;
  double lo = hi;
  for (int i = 0; i < 2000 && lo > 0.0 && !(estimate(lo) < target); ++i) lo *= 0.5;
  if (!(lo > 0.0) || !(estimate(lo) < target))
    throw Error(ErrorKind::CertificateFailed, "no admissible delta_tilde");
  hi = std::min(hi, 2.0 * lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (estimate(mid) < target) lo = mid;
    else hi = mid;
  }
  return lo;
}

double coeff_deviation(const ComplexPoly& got, const ComplexPoly& want) {
  const int deg = std::max(got.degree(), want.degree());
  const double scale = std::max(want.max_abs_coeff(), std::numeric_limits<double>::min());
  double worst = 0.0;
  for (int k = 0; k <= deg; ++k) worst = std::max(worst, std::abs(got[k] - want[k]) / scale);
  return worst;
}

Evaluable as_evaluable(const RationalPair& f) {
  return [f](cplx z) { return f(z); };
}

double sup_diff(const Evaluable& f, const Evaluable& g, const CompactGrid& K) {
  return sup_norm([&](cplx z) { return f(z) - g(z); }, K);
}

// A rational function as two polynomials, for batched grid evaluation.
struct RatView {
  const ComplexPoly* num;
  const ComplexPoly* den;
};

RatView view(const RationalPair& f) { return {&f.num, &f.den}; }
RatView view(const PadeApproximant& r) { return {&r.numerator, &r.denominator}; }

// v[i] /= d[i] in real arithmetic; std::complex division where the plain
// formula would overflow or lose the denominator.
void divide_in_place(std::span<cplx> v, std::span<const cplx> d) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double dr = d[i].real();
    const double di = d[i].imag();
    const double s = dr * dr + di * di;
    const double vr = v[i].real();
    const double vi = v[i].imag();
    const double qr = (vr * dr + vi * di) / s;
    const double qi = (vi * dr - vr * di) / s;
    if (s > 1e-280 && s < 1e280 && std::isfinite(qr) && std::isfinite(qi)) v[i] = {qr, qi};
    else v[i] /= d[i];
  }
}

// out = num / den on z; scratch must be as long as z.
void rational_values(RatView f, std::span<const cplx> z, std::span<cplx> out, std::span<cplx> scratch) {
  f.num->evaluate(z, out);
  f.den->evaluate(z, scratch);
  divide_in_place(out.first(z.size()), scratch.first(z.size()));
}

// Sups of |fns[a] - fns[b]| for several pairs (a, b) in one sweep over K,
// each function evaluated once per point and only if some pair uses it. A
// pair hitting a non-finite difference records the error instead of a value.
struct PairSup {
  double value = 0.0;
  std::string error;
};

std::vector<PairSup> fused_sups(const std::vector<RatView>& fns, const std::vector<std::pair<int, int>>& pairs,
                                const CompactGrid& K) {
  constexpr std::size_t kChunk = 1024;
  std::vector<bool> used(fns.size(), false);
  for (const auto& [a, b] : pairs) used[static_cast<std::size_t>(a)] = used[static_cast<std::size_t>(b)] = true;

  std::vector<PairSup> out(pairs.size());
  std::vector<double> best2(pairs.size(), 0.0);
  std::vector<double> huge(pairs.size(), 0.0);  // modulus fallback once squares overflow
  std::vector<std::vector<cplx>> vals(fns.size(), std::vector<cplx>(kChunk));
  std::vector<cplx> den(kChunk);
  const std::span<const cplx> pts(K.points);
  for (std::size_t base = 0; base < pts.size(); base += kChunk) {
    const std::size_t len = std::min(kChunk, pts.size() - base);
    const auto z = pts.subspan(base, len);
    for (std::size_t k = 0; k < fns.size(); ++k) {
      if (!used[k]) continue;
      auto& v = vals[k];
      fns[k].num->evaluate(z, std::span<cplx>(v).first(len));
      if (fns[k].den->degree() == 0 && fns[k].den->coeffs()[0] == cplx{1.0}) continue;
      fns[k].den->evaluate(z, std::span<cplx>(den).first(len));
      divide_in_place(std::span<cplx>(v).first(len), std::span<const cplx>(den).first(len));
    }
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      if (!out[j].error.empty()) continue;
      const auto& va = vals[static_cast<std::size_t>(pairs[j].first)];
      const auto& vb = vals[static_cast<std::size_t>(pairs[j].second)];
      double m2max = best2[j];
      bool bad = false;
      for (std::size_t i = 0; i < len; ++i) {
        const double re = va[i].real() - vb[i].real();
        const double im = va[i].imag() - vb[i].imag();
        const double m2 = re * re + im * im;
        bad = bad || !std::isfinite(re) || !std::isfinite(im);
        m2max = std::max(m2max, m2);
      }
      if (!bad) {
        best2[j] = m2max;
        if (std::isinf(m2max))
          for (std::size_t i = 0; i < len; ++i) huge[j] = std::max(huge[j], std::abs(va[i] - vb[i]));
        continue;
      }
      for (std::size_t i = 0; i < len; ++i) {
        const cplx v = va[i] - vb[i];
        if (std::isfinite(v.real()) && std::isfinite(v.imag())) continue;
        out[j].error = Error(ErrorKind::NonFiniteValue,
                             "at (" + std::to_string(z[i].real()) + ", " + std::to_string(z[i].imag()) + ")")
                           .what();
        break;
      }
    }
  }
  for (std::size_t j = 0; j < pairs.size(); ++j)
    out[j].value = huge[j] > 0.0 ? huge[j] : std::sqrt(best2[j]);
  return out;
}

PadeApproximant pade_of(const RationalPair& f, PadeIndex idx, int slack) {
  return compute_pade(f.series(idx.p + idx.q + slack), idx);
}

std::vector<PoleAuditEntry> run_pole_audit(const ComplexPoly& den, const Region& region, int horizon,
                                           const GridPitch& pitch) {
  std::vector<PoleAuditEntry> out;
  for (int lam = 1; lam <= horizon; ++lam) {
    CompactGrid K;
    try {
      K = exhaustion_K(region, lam, pitch);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::EmptyCompact) continue;
      throw;
    }
    const double margin = 2.0 * K.h;
    const auto check = pole_free_on(den, K, margin);
    out.push_back({lam, margin, check.min_distance, check.pole_free});
  }
  return out;
}

}  // namespace

bool VerificationReport::passed() const {
  return !clauses.empty() &&
         std::all_of(clauses.begin(), clauses.end(), [](const ClauseResult& c) { return c.pass; });
}

const ClauseResult* VerificationReport::first_failure() const {
  for (const auto& c : clauses)
    if (!c.pass) return &c;
  return nullptr;
}

LambdaChoice select_lambda(const Region& region, int n, int N) {
  const int base = std::max(n, N);
  const double r = 1.0 / (2.0 * base + 2.0);
  // dist(., complement) is exact and 1-Lipschitz for every region kind, and
  // its minimum over the closed disk of radius r is dist(0) - r.
  const double clearance = region.dist_to_complement(0.0) - r;
  for (int lambda = base + 1; lambda <= base + 100000; ++lambda) {
    if (r < lambda && clearance > 1.0 / lambda) return {lambda, r};
  }
  throw Error(ErrorKind::InvalidArgument, "no lambda admits the disk of radius " + std::to_string(r));
}

RationalPair build_f_tilde(const Target& target, PadeIndex idx, cplx c, cplx d) {
  if (d == cplx{}) throw Error(ErrorKind::InvalidArgument, "d must be nonzero");
  const auto num = target.value.num + ComplexPoly::monomial(idx.p, d);
  if (idx.q == 0) {
    if (target.kind != TargetKind::polynomial)
      throw Error(ErrorKind::InvalidArgument, "q = 0 construction needs a polynomial target");
    return {num, ComplexPoly::constant(1.0)};
  }
  if (c == cplx{}) throw Error(ErrorKind::InvalidArgument, "c must be nonzero for q >= 1");
  return {num, target.value.den - ComplexPoly::monomial(idx.q, std::pow(c, idx.q))};
}

double fixed_point_deviation(const RationalPair& f, PadeIndex idx) {
  const auto r = pade_of(f, idx, kSeriesSlack);
  const cplx b0 = f.den[0];
  return std::max(coeff_deviation(r.numerator, f.num * (1.0 / b0)),
                  coeff_deviation(r.denominator, f.den * (1.0 / b0)));
}

ComplexPoly polynomial_surrogate(const RationalPair& f_tilde, const CompactGrid& K, double delta, int cap,
                                 int min_order) {
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta must be positive");
  const double radius = K.max_modulus();
  for (const auto& pole : polynomial_roots(f_tilde.den)) {
    if (!(std::abs(pole) > radius))
      throw Error(ErrorKind::SurrogateDivergence,
                  "pole of modulus " + std::to_string(std::abs(pole)) + " inside the Taylor disk", pole);
  }
  const auto series = f_tilde.series(cap);
  const auto a = series.coeffs();
  const double delta2 = delta * delta;
  const std::span<const cplx> pts(K.points);

  // err2[M] = max over K of |f_tilde - S_M|^2 for M <= hi, built chunk by
  // chunk so the per-point state stays in cache; hi grows until some
  // admissible order appears.
  constexpr std::size_t kChunk = 512;
  std::vector<cplx> target(kChunk);
  std::vector<cplx> den(kChunk);
  double pr[kChunk];
  double pi[kChunk];
  double sr[kChunk];
  double si[kChunk];
  for (int hi = std::min(cap, std::max(min_order, 0) + 2);; hi = std::min(cap, hi + std::max(4, hi / 2))) {
    std::vector<double> err2(static_cast<std::size_t>(hi) + 1, 0.0);
    for (std::size_t base = 0; base < pts.size(); base += kChunk) {
      const std::size_t len = std::min(kChunk, pts.size() - base);
      const auto z = pts.subspan(base, len);
      f_tilde.num.evaluate(z, std::span<cplx>(target).first(len));
      f_tilde.den.evaluate(z, std::span<cplx>(den).first(len));
      divide_in_place(std::span<cplx>(target).first(len), std::span<const cplx>(den).first(len));
      for (std::size_t i = 0; i < len; ++i) {
        pr[i] = 1.0;
        pi[i] = 0.0;
        sr[i] = 0.0;
        si[i] = 0.0;
      }
      for (int M = 0; M <= hi; ++M) {
        const double ar = a[static_cast<std::size_t>(M)].real();
        const double ai = a[static_cast<std::size_t>(M)].imag();
        double worst = err2[static_cast<std::size_t>(M)];
        for (std::size_t i = 0; i < len; ++i) {
          const double zr = z[i].real();
          const double zi = z[i].imag();
          sr[i] += ar * pr[i] - ai * pi[i];
          si[i] += ar * pi[i] + ai * pr[i];
          const double t = pr[i] * zr - pi[i] * zi;
          pi[i] = pr[i] * zi + pi[i] * zr;
          pr[i] = t;
          const double er = target[i].real() - sr[i];
          const double ei = target[i].imag() - si[i];
          worst = std::max(worst, er * er + ei * ei);
        }
        err2[static_cast<std::size_t>(M)] = worst;
      }
    }
    for (int M = std::max(min_order, 0); M <= hi; ++M)
      if (err2[static_cast<std::size_t>(M)] < delta2) return partial_sum(series, M);
    if (hi == cap) break;
  }
  throw Error(ErrorKind::SurrogateDivergence,
              "Taylor sums did not reach delta = " + std::to_string(delta) + " by order " + std::to_string(cap));
}

ComplexPoly polynomial_surrogate(const RationalPair& f_tilde, int lambda, double delta, const Region& region,
                                 const GridPitch& pitch, int cap, int min_order) {
  return polynomial_surrogate(f_tilde, exhaustion_K(region, lambda, pitch), delta, cap, min_order);
}

namespace {
// surrogate_known: the Taylor surrogate just computed by the constructor from
// the same inputs, so it is not rebuilt.
VerificationReport verify_impl(const DensityCertificate& cert, const GridPitch& pitch, int surrogate_cap,
                               const RationalPair* surrogate_known);
}  // namespace

DensityCertificate complete_certificate(const Target& target, PadeIndex idx, double eps, const Region& region,
                                        int n, int s, int N, cplx c, cplx d, double delta_tilde,
                                        const ConstructionOptions& opts) {
  check_common(idx, eps, n, s, N);
  DensityCertificate cert;
  cert.target = target;
  cert.index = idx;
  cert.region = region;
  cert.c = c;
  cert.d = d;
  cert.delta_tilde = delta_tilde;
  cert.n = n;
  cert.s = s;
  cert.N = N;
  cert.epsilon = eps;
  const auto choice = select_lambda(region, n, N);
  cert.lambda = choice.lambda;
  cert.r_radius = choice.r_radius;
  cert.audit_horizon = cert.lambda;

  const auto grids = make_grids(region, n, N, cert.lambda, opts.pitch);
  cert.f_tilde = build_f_tilde(target, idx, c, d);
  cert.delta = 0.5 * delta_bound(s, eps);

  if (idx.q == 0) {
    cert.runge_step = RungeStep::exact_q0;
    cert.f_final = cert.f_tilde;
  } else {
    const auto membership = hankel_determinant(cert.f_tilde.series(idx.p + idx.q + kSeriesSlack), idx);
    if (!membership.in_Dpq)
      throw Error(ErrorKind::CertificateFailed,
                  "membership: condition estimate " + std::to_string(membership.condition_estimate));
    const double dev = fixed_point_deviation(cert.f_tilde, idx);
    if (!(dev <= kFixedPointTol))
      throw Error(ErrorKind::CertificateFailed, "fixed point: deviation " + std::to_string(dev));

    if (target.kind == TargetKind::polynomial) {
      cert.runge_step = RungeStep::taylor_surrogate;
      const auto pade_tilde = pade_of(cert.f_tilde, idx, kSeriesSlack);
      bool settled = false;
      for (int attempt = 0; attempt < 30 && !settled; ++attempt) {
        const auto f = polynomial_surrogate(cert.f_tilde, grids.Klambda, cert.delta, opts.surrogate_cap,
                                            idx.p + idx.q);
        const RationalPair candidate{f, ComplexPoly::constant(1.0)};
        const auto pade_candidate = pade_of(candidate, idx, 0);
        const auto sup = fused_sups({view(pade_candidate), view(pade_tilde)}, {{0, 1}}, grids.Klambda)[0];
        if (!sup.error.empty()) throw Error(ErrorKind::NonFiniteValue, "[p/q] shift: " + sup.error);
        const double shift = sup.value;
        if (shift < 1.0 / (2.0 * s)) {
          cert.f_final = candidate;
          cert.surrogate_order = f.degree();
          settled = true;
        } else {
          cert.delta *= 0.5;
        }
      }
      if (!settled) throw Error(ErrorKind::CertificateFailed, "chain: [p/q] shift never fell below 1/(2s)");
    } else {
      cert.runge_step = RungeStep::pole_audit;
      cert.audit_horizon = cert.lambda + opts.audit_extra;
      cert.pole_audit = run_pole_audit(cert.f_tilde.den, region, cert.audit_horizon, opts.pitch);
      for (const auto& entry : cert.pole_audit)
        if (!entry.pole_free)
          throw Error(ErrorKind::PoleInRegion, "pole within margin of K_" + std::to_string(entry.lambda));
      cert.f_final = cert.f_tilde;
    }
  }

  const auto report = verify_impl(cert, opts.pitch, opts.surrogate_cap, &cert.f_final);
  if (const auto* bad = report.first_failure())
    throw Error(ErrorKind::CertificateFailed, bad->clause + (bad->detail.empty() ? "" : ": " + bad->detail));

  auto measured = [&](std::string_view name) {
    for (const auto& c : report.clauses)
      if (c.clause == name) return c.measured;
    return kNaN;
  };
  cert.achieved.sup_pade_error_Kn = measured("pade_error_Kn");
  cert.achieved.sup_f_minus_target_KN = measured("target_error_KN");
  if (idx.q >= 1) {
    cert.achieved.sup_ftilde_minus_target = measured("chain_target");
  } else {
    const auto tgt = as_evaluable(target.value);
    cert.achieved.sup_ftilde_minus_target = sup_diff(as_evaluable(cert.f_tilde), tgt, grids.Klambda);
  }
  const auto den = cert.f_tilde.den;
  cert.achieved.inf_denominator =
      den.degree() <= 0 ? std::abs(den[0]) : inf_norm([&](cplx z) { return den(z); }, grids.Klambda);
  return cert;
}

namespace {

// Shared retry loop: on a failure that the monotone-in-(|c|,|d|) argument can
// repair, halve delta_tilde and try again.
template <class Attempt>
DensityCertificate with_retries(double delta_tilde, int max_retries, Attempt&& attempt) {
  std::string last;
  ErrorKind last_kind = ErrorKind::CertificateFailed;
  for (int k = 0; k <= max_retries; ++k) {
    try {
      return attempt(delta_tilde);
    } catch (const Error& e) {
      switch (e.kind()) {
        case ErrorKind::CertificateFailed:
        case ErrorKind::PoleInRegion:
        case ErrorKind::NoAdmissibleD:
        case ErrorKind::InterpolationInconsistent:
        case ErrorKind::SurrogateDivergence:
        case ErrorKind::NotInDpq:
        case ErrorKind::SingularSystem:
          last = e.what();
          last_kind = e.kind() == ErrorKind::PoleInRegion ? ErrorKind::PoleInRegion : ErrorKind::CertificateFailed;
          delta_tilde *= 0.5;
          break;
        default:
          throw;
      }
    }
  }
  throw Error(last_kind, "after " + std::to_string(max_retries) + " retries: " + last);
}

}  // namespace

DensityCertificate construct_simply_connected(const ComplexPoly& P, PadeIndex idx, double eps,
                                              const Region& region, int n, int s, int N,
                                              const ConstructionOptions& opts) {
  check_common(idx, eps, n, s, N);
  if (!region.simply_connected())
    throw Error(ErrorKind::InvalidArgument, "simply connected construction needs a simply connected region");
  if (idx.p <= P.degree())
    throw Error(ErrorKind::IndexTooSmall,
                "p = " + std::to_string(idx.p) + " must exceed deg P = " + std::to_string(P.degree()));
  const auto target = Target::polynomial(P);
  const int p = idx.p;
  const int q = idx.q;

  if (q == 0) {
    const auto KN = exhaustion_K(region, N, opts.pitch);
    const double zp = sup_norm([p](cplx z) { return std::pow(z, p); }, KN);
    const double delta_tilde = zp > 0.0 ? eps / zp : eps;
    return complete_certificate(target, idx, eps, region, n, s, N, 0.0, 0.5 * delta_tilde, delta_tilde, opts);
  }

  const auto lambda = select_lambda(region, n, N).lambda;
  const auto Klambda = exhaustion_K(region, lambda, opts.pitch);
  const double Z = Klambda.max_modulus();
  const double normP = sup_norm([&](cplx z) { return P(z); }, Klambda);
  const double c_bound = std::pow(1.0 / (2.0 * std::pow(Z, q)), 1.0 / q);
  // ||f_tilde - P|| <= 2(|c|^q Z^q ||P|| + |d| Z^p) once |c| < c_bound. The
  // c term takes half of eps/2 and |c| sits at half its admissible radius;
  // delta_tilde is then the radius for d with that c.
  const auto c_term = [&](double t) { return 2.0 * std::pow(t * Z, q) * normP; };
  const double c0 = 0.5 * largest_admissible(c_term, eps / 4.0, c_bound);
  const auto d_estimate = [&](double t) { return c_term(c0) + 2.0 * t * std::pow(Z, p); };
  const double delta_tilde0 = largest_admissible(d_estimate, eps / 2.0, kUnbounded);

  return with_retries(delta_tilde0, opts.max_retries, [&](double delta_tilde) {
    const cplx c = c0 * (delta_tilde / delta_tilde0);
    const auto den = ComplexPoly::constant(1.0) - ComplexPoly::monomial(q, std::pow(c, q));
    const int order = p + q;
    const auto base = series_from_rational(P, den, order);
    const auto dir = series_from_rational(ComplexPoly::monomial(p), den, order);
    const auto bad = determinant_poly_in_d(base, dir, idx, 0.5 * delta_tilde);
    const cplx d = select_d(bad, delta_tilde);
    return complete_certificate(target, idx, eps, region, n, s, N, c, d, delta_tilde, opts);
  });
}

DensityCertificate construct_general(const ComplexPoly& A, const ComplexPoly& B, PadeIndex idx, double eps,
                                     const Region& region, int n, int s, int N,
                                     const ConstructionOptions& opts) {
  check_common(idx, eps, n, s, N);
  if (idx.p <= A.degree() || idx.q <= B.degree())
    throw Error(ErrorKind::IndexTooSmall, "need p > deg A and q > deg B");
  if (B.is_zero() || B[0] == cplx{}) throw Error(ErrorKind::PoleInRegion, "B(0) = 0");
  for (const auto& root : polynomial_roots(B))
    if (region.contains(root)) throw Error(ErrorKind::PoleInRegion, "root of B inside the region", root);

  const auto target = Target::rational(A, B);
  const int p = idx.p;
  const int q = idx.q;
  const auto lambda = select_lambda(region, n, N).lambda;
  const auto Klambda = exhaustion_K(region, lambda, opts.pitch);
  const double Z = Klambda.max_modulus();
  const double normA = sup_norm([&](cplx z) { return A(z); }, Klambda);
  const double normB = sup_norm([&](cplx z) { return B(z); }, Klambda);
  const double infB = inf_norm([&](cplx z) { return B(z); }, Klambda);
  if (!(infB > 0.0)) throw Error(ErrorKind::PoleInRegion, "B vanishes on K_lambda");
  const double c_bound = std::pow(infB, 1.0 / q) / Z;
  // ||f_tilde - R|| <= (||A|| |c|^q Z^q + |d| Z^p ||B||) / (inf|B| (inf|B| - |c|^q Z^q)).
  // c is chosen first from its own term (half of eps/2, half the radius),
  // delta_tilde is then the radius for d.
  const auto estimate = [&](double tc, double td) {
    const double cz = std::pow(tc * Z, q);
    return (normA * cz + td * std::pow(Z, p) * normB) / (infB * (infB - cz));
  };
  const double c0 = 0.5 * largest_admissible([&](double t) { return estimate(t, 0.0); }, eps / 4.0, c_bound);
  const double delta_tilde0 =
      largest_admissible([&](double t) { return estimate(c0, t); }, eps / 2.0, kUnbounded);

  return with_retries(delta_tilde0, opts.max_retries, [&](double delta_tilde) {
    const cplx c = c0 * (delta_tilde / delta_tilde0);
    const auto den = B - ComplexPoly::monomial(q, std::pow(c, q));
    const int order = p + q;
    const auto base = series_from_rational(A, den, order);
    const auto dir = series_from_rational(ComplexPoly::monomial(p), den, order);
    const auto bad = determinant_poly_in_d(base, dir, idx, 0.5 * delta_tilde);
    const cplx d = select_d(bad, delta_tilde);
    return complete_certificate(target, idx, eps, region, n, s, N, c, d, delta_tilde, opts);
  });
}

VerificationReport verify_certificate(const DensityCertificate& cert, const GridPitch& pitch, int surrogate_cap) {
  return verify_impl(cert, pitch, surrogate_cap, nullptr);
}

namespace {

VerificationReport verify_impl(const DensityCertificate& cert, const GridPitch& pitch, int surrogate_cap,
                               const RationalPair* surrogate_known) {
  VerificationReport report;
  auto add = [&](std::string name, double bound, double measured, bool pass, std::string detail = {}) {
    report.clauses.push_back({std::move(name), bound, measured, pass, std::move(detail)});
  };
  // Strict "measured < bound" clause whose measurement may throw.
  auto below = [&](std::string name, double bound, const std::function<double()>& measure) {
    try {
      const double m = measure();
      add(std::move(name), bound, m, m < bound);
    } catch (const Error& e) {
      add(std::move(name), bound, kNaN, false, e.what());
    }
  };

  const PadeIndex idx = cert.index;
  const int p = idx.p;
  const int q = idx.q;
  const double half_inv_s = 1.0 / (2.0 * cert.s);

  Grids grids;
  try {
    check_common(idx, cert.epsilon, cert.n, cert.s, cert.N);
    if (cert.lambda < 1) throw Error(ErrorKind::InvalidArgument, "lambda must be >= 1");
    grids = make_grids(cert.region, cert.n, cert.N, cert.lambda, pitch);
  } catch (const Error& e) {
    add("grids", 0.0, kNaN, false, e.what());
    return report;
  }

  // Structural invariants of the certificate itself.
  std::vector<std::string> violations;
  if (!(cert.lambda > std::max(cert.n, cert.N))) violations.push_back("lambda > max(n,N)");
  const double clearance = cert.region.dist_to_complement(0.0) - cert.r_radius;
  if (!(cert.r_radius > 0.0 && cert.r_radius < cert.lambda && clearance > 1.0 / cert.lambda))
    violations.push_back("closed disk of radius r inside K_lambda");
  if (!(std::abs(cert.d) > 0.0 && std::abs(cert.d) < cert.delta_tilde)) violations.push_back("0 < |d| < delta_tilde");
  if (!(cert.delta > 0.0 && cert.delta < delta_bound(cert.s, cert.epsilon)))
    violations.push_back("0 < delta < min(1/(2s), eps/2)");
  if (q >= 1) {
    if (!(std::abs(cert.c) > 0.0)) violations.push_back("c != 0");
    const double Z = grids.Klambda.max_modulus();
    try {
      double c_bound = 0.0;
      if (cert.target.kind == TargetKind::polynomial) {
        c_bound = std::pow(1.0 / (2.0 * std::pow(Z, q)), 1.0 / q);
      } else {
        const auto B = cert.target.value.den;
        c_bound = std::pow(inf_norm([&](cplx z) { return B(z); }, grids.Klambda), 1.0 / q) / Z;
      }
      if (!(std::abs(cert.c) < c_bound)) violations.push_back("|c| below its kind-specific bound");
    } catch (const Error&) {
      violations.push_back("target denominator finite on K_lambda");
    }
  }

  RationalPair f_tilde;
  RationalPair f_final;
  bool built = false;
  try {
    f_tilde = build_f_tilde(cert.target, idx, cert.c, cert.d);
    built = true;
  } catch (const Error& e) {
    violations.push_back(e.what());
  }
  {
    std::string detail;
    for (const auto& v : violations) detail += (detail.empty() ? "" : "; ") + v;
    add("structure", 0.0, static_cast<double>(violations.size()), violations.empty(), detail);
    if (!built) return report;
  }

  try {
    switch (cert.runge_step) {
      case RungeStep::exact_q0:
        if (q != 0) throw Error(ErrorKind::InvalidArgument, "exact_q0 step with q >= 1");
        f_final = f_tilde;
        break;
      case RungeStep::taylor_surrogate:
        if (surrogate_known) f_final = *surrogate_known;
        else f_final = {polynomial_surrogate(f_tilde, grids.Klambda, cert.delta, surrogate_cap, p + q),
                        ComplexPoly::constant(1.0)};
        break;
      case RungeStep::pole_audit:
        f_final = f_tilde;
        for (const auto& entry : run_pole_audit(f_tilde.den, cert.region, cert.audit_horizon, pitch))
          add("pole_audit_K" + std::to_string(entry.lambda), entry.margin, entry.min_distance, entry.pole_free);
        break;
    }
  } catch (const Error& e) {
    add("runge_step", 0.0, kNaN, false, e.what());
    return report;
  }
  add("stored_f_final", 1e-12,
      std::max(coeff_deviation(cert.f_final.num, f_final.num), coeff_deviation(cert.f_final.den, f_final.den)),
      coeff_deviation(cert.f_final.num, f_final.num) <= 1e-12 &&
          coeff_deviation(cert.f_final.den, f_final.den) <= 1e-12);

  MembershipReport membership;
  try {
    membership = hankel_determinant(f_final.series(p + q), idx);
    add("membership", kMembershipThreshold, membership.condition_estimate, membership.in_Dpq);
  } catch (const Error& e) {
    add("membership", kMembershipThreshold, kNaN, false, e.what());
  }
  if (q >= 1) below("fixed_point", kFixedPointTol, [&] { return fixed_point_deviation(f_tilde, idx); });

  PadeApproximant pade_f;
  PadeApproximant pade_ft;
  try {
    pade_f = pade_of(f_final, idx, 0);
    pade_ft = pade_of(f_tilde, idx, kSeriesSlack);
  } catch (const Error& e) {
    add("pade", 0.0, kNaN, false, e.what());
    return report;
  }

  auto record = [&](std::string name, double bound, const PairSup& r) {
    if (r.error.empty()) add(std::move(name), bound, r.value, r.value < bound);
    else add(std::move(name), bound, kNaN, false, r.error);
  };

  // indices into the function table below
  enum : int { kPadeF, kPadeFt, kFt, kFf, kTarget };
  const std::vector<RatView> fns{view(pade_f), view(pade_ft), view(f_tilde), view(f_final),
                                  view(cert.target.value)};
  if (cert.n == cert.N) {
    const auto r = fused_sups(fns, {{kPadeF, kFf}, {kFf, kTarget}}, grids.Kn);
    record("pade_error_Kn", 1.0 / cert.s, r[0]);
    record("target_error_KN", cert.epsilon, r[1]);
  } else {
    record("pade_error_Kn", 1.0 / cert.s, fused_sups(fns, {{kPadeF, kFf}}, grids.Kn)[0]);
    record("target_error_KN", cert.epsilon, fused_sups(fns, {{kFf, kTarget}}, grids.KN)[0]);
  }

  const auto lam = fused_sups(
      fns, {{kPadeF, kPadeFt}, {kFt, kFf}, {kPadeF, kFf}, {kPadeFt, kFt}, {kFt, kTarget}}, grids.Klambda);
  const PairSup& shift = lam[0];
  const PairSup& surrogate = lam[1];
  const PairSup& total = lam[2];
  const PairSup& fixed = lam[3];
  record("chain_pade_shift", half_inv_s, shift);
  record("chain_surrogate", cert.delta, surrogate);
  add("chain_delta", delta_bound(cert.s, cert.epsilon), cert.delta,
      cert.delta > 0.0 && cert.delta < delta_bound(cert.s, cert.epsilon));
  if (!total.error.empty() || !fixed.error.empty() || !shift.error.empty() || !surrogate.error.empty()) {
    const std::string why = !total.error.empty() ? total.error : !fixed.error.empty() ? fixed.error
                          : !shift.error.empty() ? shift.error : surrogate.error;
    add("chain_total", 1.0 / cert.s, total.error.empty() ? total.value : kNaN, false, why);
  } else {
    // [p/q]_f - f = ([p/q]_f - [p/q]_ft) + ([p/q]_ft - ft) + (ft - f); the
    // middle term is the fixed-point residual, zero up to roundoff.
    const bool triangle = total.value <= (shift.value + fixed.value + surrogate.value) * (1.0 + 1e-12) + 1e-300;
    add("chain_total", 1.0 / cert.s, total.value, total.value < 1.0 / cert.s && triangle,
        triangle ? "" : "triangle decomposition violated");
  }
  if (q >= 1) record("chain_target", cert.epsilon / 2.0, lam[4]);
  return report;
}

}  // namespace

double lemma22_delta_search(const RationalPair& f_tilde, PadeIndex idx, int lambda, double eps,
                            const Region& region, int trials, std::uint64_t seed, const GridPitch& pitch) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
  const auto K = exhaustion_K(region, lambda, pitch);
  const int order = idx.p + idx.q;
  const auto series = f_tilde.series(order);
  if (!hankel_determinant(series, idx).in_Dpq)
    throw Error(ErrorKind::NotInDpq, "f_tilde is not in D_{p,q}");
  const auto base = compute_pade(series, idx);
  if (!pole_free_on(base, K, 2.0 * K.h).pole_free)
    throw Error(ErrorKind::PoleInRegion, "[p/q] of f_tilde has a pole on K_lambda");

  const std::span<const cplx> pts(K.points);
  const std::size_t count = pts.size();
  std::vector<cplx> base_values(count);
  std::vector<cplx> scratch(count);
  rational_values(view(base), pts, base_values, scratch);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto coeffs = series.coeffs();
  std::vector<cplx> values(count);

  auto trial_passes = [&](const std::vector<cplx>& u, double delta) {
    const ComplexPoly pert{std::vector<cplx>(u)};
    pert.evaluate(pts, values);
    double size2 = 0.0;
    for (const auto& v : values) size2 = std::max(size2, v.real() * v.real() + v.imag() * v.imag());
    const double size = std::sqrt(size2);
    if (!(size > 0.0)) return true;
    const double scale = 0.5 * delta / size;
    std::vector<cplx> g(coeffs.begin(), coeffs.end());
    for (std::size_t v = 0; v < g.size(); ++v) g[v] += scale * u[v];
    const TaylorSeries gs(std::move(g));
    if (!hankel_determinant(gs, idx).in_Dpq) return false;
    try {
      const auto r = compute_pade(gs, idx);
      rational_values(view(r), pts, values, scratch);
      for (std::size_t i = 0; i < count; ++i) {
        const cplx diff = values[i] - base_values[i];
        if (!(std::abs(diff) < eps)) return false;
      }
    } catch (const Error&) {
      return false;
    }
    return true;
  };

  for (double delta = eps; delta >= 1e-12; delta *= 0.5) {
    bool all = true;
    for (int t = 0; t < trials; ++t) {
      std::vector<cplx> u(static_cast<std::size_t>(order) + 1);
      for (auto& x : u) x = cplx(unit(rng), unit(rng));
      // every draw is consumed even after a failure so the stream stays aligned
      if (all && !trial_passes(u, delta)) all = false;
    }
    if (all) return delta;
  }
  throw Error(ErrorKind::NoDeltaFound, "no delta >= 1e-12 kept every trial inside tolerance");
}

std::vector<cplx> cauchy_coefficients(const Evaluable& f, double r, int count, int nodes) {
  if (!(r > 0.0) || count < 1 || nodes < count)
    throw Error(ErrorKind::InvalidArgument, "need r > 0 and nodes >= count >= 1");
  std::vector<cplx> samples(static_cast<std::size_t>(nodes));
  const double two_pi = 2.0 * std::numbers::pi;
  for (int k = 0; k < nodes; ++k) samples[static_cast<std::size_t>(k)] = f(std::polar(r, two_pi * k / nodes));
  std::vector<cplx> out(static_cast<std::size_t>(count));
  for (int v = 0; v < count; ++v) {
    cplx acc{};
    for (int k = 0; k < nodes; ++k)
      acc += samples[static_cast<std::size_t>(k)] * std::polar(1.0, -two_pi * k * v / nodes);
    out[static_cast<std::size_t>(v)] = acc / (static_cast<double>(nodes) * std::pow(r, v));
  }
  return out;
}

}  // namespace padeforge
