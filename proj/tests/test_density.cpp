#include <doctest.h>

#include <cmath>
#include <random>

#include "padeforge/density.hpp"
#include "padeforge/errors.hpp"
#include "padeforge/io.hpp"
#include "padeforge/pade.hpp"
#include "test_helpers.hpp"

using namespace padeforge;
using testutil::throws_kind;

namespace {

const Region kHoled = Region::plane_minus_disks({{3.0, 0.5}});

void require_pass(const VerificationReport& rep) {
  for (const auto& c : rep.clauses) {
    INFO(c.clause << " measured " << c.measured << " bound " << c.bound << " " << c.detail);
    CHECK(c.pass);
  }
  CHECK(rep.passed());
}

const ClauseResult* find_clause(const VerificationReport& rep, const std::string& name) {
  for (const auto& c : rep.clauses)
    if (c.clause == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("select_lambda") {
  const auto wp = select_lambda(Region::whole_plane(), 2, 2);
  CHECK(wp.lambda == 3);
  CHECK(wp.r_radius == doctest::Approx(1.0 / 6.0));
  const auto holed = select_lambda(kHoled, 2, 3);
  CHECK(holed.lambda > 3);
  CHECK(holed.r_radius == doctest::Approx(1.0 / 8.0));
}

TEST_CASE("build_f_tilde") {
  const auto P = Target::polynomial(ComplexPoly{1.0, 2.0});
  const auto q0 = build_f_tilde(P, {3, 0}, 0.0, 0.5);
  CHECK(q0.num == ComplexPoly{1.0, 2.0, 0.0, 0.5});
  CHECK(q0.den == ComplexPoly::constant(1.0));
  const auto q2 = build_f_tilde(P, {3, 2}, 0.5, 0.25);
  CHECK(q2.den == ComplexPoly{1.0, 0.0, -0.25});
  CHECK(throws_kind([&] { build_f_tilde(P, {3, 2}, 0.0, 0.25); }, ErrorKind::InvalidArgument));
  CHECK(throws_kind([&] { build_f_tilde(P, {3, 2}, 0.5, 0.0); }, ErrorKind::InvalidArgument));
}

TEST_CASE("construct_simply_connected: P = 1, (2,1), whole plane") {
  const auto cert = construct_simply_connected(ComplexPoly::constant(1.0), {2, 1}, 0.1, Region::whole_plane(), 2, 10, 2);
  CHECK(cert.lambda > 2);
  CHECK(std::abs(cert.d) > 0.0);
  CHECK(std::abs(cert.d) < cert.delta_tilde);
  CHECK(std::abs(cert.c) > 0.0);
  // the only bad d is -c^2
  CHECK(std::abs(cert.d + cert.c * cert.c) > 0.0);
  CHECK(cert.delta < std::min(1.0 / 20.0, 0.05));
  CHECK(cert.runge_step == RungeStep::taylor_surrogate);
  CHECK(cert.f_tilde.den == ComplexPoly{1.0, -cert.c});
  CHECK(cert.f_final.den == ComplexPoly::constant(1.0));
  require_pass(verify_certificate(cert));
}

TEST_CASE("construct_simply_connected: q = 0") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const auto P = testutil::random_poly(rng, static_cast<int>(rng() % 4));
    const int p = P.degree() + 1 + static_cast<int>(rng() % 3);
    const auto cert = construct_simply_connected(P, {p, 0}, 0.1, Region::whole_plane(), 2, 10, 2);
    CHECK(cert.runge_step == RungeStep::exact_q0);
    const auto KN = exhaustion_K(Region::whole_plane(), 2);
    const double zp = sup_norm([p](cplx z) { return std::pow(z, p); }, KN);
    CHECK(std::abs(cert.d) == doctest::Approx(0.05 / zp).epsilon(1e-12));
    CHECK(cert.achieved.sup_f_minus_target_KN == doctest::Approx(std::abs(cert.d) * zp).epsilon(1e-12));
    CHECK(cert.achieved.sup_f_minus_target_KN < 0.1);
    const auto rep = verify_certificate(cert);
    require_pass(rep);
    const auto* c2 = find_clause(rep, "pade_error_Kn");
    REQUIRE(c2);
    CHECK(c2->measured == 0.0);
  }
}

TEST_CASE("construct_simply_connected: P = 0, (1,0) is d z") {
  const auto cert = construct_simply_connected(ComplexPoly(), {1, 0}, 0.1, Region::whole_plane(), 2, 10, 2);
  CHECK(cert.f_final.num == ComplexPoly::monomial(1, cert.d));
  const auto r = compute_pade(cert.f_final.series(6), {1, 0});
  CHECK(r.numerator == cert.f_final.num);
}

TEST_CASE("construct_simply_connected preconditions") {
  CHECK(throws_kind([] { construct_simply_connected(ComplexPoly::constant(1.0), {0, 1}, 0.1, Region::whole_plane(), 2, 10, 2); },
                    ErrorKind::IndexTooSmall));
  CHECK(throws_kind([] { construct_simply_connected(ComplexPoly{1.0, 1.0}, {1, 2}, 0.1, Region::whole_plane(), 2, 10, 2); },
                    ErrorKind::IndexTooSmall));
  CHECK(throws_kind([] { construct_simply_connected(ComplexPoly::constant(1.0), {2, 1}, 0.1, kHoled, 2, 10, 2); },
                    ErrorKind::InvalidArgument));
}

TEST_CASE("construct_simply_connected on a disk and a rectangle") {
  for (const auto& region : {Region::disk(0.0, 2.0), Region::rect({-1.0, -1.0}, {2.0, 1.0})}) {
    const auto cert = construct_simply_connected(ComplexPoly{0.5, -0.25, 0.1}, {4, 2}, 0.1, region, 2, 10, 2);
    require_pass(verify_certificate(cert));
  }
}

TEST_CASE("construct_general: 1/(1 - z/3) on the holed plane") {
  const ComplexPoly A = ComplexPoly::constant(1.0);
  const ComplexPoly B{1.0, -1.0 / 3.0};
  const auto cert = construct_general(A, B, {1, 2}, 0.1, kHoled, 2, 10, 2);
  CHECK(cert.runge_step == RungeStep::pole_audit);
  CHECK(cert.audit_horizon == cert.lambda + 3);
  REQUIRE(cert.pole_audit.size() == static_cast<std::size_t>(cert.audit_horizon));
  for (const auto& e : cert.pole_audit) CHECK(e.pole_free);
  // one root of B - (cz)^2 stays near 3, the other is far away
  const auto roots = pole_free_on(cert.f_tilde.den, exhaustion_K(kHoled, 2), 0.04).roots;
  REQUIRE(roots.size() == 2);
  const double near = std::min(std::abs(roots[0] - 3.0), std::abs(roots[1] - 3.0));
  const double far = std::max(std::abs(roots[0]), std::abs(roots[1]));
  CHECK(near < 0.5);
  CHECK(far > 10.0);
  require_pass(verify_certificate(cert));
}

TEST_CASE("construct_general: A = 0, B = 1 gives a fixed point d z / (1 - (cz)^2)") {
  const auto cert = construct_general(ComplexPoly(), ComplexPoly::constant(1.0), {1, 2}, 0.1, Region::whole_plane(), 2, 10, 2);
  CHECK(cert.f_tilde.num == ComplexPoly::monomial(1, cert.d));
  const auto r = compute_pade(cert.f_tilde.series(30), {1, 2});
  CHECK(std::abs(r.numerator[1] - cert.d) <= 1e-8 * std::abs(cert.d));
  CHECK(std::abs(r.denominator[2] + cert.c * cert.c) <= 1e-8 * std::abs(cert.c * cert.c));
  CHECK(fixed_point_deviation(cert.f_tilde, {1, 2}) <= 1e-8);
  require_pass(verify_certificate(cert));
}

TEST_CASE("construct_general preconditions") {
  // pole at 0.5 is inside the region
  CHECK(throws_kind([] { construct_general(ComplexPoly::constant(1.0), ComplexPoly{1.0, -2.0}, {1, 2}, 0.1, kHoled, 2, 10, 2); },
                    ErrorKind::PoleInRegion));
  CHECK(throws_kind([] { construct_general(ComplexPoly::constant(1.0), ComplexPoly{0.0, 1.0}, {1, 2}, 0.1, kHoled, 2, 10, 2); },
                    ErrorKind::PoleInRegion));
  CHECK(throws_kind([] { construct_general(ComplexPoly{1.0, 1.0}, ComplexPoly{1.0, -1.0 / 3.0}, {1, 2}, 0.1, kHoled, 2, 10, 2); },
                    ErrorKind::IndexTooSmall));
  CHECK(throws_kind([] { construct_general(ComplexPoly::constant(1.0), ComplexPoly{1.0, -1.0 / 3.0}, {1, 1}, 0.1, kHoled, 2, 10, 2); },
                    ErrorKind::IndexTooSmall));
}

TEST_CASE("c = 0 is rejected") {
  const auto target = Target::polynomial(ComplexPoly::constant(1.0));
  CHECK(throws_kind([&] { complete_certificate(target, {2, 1}, 0.1, Region::whole_plane(), 2, 10, 2, 0.0, 0.01, 0.1); },
                    ErrorKind::InvalidArgument));
}

TEST_CASE("polynomial_surrogate examples") {
  const auto K = exhaustion_K(Region::whole_plane(), 3, 0.02);
  const RationalPair geo{ComplexPoly::constant(1.0), ComplexPoly{1.0, -1.0 / 8.0}};
  const auto S = polynomial_surrogate(geo, K, 1e-3);
  const double M_est = std::log(1e-3 * (1.0 - 3.0 / 8.0)) / std::log(3.0 / 8.0);  // about 7.5 terms
  CHECK(std::abs((S.degree() + 1) - M_est) <= 1.0);
  for (int k = 0; k <= S.degree(); ++k) CHECK(std::abs(S[k] - std::pow(1.0 / 8.0, k)) <= 1e-15);

  const RationalPair poly{ComplexPoly{1.0, 2.0, 3.0}, ComplexPoly::constant(1.0)};
  CHECK(polynomial_surrogate(poly, K, 1e-12) == poly.num);

  CHECK(polynomial_surrogate(geo, K, 10.0).degree() == 0);

  const RationalPair close{ComplexPoly::constant(1.0), ComplexPoly{1.0, -0.5}};
  CHECK(throws_kind([&] { polynomial_surrogate(close, K, 1e-3); }, ErrorKind::SurrogateDivergence));
}

TEST_CASE("verify_certificate detects tampering") {
  const auto q0 = construct_simply_connected(ComplexPoly{1.0, 0.5}, {3, 0}, 0.1, Region::whole_plane(), 2, 10, 2);
  auto bad = q0;
  bad.d *= 10.0;
  const auto rep = verify_certificate(bad);
  CHECK_FALSE(rep.passed());
  const auto* c3 = find_clause(rep, "target_error_KN");
  REQUIRE(c3);
  CHECK_FALSE(c3->pass);

  const auto q1 = construct_simply_connected(ComplexPoly{1.0, 0.5}, {3, 1}, 0.1, Region::whole_plane(), 2, 10, 2);
  auto bad1 = q1;
  bad1.d *= 10.0;
  CHECK_FALSE(verify_certificate(bad1).passed());
  auto bad2 = q1;
  bad2.f_final.num *= 1.5;
  CHECK_FALSE(verify_certificate(bad2).passed());
}

TEST_CASE("lemma22_delta_search") {
  SUBCASE("exp truncation at (1,1)") {
    // [1/1] has its pole at z = 2, so K_lambda must stay inside |z| < 2: the unit disk with lambda = 3
    const RationalPair f{ComplexPoly{1.0, 1.0, 0.5}, ComplexPoly::constant(1.0)};
    const Region disk = Region::disk(0.0, 1.0);
    const double d1 = lemma22_delta_search(f, {1, 1}, 3, 0.1, disk, 200, 7);
    const double d2 = lemma22_delta_search(f, {1, 1}, 3, 0.1, disk, 200, 7);
    CHECK(d1 > 0.0);
    CHECK(d1 <= 0.1);
    CHECK(d1 == d2);
  }
  SUBCASE("membership-only run accepts the first step") {
    const auto cert = construct_simply_connected(ComplexPoly::constant(1.0), {2, 1}, 0.1, Region::whole_plane(), 2, 10, 2);
    // Membership survives perturbations of sup 1e9/2 on K_lambda ...
    const auto K = exhaustion_K(Region::whole_plane(), cert.lambda);
    const auto base = cert.f_tilde.series(3);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int t = 0; t < 50; ++t) {
      std::vector<cplx> u(4);
      for (auto& x : u) {
        const double re = unit(rng);
        x = cplx(re, unit(rng));
      }
      const ComplexPoly pert(u);
      const double scale = 0.5e9 / sup_norm([&](cplx z) { return pert(z); }, K);
      std::vector<cplx> g(base.coeffs().begin(), base.coeffs().end());
      for (std::size_t v = 0; v < g.size(); ++v) g[v] += scale * u[v];
      CHECK(hankel_determinant(TaylorSeries(g), {2, 1}).in_Dpq);
    }
    // ... while the sup bound on [p/q] still rejects some of them: poles of
    // [p/q]_g land near the grid, so the search settles a few halvings down.
    const double d = lemma22_delta_search(cert.f_tilde, {2, 1}, cert.lambda, 1e9, Region::whole_plane(), 50, 3);
    CHECK(d == lemma22_delta_search(cert.f_tilde, {2, 1}, cert.lambda, 1e9, Region::whole_plane(), 50, 3));
    CHECK(d >= 1e9 / 1024.0);
    CHECK(d <= 1e9);
  }
  SUBCASE("series outside D_pq") {
    const RationalPair f{ComplexPoly{1.0, 0.0, 1.0}, ComplexPoly::constant(1.0)};
    CHECK(throws_kind([&] { lemma22_delta_search(f, {1, 1}, 3, 0.1, Region::whole_plane(), 20, 1); },
                      ErrorKind::NotInDpq));
  }
}

TEST_CASE("property: Cauchy estimates bound coefficient differences") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testutil::random_poly(rng, 6);
    const double r = 0.5 + 0.1 * static_cast<double>(trial % 10);
    const Evaluable f = [](cplx z) { return std::exp(z); };
    const Evaluable g = [&](cplx z) { return std::exp(z) + 1e-3 * p(z); };
    const int count = 7;
    const auto af = cauchy_coefficients(f, r, count, 64);
    const auto ag = cauchy_coefficients(g, r, count, 64);
    double sigma = 0.0;
    for (int k = 0; k < 256; ++k) {
      const cplx z = std::polar(r, 2.0 * M_PI * k / 256.0);
      sigma = std::max(sigma, std::abs(f(z) - g(z)));
    }
    for (int v = 0; v < count; ++v) {
      CHECK(std::abs(af[v] - ag[v]) <= 2.0 * sigma / std::pow(r, v));
      CHECK(std::abs(ag[v] - ag[v]) == 0.0);
    }
    // exp coefficients come out right
    CHECK(std::abs(af[3] - 1.0 / 6.0) <= 1e-12);
  }
}

TEST_CASE("property: constructed f_tilde are fixed points; halving c and d keeps a pass") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 8; ++trial) {
    const auto P = testutil::random_poly(rng, static_cast<int>(rng() % 3));
    const PadeIndex idx{P.degree() + 1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 3)};
    const auto cert = construct_simply_connected(P, idx, 0.1, Region::whole_plane(), 2, 10, 2);
    CHECK(fixed_point_deviation(cert.f_tilde, idx) <= 1e-8);
    require_pass(verify_certificate(cert));
    const auto halved = complete_certificate(cert.target, idx, 0.1, Region::whole_plane(), 2, 10, 2, cert.c / 2.0,
                                             cert.d / 2.0, cert.delta_tilde);
    require_pass(verify_certificate(halved));
  }
  const auto gen = construct_general(ComplexPoly{0.5}, ComplexPoly{1.0, -1.0 / 3.0}, {2, 3}, 0.1, kHoled, 2, 10, 2);
  CHECK(fixed_point_deviation(gen.f_tilde, {2, 3}) <= 1e-8);
  const auto halved = complete_certificate(gen.target, {2, 3}, 0.1, kHoled, 2, 10, 2, gen.c / 2.0, gen.d / 2.0,
                                           gen.delta_tilde);
  require_pass(verify_certificate(halved));
}

TEST_CASE("certificate JSON round trip") {
  const auto cert = construct_general(ComplexPoly::constant(1.0), ComplexPoly{1.0, -1.0 / 3.0}, {1, 2}, 0.1, kHoled, 2, 10, 2);
  const json j = to_json(cert);
  const auto back = certificate_from_json(json::parse(j.dump()));
  CHECK(to_json(back).dump() == j.dump());
  require_pass(verify_certificate(back));
}
