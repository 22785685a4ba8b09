#include <doctest.h>

#include <algorithm>
#include <random>

#include "padeforge/errors.hpp"
#include "padeforge/power_series.hpp"
#include "test_helpers.hpp"

using namespace padeforge;
using testutil::throws_kind;

TEST_CASE("series_from_rational: geometric series") {
  const auto s = series_from_rational({1.0}, {1.0, -1.0}, 4);
  REQUIRE(s.truncation_order() == 4);
  for (auto c : s.coeffs()) CHECK(c == cplx{1.0});
}

TEST_CASE("series_from_rational: 1/(1+z^2) by hand long division") {
  const auto s = series_from_rational({1.0}, {1.0, 0.0, 1.0}, 5);
  const std::vector<cplx> want{1, 0, -1, 0, 1, 0};
  for (int v = 0; v <= 5; ++v) CHECK(s.at(v) == want[static_cast<std::size_t>(v)]);
}

TEST_CASE("series_from_rational: (P + d z^p)/(1 - (cz)^q) starts P + d z^p + P (cz)^q") {
  // P = 1 + 2z, p = 2, q = 1: f = (1 + 2z + d z^2) * sum (cz)^k
  const cplx c = 0.3;
  const cplx d = 0.05;
  const auto s = series_from_rational({1.0, 2.0, d}, {1.0, -c}, 4);
  CHECK(std::abs(s.at(0) - 1.0) < 1e-15);
  CHECK(std::abs(s.at(1) - (2.0 + c)) < 1e-15);
  CHECK(std::abs(s.at(2) - (d + 2.0 * c + c * c)) < 1e-15);
  CHECK(std::abs(s.at(3) - (d * c + 2.0 * c * c + c * c * c)) < 1e-15);
}

TEST_CASE("series_from_rational: pole at the expansion point") {
  CHECK(throws_kind([] { series_from_rational({1.0}, {0.0, 1.0}, 3); }, ErrorKind::DenominatorVanishesAtZero));
}

TEST_CASE("partial_sum") {
  const TaylorSeries s({1.0, 2.0, 3.0});
  CHECK(partial_sum(s, 1) == ComplexPoly{1.0, 2.0});
  CHECK(partial_sum(TaylorSeries({1.0, 1.0, 1.0}), -2).is_zero());
  CHECK(partial_sum(TaylorSeries({5.0}), 0) == ComplexPoly::constant(5.0));
  CHECK(throws_kind([&] { partial_sum(s, 3); }, ErrorKind::TruncationExceeded));
}

TEST_CASE("series_multiply") {
  CHECK(series_multiply(TaylorSeries({1.0, 1.0, 0.0}), TaylorSeries({1.0, 1.0, 0.0}), 2) ==
        TaylorSeries({1.0, 2.0, 1.0}));
  CHECK(series_multiply(TaylorSeries({1.0, 0.0, 0.0}), TaylorSeries({0.0, 1.0, 0.0}), 2) ==
        TaylorSeries({0.0, 1.0, 0.0}));
  // telescoping: (1 + z + z^2 + z^3)(1 - z) = 1 - z^4
  CHECK(series_multiply(geometric_series(3), TaylorSeries({1.0, -1.0, 0.0, 0.0}), 3) ==
        TaylorSeries({1.0, 0.0, 0.0, 0.0}));
  CHECK(throws_kind([] { series_multiply(geometric_series(2), geometric_series(4), 3); },
                    ErrorKind::TruncationExceeded));
}

TEST_CASE("TaylorSeries rejects non-finite coefficients") {
  CHECK(throws_kind([] { TaylorSeries({1.0, cplx(std::nan(""), 0.0)}); }, ErrorKind::InvalidArgument));
  CHECK(throws_kind([] { TaylorSeries(std::vector<cplx>{}); }, ErrorKind::InvalidArgument));
}

TEST_CASE("ComplexPoly trims exact trailing zeros") {
  const ComplexPoly p{1.0, 2.0, 0.0, 0.0};
  CHECK(p.degree() == 1);
  CHECK(ComplexPoly{0.0, 0.0}.is_zero());
  CHECK(ComplexPoly().degree() == -1);
  CHECK((ComplexPoly{1.0, 1.0} * ComplexPoly{1.0, -1.0}) == ComplexPoly{1.0, 0.0, -1.0});
  CHECK(ComplexPoly::monomial(3, 2.0).shifted(1) == ComplexPoly::monomial(4, 2.0));
}

// Property checks over random rational functions and series.
TEST_CASE("property: expansion times denominator reproduces the numerator") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int dn = static_cast<int>(rng() % 6);
    const int dd = static_cast<int>(rng() % 5);
    auto num = testutil::random_poly(rng, dn);
    auto den = testutil::random_poly(rng, dd);
    std::vector<cplx> dc(den.coeffs().begin(), den.coeffs().end());
    dc[0] = 1.0 + 0.5 * testutil::unit_square(rng);
    den = ComplexPoly(dc);
    const int M = 12;
    const auto s = series_from_rational(num, den, M);
    const auto back = series_multiply(s, series_from_poly(den, M), M);
    // Roundoff in the product scales with the summands, not with num_v.
    for (int v = 0; v <= M; ++v) {
      double scale = 1.0;
      for (int j = 0; j <= std::min(v, den.degree()); ++j) scale = std::max(scale, std::abs(den[j] * s.at(v - j)));
      CHECK(std::abs(back.at(v) - num[v]) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("property: partial sums start at a_0; products commute and associate") {
  std::mt19937_64 rng(12);
  auto random_series = [&](int M) {
    std::vector<cplx> c(static_cast<std::size_t>(M) + 1);
    for (auto& x : c) x = testutil::unit_square(rng);
    return TaylorSeries(std::move(c));
  };
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_series(8);
    const auto b = random_series(9);
    const auto c = random_series(10);
    for (int k = 0; k <= 8; ++k) CHECK(partial_sum(a, k)(0.0) == a.at(0));
    const auto ab = series_multiply(a, b, 8);
    const auto ba = series_multiply(b, a, 8);
    const auto ab_c = series_multiply(ab, c, 8);
    const auto a_bc = series_multiply(a, series_multiply(b, c, 8), 8);
    for (int v = 0; v <= 8; ++v) {
      CHECK(testutil::rel_err(ab.at(v), ba.at(v)) <= 1e-12);
      CHECK(testutil::rel_err(ab_c.at(v), a_bc.at(v)) <= 1e-12);
    }
  }
}

TEST_CASE("batched evaluation matches pointwise Horner") {
  std::mt19937_64 rng(13);
  for (int deg : {-1, 0, 1, 7, 30}) {
    const ComplexPoly p = deg < 0 ? ComplexPoly() : testutil::random_poly(rng, deg);
    std::vector<cplx> z(1000);
    for (auto& x : z) x = 2.0 * testutil::unit_square(rng);
    std::vector<cplx> out(z.size());
    p.evaluate(z, out);
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(out[i] == p(z[i]));
  }
}
