#include "padeforge/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "padeforge/errors.hpp"

namespace padeforge {
namespace {

constexpr double kAcceptResidual = 1e-8;

// Radii from the upper convex hull of (k, log|c_k|); one initial circle per
// hull edge with as many points as the edge spans.
std::vector<cplx> initial_guesses(std::span<const cplx> c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<int> hull;
  for (int k = 0; k <= n; ++k) {
    if (c[static_cast<std::size_t>(k)] == cplx{}) continue;
    const double yk = std::log(std::abs(c[static_cast<std::size_t>(k)]));
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2];
      const int b = hull.back();
      const double ya = std::log(std::abs(c[static_cast<std::size_t>(a)]));
      const double yb = std::log(std::abs(c[static_cast<std::size_t>(b)]));
      // drop b if it lies on or below the segment a-k
      if ((yb - ya) * (k - a) <= (yk - ya) * (b - a)) hull.pop_back();
      else break;
    }
    hull.push_back(k);
  }

  std::vector<cplx> z;
  z.reserve(static_cast<std::size_t>(n));
  // a constant rotation keeps seeds off the real axis
  const double offset = 0.4;
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    const int a = hull[e];
    const int b = hull[e + 1];
    const double r = std::pow(std::abs(c[static_cast<std::size_t>(a)]) /
                                  std::abs(c[static_cast<std::size_t>(b)]),
                              1.0 / (b - a));
    const int m = b - a;
    for (int j = 0; j < m; ++j)
      z.push_back(std::polar(r, 2.0 * std::numbers::pi * j / m + offset + 0.1 * static_cast<double>(e)));
  }
  return z;
}

// p(x) and p'(x) by Horner.
std::pair<cplx, cplx> eval_with_derivative(std::span<const cplx> c, cplx x) {
  cplx p{};
  cplx dp{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    dp = dp * x + p;
    p = p * x + *it;
  }
  return {p, dp};
}

}  // namespace

double root_residual(const ComplexPoly& p, cplx x) {
  const double scale = p.abs_sum(std::abs(x));
  return scale > 0.0 ? std::abs(p(x)) / scale : 0.0;
}

std::vector<cplx> polynomial_roots(const ComplexPoly& p) {
  if (p.degree() < 1) return {};
  const auto c = p.coeffs();

  // Exact zero roots are split off so the hull sees a nonzero constant term.
  std::size_t zeros = 0;
  while (c[zeros] == cplx{}) ++zeros;
  const auto rest = c.subspan(zeros);
  const ComplexPoly reduced(std::vector<cplx>(rest.begin(), rest.end()));

  std::vector<cplx> z = initial_guesses(rest);
  const std::size_t n = z.size();
  std::vector<bool> done(n, false);
  for (int iter = 0; iter < 500; ++iter) {
    bool all_done = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const auto [val, der] = eval_with_derivative(rest, z[i]);
      if (std::abs(val) <= 1e-16 * reduced.abs_sum(std::abs(z[i]))) {
        done[i] = true;
        continue;
      }
      all_done = false;
      const cplx ratio = val / der;
      cplx sum{};
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      const cplx step = ratio / (1.0 - ratio * sum);
      z[i] -= step;
      if (std::abs(step) <= 4e-16 * std::abs(z[i])) done[i] = true;
    }
    if (all_done) break;
  }

  for (auto& x : z) {
    for (int k = 0; k < 3; ++k) {
      const auto [val, der] = eval_with_derivative(rest, x);
      if (der == cplx{}) break;
      const cplx next = x - val / der;
      if (root_residual(reduced, next) < root_residual(reduced, x)) x = next;
      else break;
    }
    const double res = root_residual(reduced, x);
    if (!(res <= kAcceptResidual))
      throw Error(ErrorKind::RootFindingDivergence, "root residual " + std::to_string(res), x);
  }

  z.insert(z.begin(), zeros, cplx{});
  return z;
}

}  // namespace padeforge
