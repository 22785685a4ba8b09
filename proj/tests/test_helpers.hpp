#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "padeforge/errors.hpp"
#include "padeforge/power_series.hpp"

namespace testutil {

using padeforge::cplx;

// Re and Im uniform in [-1, 1].
inline cplx unit_square(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double re = u(rng);
  return {re, u(rng)};
}

inline padeforge::ComplexPoly random_poly(std::mt19937_64& rng, int degree) {
  std::vector<cplx> c(static_cast<std::size_t>(degree) + 1);
  for (auto& x : c) x = unit_square(rng);
  return padeforge::ComplexPoly(std::move(c));
}

inline double rel_err(cplx got, cplx want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

template <class F>
padeforge::ErrorKind error_kind_of(F&& f) {
  try {
    f();
  } catch (const padeforge::Error& e) {
    return e.kind();
  }
  return padeforge::ErrorKind::InvalidArgument;  // sentinel: nothing thrown
}

template <class F>
bool throws_kind(F&& f, padeforge::ErrorKind kind) {
  try {
    f();
  } catch (const padeforge::Error& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace testutil
