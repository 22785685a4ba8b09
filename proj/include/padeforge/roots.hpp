#pragma once

#include <vector>

#include "padeforge/power_series.hpp"

namespace padeforge {

/// All roots of p (with multiplicity) by Aberth-Ehrlich iteration seeded from
/// the Newton polygon, followed by Newton polishing.
///
/// Each returned root has relative backward error
/// |p(x)| / sum |c_k| |x|^k at most 1e-10 unless the iteration stalls, in
/// which case anything up to 1e-8 is accepted; worse throws
/// RootFindingDivergence. Constant and zero polynomials have no roots.
std::vector<cplx> polynomial_roots(const ComplexPoly& p);

/// Relative backward error of x as a root of p.
double root_residual(const ComplexPoly& p, cplx x);

}  // namespace padeforge
