#pragma once

#include <optional>

#include "dpa/params.hpp"
#include "dpa/roots.hpp"

namespace dpa {

/// Determinant of the delayed linear system for the mean quadratures,
/// (lambda + kappa + k cos(phi) e^{-lambda tau})^2 - |eps|^2 + (Delta + k sin(phi) e^{-lambda tau})^2.
cplx characteristic_function(const SystemParams& p, cplx lambda);

/// Value, derivative and residual scale of characteristic_function.
CharEval characteristic_eval(const SystemParams& p, cplx lambda);

/// Bound on |lambda| for any root with Re(lambda) >= 0.
double unstable_root_bound(const SystemParams& p);

/// lambda_r in [-5 kappa, 2 kappa], lambda_i in [-L, L] with L = max(10 kappa, 6 pi / tau).
/// Both extents are widened if needed to contain every possible unstable root.
Region default_search_region(const SystemParams& p);

/// All characteristic roots inside `region` (default region when omitted),
/// sorted by descending real part, with the argument-principle count.
/// tau = 0 is solved in closed form.
RootSearchResult rightmost_roots(const SystemParams& p, std::optional<Region> region = std::nullopt);

/// Real part of the rightmost root. Throws NumericalError if the search
/// could not certify its root count.
double max_growth_rate(const SystemParams& p);

struct StabilityVerdict {
    bool stable = false;               // sign of the rightmost real part (ground truth)
    double max_re = 0.0;
    double rightmost_im = 0.0;         // |Im| of the rightmost root
    bool zeroth_order_stable = false;  // kappa + k cos(nu tau) > |eps| at nu = rightmost_im
    bool certified = false;
};

/// Stability for phi = 0, Delta = 0. Returns the root-based verdict and,
/// for comparison, the zeroth-order inequality evaluated at the oscillation
/// frequency of the rightmost root.
StabilityVerdict stability_boundary_phi0(const SystemParams& p);

/// Delay-independent criterion kappa - k > |eps| for phi = pi, Delta = 0.
bool stability_boundary_phipi(const SystemParams& p);

}  // namespace dpa
