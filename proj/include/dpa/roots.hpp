#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "dpa/errors.hpp"

namespace dpa {

using cplx = std::complex<double>;

/// Value and derivative of an entire characteristic function, plus a
/// magnitude scale used to normalise residuals (exponential factors make the
/// raw value span many orders of magnitude across a search region).
struct CharEval {
    cplx value;
    cplx derivative;
    double scale = 1.0;
};

using CharacteristicFn = std::function<CharEval(cplx)>;

/// Axis-aligned rectangle in the complex plane.
struct Region {
    double re_min = -5.0;
    double re_max = 2.0;
    double im_min = -10.0;
    double im_max = 10.0;

    bool contains(cplx z) const
    {
        return z.real() > re_min && z.real() < re_max && z.imag() > im_min && z.imag() < im_max;
    }
    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
};

struct CharacteristicRoot {
    double lambda_re = 0.0;
    double lambda_im = 0.0;
    double residual = 0.0;  // |g(lambda)| / scale
    int multiplicity = 1;

    cplx lambda() const { return {lambda_re, lambda_im}; }
};

struct RootSearchResult {
    std::vector<CharacteristicRoot> roots;  // sorted by descending real part
    int winding_count = 0;                  // zeros enclosed, from the argument principle
    int found_count = 0;                    // sum of multiplicities of `roots`
    bool complete = false;                  // found_count == winding_count
    Region region;                          // region actually searched (may be perturbed)
    int attempts = 1;

    /// Real part of the rightmost root, -inf when the region holds none.
    double max_re() const;
};

struct RootSearchOptions {
    double seed_step = 0.25;      // Newton seed spacing in both axes
    double leaf_size = 2.0;       // subregions at most this wide are seeded directly
    double initial_step = 0.05;   // starting segment length along contours
    double residual_tol = 1e-10;
    int max_attempts = 5;
};

/// Raised internally when a contour passes (numerically) through a zero.
class ContourError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Winding number of g around the closed polygon `vertices` (counter-clockwise),
/// with adaptive bisection of every edge until the phase step is below pi/2.
int winding_number(const CharacteristicFn& g, std::span<const cplx> vertices, double initial_step = 0.05);

/// Zeros of g enclosed by the rectangle.
int count_zeros(const CharacteristicFn& g, const Region& region, double initial_step = 0.05);

/// Damped Newton iteration. Returns the converged point (not necessarily a root:
/// callers check the residual).
cplx newton_refine(const CharacteristicFn& g, cplx seed, int max_iter = 80);

/// All zeros of g inside `region`, each refined by damped Newton and
/// certified against the argument-principle count. Subregions are split
/// recursively by winding number; leaves are seeded on a uniform grid plus
/// `extra_seeds`. If the outer contour meets a root, the region is enlarged
/// slightly and the search retried (up to options.max_attempts).
RootSearchResult find_roots(const CharacteristicFn& g, Region region, const RootSearchOptions& options = {},
                            std::span<const cplx> extra_seeds = {});

}  // namespace dpa
