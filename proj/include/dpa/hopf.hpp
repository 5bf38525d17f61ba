#pragma once

#include <span>
#include <vector>

#include "dpa/classical.hpp"

namespace dpa {

enum class PumpModel { depleted, undepleted };

struct HopfPoint {
    double x = 0.0;
    double tau = 0.0;
    double omega_hopf = 0.0;
    double residual = 0.0;  // |Re| of the rightmost root at the located x
};

struct HopfOptions {
    PumpModel model = PumpModel::depleted;
    double x_tolerance = 1e-6;
    int scan_points = 16;  // coarse x grid searched for sign changes before bisection
};

/// Characteristic function of the steady state tracked for the Hopf search:
/// the trivial branch below x_th and the upper branch above it. The
/// undepleted variant freezes the pump at x (stability-linear function with
/// |eps| = kappa x).
CharacteristicFn tracked_characteristic(const ClassicalParams& p, PumpModel model);

/// All characteristic roots of the tracked steady state in the default search region.
RootSearchResult tracked_roots(const ClassicalParams& p, PumpModel model);

/// True when the tracked steady state has a characteristic root with Re > 0.
bool tracked_unstable(const ClassicalParams& p, PumpModel model);

/// For each tau, scans x over [x_min, x_max] for stability changes of the
/// tracked steady state and bisects each to x_tolerance. Crossings through a
/// real root (pitchfork) are dropped; taus with no crossing contribute nothing.
std::vector<HopfPoint> hopf_locus(const ClassicalParams& p, std::span<const double> taus, double x_min, double x_max,
                                  const HopfOptions& options = {});

}  // namespace dpa
