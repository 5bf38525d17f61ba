#pragma once

#include <string>
#include <utility>

#include "dpa/params.hpp"
#include "dpa/spectrum.hpp"

namespace dpa {

/// Sideband frequency and delay at which m(nu) vanishes, i.e. the linear
/// system is marginally stable and the lossless output is perfectly squeezed.
struct CriticalPoint {
    double nu_c = 0.0;
    double tau_c = 0.0;
    double squeezed_floor = 0.0;  // limiting squeezed-quadrature variance at (nu_c, tau_c)
    bool valid = false;
    std::string reason;           // why the point is invalid; empty when valid
};

/// Characteristic point for sin(phi) = 0. Uses the loss-reduced feedback
/// strength and |eps_Delta| for finite detuning. The phi = pi branch is
/// returned with valid = false: it only exists where the system is already
/// unstable. The tau stored in `p` is ignored.
CriticalPoint characteristic_point(const SystemParams& p);

/// (1/4) L kappa_c / |eps_Delta|; zero for a lossless loop. Throws
/// std::domain_error when the characteristic point is invalid.
double squeezed_floor(const SystemParams& p);

/// Copy of `p` with tau set to tau_c. Throws std::domain_error when invalid.
SystemParams at_characteristic_delay(const SystemParams& p);

/// Squeezed-quadrature limit at the characteristic point, probed at
/// nu_c (1 +- offset) with tau = tau_c and averaged over both sides.
/// The exact point is a removable 0/0 of the spectrum formula.
double variance_near_characteristic(const SystemParams& p, double theta_prime, double rel_offset = 1e-5);

/// True iff the theta' = theta spectrum exceeds +40 dB somewhere within
/// |nu - nu_c| < window, using the delay stored in `p`. Returns false when
/// there is no characteristic point (no sideband singularity exists).
bool antisqueezed_divergence_check(const SystemParams& p, double window);

/// (|kappa - |eps||, kappa): feedback strengths admitting a characteristic point.
std::pair<double, double> feedback_strength_bounds(double kappa, double eps_mag);

/// (0, sqrt(|eps| (2 kappa - |eps|))): reachable characteristic frequencies.
std::pair<double, double> nu_c_range(double kappa, double eps_mag);

}  // namespace dpa
