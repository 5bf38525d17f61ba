#include "dpa/critical_points.hpp"

#include <cmath>
#include <stdexcept>

namespace dpa {

CriticalPoint characteristic_point(const SystemParams& p)
{
    CriticalPoint cp;
    if (!phase_is_real(p.phi())) {
        cp.reason = "characteristic point defined only for sin(phi) = 0";
        return cp;
    }
    if (std::abs(p.delta()) > p.eps_mag()) {
        cp.reason = "|Delta| exceeds |eps|";
        return cp;
    }
    const double kappa = total_kappa(p);
    const double k = feedback_strength(p);
    const double e_delta = detuned_pump(p);
    if (k <= 0.0) {
        cp.reason = "no feedback (k = 0)";
        return cp;
    }
    const double cos_phi = std::cos(p.phi()) > 0.0 ? 1.0 : -1.0;
    const double arg = cos_phi * (e_delta - kappa) / k;
    if (arg < -1.0 || arg > 1.0) {
        cp.reason = "arccos argument outside [-1, 1]: |(|eps_Delta| - kappa) / k| > 1";
        return cp;
    }
    const double gap = kappa - e_delta;
    const double nu_sq = k * k - gap * gap;
    if (!(nu_sq > 0.0)) {
        cp.reason = "characteristic frequency vanishes";
        return cp;
    }
    cp.nu_c = std::sqrt(nu_sq);
    cp.tau_c = std::acos(arg) / cp.nu_c;
    cp.squeezed_floor = p.loss() == 0.0 ? 0.0 : 0.25 * p.loss() * p.kappa_c() / e_delta;
    if (cos_phi < 0.0) {
        cp.reason = "phi = pi: condition lies in a regime that is already unstable";
        return cp;
    }
    cp.valid = true;
    return cp;
}

double squeezed_floor(const SystemParams& p)
{
    const auto cp = characteristic_point(p);
    if (!cp.valid) throw std::domain_error("squeezed_floor: " + cp.reason);
    return cp.squeezed_floor;
}

SystemParams at_characteristic_delay(const SystemParams& p)
{
    const auto cp = characteristic_point(p);
    if (!cp.valid) throw std::domain_error("at_characteristic_delay: " + cp.reason);
    return p.with_tau(cp.tau_c);
}

double variance_near_characteristic(const SystemParams& p, double theta_prime, double rel_offset)
{
    const auto cp = characteristic_point(p);
    if (!cp.valid) throw std::domain_error("variance_near_characteristic: " + cp.reason);
    const auto at = p.with_tau(cp.tau_c);
    const double lo = raw_spectrum_variance(at, theta_prime, cp.nu_c * (1.0 - rel_offset));
    const double hi = raw_spectrum_variance(at, theta_prime, cp.nu_c * (1.0 + rel_offset));
    return 0.5 * (lo + hi);
}

bool antisqueezed_divergence_check(const SystemParams& p, double window)
{
    const auto cp = characteristic_point(p);
    if (!cp.valid || !(window > 0.0)) return false;
    const double theta = p.eps_phase();
    const auto grid = linspace(cp.nu_c - window, cp.nu_c + window, 4001);
    for (double nu : grid) {
        if (std::abs(nu - cp.nu_c) >= window) continue;
        const auto pt = squeezing_spectrum(p, theta, nu);
        if (pt.diverged || pt.decibels > 40.0) return true;
    }
    return false;
}

std::pair<double, double> feedback_strength_bounds(double kappa, double eps_mag)
{
    if (eps_mag < 0.0) throw std::invalid_argument("feedback_strength_bounds: |eps| must be >= 0");
    return {std::abs(kappa - eps_mag), kappa};
}

std::pair<double, double> nu_c_range(double kappa, double eps_mag)
{
    if (eps_mag < 0.0 || eps_mag > kappa) throw std::invalid_argument("nu_c_range: requires 0 <= |eps| <= kappa");
    return {0.0, std::sqrt(eps_mag * (2.0 * kappa - eps_mag))};
}

}  // namespace dpa
