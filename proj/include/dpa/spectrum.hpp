#pragma once

#include <span>
#include <vector>

#include "dpa/params.hpp"

namespace dpa {

/// Shot-noise (vacuum) level of a quadrature variance.
inline constexpr double kVacuumVariance = 0.25;

/// Points whose |m(nu)|^2 / kappa^4 falls below this are flagged as diverged.
inline constexpr double kDivergenceGuard = 1e-18;

/// Plotting clamp for decibel values.
inline constexpr double kDbClamp = 200.0;

struct SpectrumPoint {
    double nu = 0.0;
    double theta_prime = 0.0;
    double variance = kVacuumVariance;  // +inf when diverged
    double decibels = 0.0;              // +kDbClamp when diverged
    bool diverged = false;
};

using SpectrumCurve = std::vector<SpectrumPoint>;

/// 10 log10(variance / (1/4)).
double variance_to_db(double variance);

/// Decibel value limited to [-kDbClamp, kDbClamp] for tabular output.
double plot_db(const SpectrumPoint& pt);

/// Quadrature angle theta + pi (the squeezed quadrature on resonance).
double squeezed_angle(const SystemParams& p);

/// Output quadrature squeezing spectrum of the left-hand output port at
/// sideband frequency `nu` and homodyne angle `theta_prime` (absolute; only
/// theta - theta_prime matters).
SpectrumPoint squeezing_spectrum(const SystemParams& p, double theta_prime, double nu);

/// Same evaluation without the divergence guard; returns the raw variance.
/// Useful for limits approached from a nearby frequency.
double raw_spectrum_variance(const SystemParams& p, double theta_prime, double nu);

/// One-sided DPA without feedback, on resonance. Requires eps < kappa.
double resonance_variance_no_feedback(double kappa, double eps_mag);

/// One-sided DPA with the beamsplitter feedback loop of reflectivity r, on
/// resonance. Effective decay kappa(r) = (1 - r) kappa / (1 + r); requires
/// r in [0, 1) and eps < kappa(r).
double resonance_variance_beamsplitter(double kappa, double eps_mag, double r);

/// On-resonance variance of our two-sided scheme for instantaneous lossless
/// feedback with sin(phi) = 0. Detuning enters through |eps_Delta|.
double resonance_variance_feedback(const SystemParams& p);

/// Homodyne angle of perfect squeezing, theta + pi - asin(Delta / |eps|).
double optimal_quadrature_angle(const SystemParams& p);

/// Pointwise spectrum over a strictly increasing grid.
SpectrumCurve spectrum_curve(const SystemParams& p, double theta_prime, std::span<const double> nu_grid);

/// `count` evenly spaced points on [start, stop] (inclusive). count == 1 yields {start}.
std::vector<double> linspace(double start, double stop, std::size_t count);

/// 2001 points over nu / kappa in [-3, 3].
std::vector<double> default_frequency_grid(double kappa = 1.0);

}  // namespace dpa
