#include "dpa/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dpa {

double variance_to_db(double variance) { return 10.0 * std::log10(variance / kVacuumVariance); }

double plot_db(const SpectrumPoint& pt)
{
    if (pt.diverged) return kDbClamp;
    if (std::isnan(pt.decibels)) return kDbClamp;
    return std::clamp(pt.decibels, -kDbClamp, kDbClamp);
}

double squeezed_angle(const SystemParams& p) { return p.eps_phase() + kPi; }

namespace {

// Deep squeezing is a near-cancellation between weights of size 1 / |m|, so
// the weights are formed in extended precision.
using real_x = long double;
using cplx_x = std::complex<real_x>;

// Output field of the left port at sideband nu written as
//   b(nu) = w_in c(nu) + v_in c^dag(-nu) + w_loss l(nu) + v_loss l^dag(-nu)
// for the right-hand vacuum input c and the loop-loss port l.
struct InputWeights {
    cplx_x w_in, v_in, w_loss, v_loss;
};

InputWeights input_weights(const SystemParams& p, real_x nu)
{
    const real_x kb = p.kappa_b(), kc = p.kappa_c(), loss = p.loss();
    const real_x kappa = kb + kc;
    const real_x k = 2 * std::sqrt(kb * kc * (1 - loss));
    const real_x e = p.eps_mag(), phi = p.phi(), tau = p.tau(), delta = p.delta();
    const cplx_x i(0, 1);
    const cplx_x eps = std::polar(e, static_cast<real_x>(p.eps_phase()));
    const cplx_x loop = std::exp(i * (phi + nu * tau));
    const cplx_x loop_neg = std::exp(i * (phi - nu * tau));

    const cplx_x dp = kappa - i * (nu + delta) + k * std::exp(-i * (phi - nu * tau));
    const cplx_x dm = kappa - i * (nu - delta) + k * loop;
    const cplx_x m = dp * dm - e * e;
    // f_b / sqrt(2 kappa_b), finite for kappa_b = 0
    const cplx_x gb = std::sqrt(2 * kb) + std::sqrt(2 * kc * (1 - loss)) * loop;
    const cplx_x pre = -std::sqrt(2 * kappa) / m * gb;

    const real_x root_b = std::sqrt(kb * (1 - loss));
    const cplx_x into = (std::sqrt(kc) + root_b * loop) / std::sqrt(kappa);
    const cplx_x into_neg = (std::sqrt(kc) + root_b * loop_neg) / std::sqrt(kappa);
    const real_x leak = std::sqrt(kb * loss / kappa);

    InputWeights w;
    w.w_in = pre * dp * into + std::sqrt(1 - loss) * loop;
    w.v_in = pre * eps * std::conj(into_neg);
    w.w_loss = pre * dp * leak + std::sqrt(loss);
    w.v_loss = pre * eps * leak;
    return w;
}

}  // namespace

// Sum of squared quadrature weights of the two independent vacuum inputs.
double raw_spectrum_variance(const SystemParams& p, double theta_prime, double nu)
{
    const InputWeights pos = input_weights(p, nu);
    const InputWeights neg = input_weights(p, -static_cast<real_x>(nu));
    const cplx_x lo = std::exp(cplx_x(0, -static_cast<real_x>(theta_prime) / 2));
    const cplx_x u_in = (lo * pos.w_in + std::conj(lo * neg.v_in)) / real_x(2);
    const cplx_x u_loss = (lo * pos.w_loss + std::conj(lo * neg.v_loss)) / real_x(2);
    return static_cast<double>(std::norm(u_in) + std::norm(u_loss));
}

SpectrumPoint squeezing_spectrum(const SystemParams& p, double theta_prime, double nu)
{
    SpectrumPoint pt;
    pt.nu = nu;
    pt.theta_prime = theta_prime;

    const double kappa = total_kappa(p);
    const double e = p.eps_mag();
    const cplx m = d_plus(p, nu) * d_minus(p, nu) - e * e;
    if (e > 0.0 && std::norm(m) / std::pow(kappa, 4) < kDivergenceGuard) {
        pt.diverged = true;
        pt.variance = std::numeric_limits<double>::infinity();
        pt.decibels = kDbClamp;
        return pt;
    }
    if (e == 0.0) {
        pt.variance = kVacuumVariance;
        pt.decibels = 0.0;
        return pt;
    }
    pt.variance = raw_spectrum_variance(p, theta_prime, nu);
    pt.decibels = variance_to_db(pt.variance);
    return pt;
}

double resonance_variance_no_feedback(double kappa, double eps_mag)
{
    if (!(kappa > 0.0) || eps_mag < 0.0) throw std::invalid_argument("resonance_variance_no_feedback: bad rates");
    if (eps_mag >= kappa) throw std::domain_error("resonance_variance_no_feedback: pump at or above threshold");
    const double r = (kappa - eps_mag) / (kappa + eps_mag);
    return kVacuumVariance * r * r;
}

double resonance_variance_beamsplitter(double kappa, double eps_mag, double r)
{
    if (!(r >= 0.0 && r < 1.0)) throw std::domain_error("resonance_variance_beamsplitter: r must lie in [0, 1)");
    const double kappa_r = (1.0 - r) * kappa / (1.0 + r);
    if (eps_mag >= kappa_r) throw std::domain_error("resonance_variance_beamsplitter: pump at or above threshold");
    const double q = (kappa_r - eps_mag) / (kappa_r + eps_mag);
    return kVacuumVariance * q * q;
}

double resonance_variance_feedback(const SystemParams& p)
{
    if (!phase_is_real(p.phi())) throw std::domain_error("resonance_variance_feedback: requires sin(phi) = 0");
    if (p.loss() != 0.0) throw std::domain_error("resonance_variance_feedback: requires L = 0");
    if (p.tau() != 0.0) throw std::domain_error("resonance_variance_feedback: requires tau = 0");
    const double e_delta = detuned_pump(p);
    const double eff = total_kappa(p) + feedback_strength(p) * std::cos(p.phi());
    // eff == |eps_Delta| is the (perfectly squeezed) threshold itself; allow rounding in k
    if (e_delta > eff * (1.0 + 1e-12) || eff + e_delta <= 0.0)
        throw std::domain_error("resonance_variance_feedback: pump above the shifted threshold");
    const double q = std::max(0.0, eff - e_delta) / (eff + e_delta);
    return kVacuumVariance * q * q;
}

double optimal_quadrature_angle(const SystemParams& p)
{
    if (p.eps_mag() == 0.0) throw std::domain_error("optimal_quadrature_angle: no pump, no squeezed quadrature");
    if (std::abs(p.delta()) > p.eps_mag()) throw std::domain_error("optimal_quadrature_angle: |Delta| > |eps|");
    return p.eps_phase() + kPi - std::asin(p.delta() / p.eps_mag());
}

SpectrumCurve spectrum_curve(const SystemParams& p, double theta_prime, std::span<const double> nu_grid)
{
    if (nu_grid.empty()) throw std::invalid_argument("spectrum_curve: empty frequency grid");
    for (std::size_t j = 1; j < nu_grid.size(); ++j)
        if (!(nu_grid[j] > nu_grid[j - 1]))
            throw std::invalid_argument("spectrum_curve: grid must be strictly increasing");
    SpectrumCurve out;
    out.reserve(nu_grid.size());
    for (double nu : nu_grid) out.push_back(squeezing_spectrum(p, theta_prime, nu));
    return out;
}

std::vector<double> linspace(double start, double stop, std::size_t count)
{
    std::vector<double> g;
    if (count == 0) return g;
    g.reserve(count);
    if (count == 1) {
        g.push_back(start);
        return g;
    }
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (std::size_t j = 0; j < count; ++j) g.push_back(start + step * static_cast<double>(j));
    g.back() = stop;
    return g;
}

std::vector<double> default_frequency_grid(double kappa) { return linspace(-3.0 * kappa, 3.0 * kappa, 2001); }

}  // namespace dpa
