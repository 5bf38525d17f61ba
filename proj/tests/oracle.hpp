#pragma once

// Reference formulas written out independently of the library, for
// cross-checking. Only plain doubles and std::complex go in or out.

#include <array>
#include <cmath>
#include <complex>
#include <random>

namespace oracle {

using cplx = std::complex<double>;

struct Setup {
    double kb = 0.5;
    double kc = 0.5;
    double loss = 0.0;
    double phi = 0.0;
    double tau = 0.0;
    double delta = 0.0;
    double eps = 0.0;
    double theta = 0.0;
};

inline double feedback(const Setup& s) { return 2.0 * std::sqrt(s.kb * s.kc * (1.0 - s.loss)); }

// kappa - i(nu + sign Delta) + k e^{-i sign (phi - sign nu tau)}
inline cplx dpm(const Setup& s, double nu, int sign)
{
    const double kappa = s.kb + s.kc;
    const double sg = sign;
    return kappa - cplx(0.0, nu + sg * s.delta) +
           feedback(s) * std::exp(cplx(0.0, -sg * (s.phi - sg * nu * s.tau)));
}

// Quadrature variance of the left output obtained by solving the linear
// input-output problem directly: express b_out(nu) through the two vacuum
// inputs (the right-hand input and the loss port) and their conjugates at
// -nu, then sum the squared quadrature weights.
inline double output_variance(const Setup& s, double theta_prime, double nu)
{
    const double kappa = s.kb + s.kc;
    const double k = feedback(s);
    const cplx eps = std::polar(s.eps, s.theta);
    const double e2 = s.eps * s.eps;

    auto alpha = [&](double n) {
        return (std::sqrt(s.kc) + std::sqrt(s.kb * (1.0 - s.loss)) * std::exp(cplx(0.0, s.phi + n * s.tau))) /
               std::sqrt(kappa);
    };
    const double beta = std::sqrt(s.kb * s.loss / kappa);

    // {input, conj(input at -nu), loss, conj(loss at -nu)} coefficients
    auto coeffs = [&](double n) {
        const cplx m = dpm(s, n, 1) * dpm(s, n, -1) - e2;
        const cplx fb = 2.0 * s.kb + k * std::exp(cplx(0.0, s.phi + n * s.tau));
        const cplx pre = -std::sqrt(2.0 * kappa) / m * fb / std::sqrt(2.0 * s.kb);
        const cplx loop = std::sqrt(1.0 - s.loss) * std::exp(cplx(0.0, s.phi + n * s.tau));
        return std::array<cplx, 4>{pre * dpm(s, n, 1) * alpha(n) + loop, pre * eps * std::conj(alpha(-n)),
                                   pre * dpm(s, n, 1) * beta + std::sqrt(s.loss), pre * eps * beta};
    };
    const auto a = coeffs(nu);
    const auto b = coeffs(-nu);
    double total = 0.0;
    for (int j = 0; j < 2; ++j) {
        const cplx u = 0.5 * (std::exp(cplx(0.0, -theta_prime / 2)) * a[2 * j] +
                              std::exp(cplx(0.0, theta_prime / 2)) * std::conj(b[2 * j + 1]));
        total += std::norm(u);
    }
    return total;
}

// Closed-form variance: prefactor |eps| / (4 kappa_b |m|^2) times a phase
// term and a diagonal term, plus the vacuum level. Requires kappa_b > 0.
// Loses relative precision when the result is far below 1/4.
inline double closed_form_variance(const Setup& s, double theta_prime, double nu)
{
    const double e = s.eps;
    const double k = feedback(s);
    auto fb = [&](double n) { return 2.0 * s.kb + k * std::exp(cplx(0.0, s.phi + n * s.tau)); };
    const cplx m = dpm(s, nu, 1) * dpm(s, nu, -1) - e * e;
    const double phase = std::real(std::exp(cplx(0.0, s.theta - theta_prime)) *
                                   (dpm(s, nu, 1) * dpm(s, -nu, 1) + e * e) * fb(nu) * fb(-nu));
    const double diag = e * (std::real(dpm(s, nu, -1)) * std::norm(fb(-nu)) + std::real(dpm(s, nu, 1)) * std::norm(fb(nu)));
    return e / (4.0 * s.kb) / std::norm(m) * (phase + diag) + 0.25;
}

// One-sided cavity without feedback, squeezed quadrature on resonance.
inline double one_sided_resonance(double kappa, double eps)
{
    return 0.25 * (kappa - eps) * (kappa - eps) / ((kappa + eps) * (kappa + eps));
}

inline std::mt19937_64& rng()
{
    static std::mt19937_64 gen(20261015);
    return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace oracle
