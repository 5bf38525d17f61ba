#include "dpa/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dpa {

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok) throw std::invalid_argument("SystemParams: " + what);
}

}  // namespace

SystemParams::SystemParams(const ParamValues& v) : v_(v)
{
    require(std::isfinite(v.kappa_b) && std::isfinite(v.kappa_c) && std::isfinite(v.loss) &&
                std::isfinite(v.phi) && std::isfinite(v.tau) && std::isfinite(v.delta) &&
                std::isfinite(v.eps_mag) && std::isfinite(v.eps_phase),
            "all parameters must be finite");
    require(v.kappa_b >= 0.0, "kappa_b must be >= 0");
    require(v.kappa_c >= 0.0, "kappa_c must be >= 0");
    require(v.kappa_b + v.kappa_c > 0.0, "kappa_b + kappa_c must be > 0");
    require(v.loss >= 0.0 && v.loss <= 1.0, "loss must lie in [0, 1]");
    require(v.tau >= 0.0, "tau must be >= 0");
    require(v.eps_mag >= 0.0, "eps_mag must be >= 0");
}

SystemParams SystemParams::with_feedback_strength(double k, double loss, ParamValues rest)
{
    if (!(k >= 0.0) || !(loss >= 0.0 && loss < 1.0) || k * k > 1.0 - loss)
        throw std::invalid_argument("with_feedback_strength: need 0 <= k^2 <= 1 - L");
    // kappa_b + kappa_c = 1 and kappa_b kappa_c = k^2 / (4 (1 - L))
    const double disc = std::sqrt(1.0 - k * k / (1.0 - loss));
    rest.kappa_b = 0.5 * (1.0 + disc);
    // product form avoids the cancellation in (1 - disc) / 2
    rest.kappa_c = k * k / (4.0 * (1.0 - loss) * rest.kappa_b);
    rest.loss = loss;
    return SystemParams(rest);
}

SystemParams SystemParams::with_tau(double tau) const
{
    auto v = v_;
    v.tau = tau;
    return SystemParams(v);
}

SystemParams SystemParams::with_eps(double eps_mag) const
{
    auto v = v_;
    v.eps_mag = eps_mag;
    return SystemParams(v);
}

SystemParams SystemParams::with_delta(double delta) const
{
    auto v = v_;
    v.delta = delta;
    return SystemParams(v);
}

SystemParams SystemParams::with_phi(double phi) const
{
    auto v = v_;
    v.phi = phi;
    return SystemParams(v);
}

SystemParams SystemParams::with_loss(double loss) const
{
    auto v = v_;
    v.loss = loss;
    return SystemParams(v);
}

double total_kappa(const SystemParams& p) { return p.kappa_b() + p.kappa_c(); }

double feedback_strength(const SystemParams& p)
{
    return 2.0 * std::sqrt(p.kappa_b() * p.kappa_c() * (1.0 - p.loss()));
}

double detuned_pump(const SystemParams& p)
{
    const double e = p.eps_mag();
    const double d = std::abs(p.delta());
    if (d > e) throw std::domain_error("detuned_pump: |Delta| exceeds |eps|");
    return std::sqrt((e - d) * (e + d));
}

bool phase_is_real(double phi) { return std::abs(std::sin(phi)) < 1e-12; }

cplx d_plus(const SystemParams& p, double nu)
{
    const cplx i(0.0, 1.0);
    return total_kappa(p) - i * (nu + p.delta()) +
           feedback_strength(p) * std::exp(-i * (p.phi() - nu * p.tau()));
}

cplx d_minus(const SystemParams& p, double nu)
{
    const cplx i(0.0, 1.0);
    return total_kappa(p) - i * (nu - p.delta()) +
           feedback_strength(p) * std::exp(i * (p.phi() + nu * p.tau()));
}

cplx f_b(const SystemParams& p, double nu)
{
    const cplx i(0.0, 1.0);
    return 2.0 * p.kappa_b() + feedback_strength(p) * std::exp(i * (p.phi() + nu * p.tau()));
}

cplx f_c(const SystemParams& p, double nu)
{
    const cplx i(0.0, 1.0);
    return 2.0 * p.kappa_c() + feedback_strength(p) * std::exp(i * (p.phi() + nu * p.tau()));
}

ResponseValues response_at(const SystemParams& p, double nu)
{
    ResponseValues r;
    r.nu = nu;
    r.d_plus = d_plus(p, nu);
    r.d_minus = d_minus(p, nu);
    r.m = r.d_plus * r.d_minus - p.eps_mag() * p.eps_mag();
    r.f_b = f_b(p, nu);
    r.f_c = f_c(p, nu);
    return r;
}

}  // namespace dpa
