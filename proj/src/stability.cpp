#include "dpa/stability.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace dpa {

CharEval characteristic_eval(const SystemParams& p, cplx lambda)
{
    const double kappa = total_kappa(p);
    const double k = feedback_strength(p);
    const double e = p.eps_mag();
    const double tau = p.tau();
    const cplx decay = std::exp(-lambda * tau);
    const cplx a = lambda + kappa + k * std::cos(p.phi()) * decay;
    const cplx b = p.delta() + k * std::sin(p.phi()) * decay;
    const cplx da = 1.0 - tau * k * std::cos(p.phi()) * decay;
    const cplx db = -tau * k * std::sin(p.phi()) * decay;

    CharEval ev;
    ev.value = a * a - e * e + b * b;
    ev.derivative = 2.0 * a * da + 2.0 * b * db;
    ev.scale = kappa * kappa + std::norm(a) + e * e + std::norm(b);
    return ev;
}

cplx characteristic_function(const SystemParams& p, cplx lambda) { return characteristic_eval(p, lambda).value; }

double unstable_root_bound(const SystemParams& p)
{
    const double k = feedback_strength(p);
    const double b = std::abs(p.delta()) + k;
    return total_kappa(p) + k + std::sqrt(p.eps_mag() * p.eps_mag() + b * b);
}

Region default_search_region(const SystemParams& p)
{
    const double kappa = total_kappa(p);
    const double bound = unstable_root_bound(p);
    double half = 10.0 * kappa;
    if (p.tau() > 0.0) half = std::max(half, 6.0 * kPi / p.tau());
    half = std::max(half, bound + kappa);
    Region r;
    r.re_min = -5.0 * kappa;
    r.re_max = std::max(2.0 * kappa, bound + 0.1 * kappa);
    r.im_min = -half;
    r.im_max = half;
    return r;
}

RootSearchResult rightmost_roots(const SystemParams& p, std::optional<Region> region)
{
    const Region reg = region.value_or(default_search_region(p));
    const double kappa = total_kappa(p);
    const double e = p.eps_mag();

    if (p.tau() == 0.0) {
        // (lambda + kappa + k cos phi)^2 = |eps|^2 - (Delta + k sin phi)^2
        const double k = feedback_strength(p);
        const double shift = kappa + k * std::cos(p.phi());
        const double b = p.delta() + k * std::sin(p.phi());
        const cplx s = std::sqrt(cplx(e * e - b * b, 0.0));
        RootSearchResult res;
        res.region = reg;
        std::array<cplx, 2> cands{-shift + s, -shift - s};
        if (std::abs(s) < 1e-12 * kappa) {
            if (reg.contains(cands[0])) {
                CharacteristicRoot r{cands[0].real(), cands[0].imag(), 0.0, 2};
                r.residual = std::abs(characteristic_eval(p, cands[0]).value) / characteristic_eval(p, cands[0]).scale;
                res.roots.push_back(r);
            }
        } else {
            for (cplx c : cands) {
                if (!reg.contains(c)) continue;
                const auto ev = characteristic_eval(p, c);
                res.roots.push_back({c.real(), c.imag(), std::abs(ev.value) / ev.scale, 1});
            }
        }
        std::sort(res.roots.begin(), res.roots.end(), [](const auto& a, const auto& b2) {
            if (a.lambda_re != b2.lambda_re) return a.lambda_re > b2.lambda_re;
            return a.lambda_im > b2.lambda_im;
        });
        for (const auto& r : res.roots) res.found_count += r.multiplicity;
        res.winding_count = res.found_count;
        res.complete = true;
        return res;
    }

    const CharacteristicFn g = [&p](cplx z) { return characteristic_eval(p, z); };
    // closed-form roots of the feedback-free problem as extra seeds
    const cplx s = std::sqrt(cplx(e * e - p.delta() * p.delta(), 0.0));
    const std::array<cplx, 2> seeds{-kappa + s, -kappa - s};
    RootSearchOptions opt;
    opt.seed_step = 0.25 * kappa;
    opt.leaf_size = 2.0 * kappa;
    opt.initial_step = std::min(0.05 * kappa, 0.25 / p.tau());
    return find_roots(g, reg, opt, seeds);
}

double max_growth_rate(const SystemParams& p)
{
    const auto res = rightmost_roots(p);
    if (!res.complete)
        throw NumericalError("max_growth_rate: root count not certified (" + std::to_string(res.found_count) + " of " +
                             std::to_string(res.winding_count) + ")");
    return res.max_re();
}

StabilityVerdict stability_boundary_phi0(const SystemParams& p)
{
    if (!phase_is_real(p.phi()) || std::cos(p.phi()) < 0.0 || p.delta() != 0.0)
        throw std::domain_error("stability_boundary_phi0: requires phi = 0 and Delta = 0");
    const auto res = rightmost_roots(p);
    StabilityVerdict v;
    v.certified = res.complete;
    v.max_re = res.max_re();
    v.stable = v.max_re < 0.0;
    v.rightmost_im = res.roots.empty() ? 0.0 : std::abs(res.roots.front().lambda_im);
    v.zeroth_order_stable =
        total_kappa(p) + feedback_strength(p) * std::cos(v.rightmost_im * p.tau()) > p.eps_mag();
    return v;
}

bool stability_boundary_phipi(const SystemParams& p)
{
    if (!phase_is_real(p.phi()) || std::cos(p.phi()) > 0.0 || p.delta() != 0.0)
        throw std::domain_error("stability_boundary_phipi: requires phi = pi and Delta = 0");
    return total_kappa(p) - feedback_strength(p) > p.eps_mag();
}

}  // namespace dpa
