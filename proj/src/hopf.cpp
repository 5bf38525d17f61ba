#include "dpa/hopf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dpa/stability.hpp"

namespace dpa {

namespace {

struct Tracked {
    CharacteristicFn g;
    double bound = 0.0;
};

SteadyState tracked_state(const ClassicalParams& p)
{
    SteadyState ss;
    ss.x = p.x();
    ss.pump = p.x();
    if (p.x() > threshold_drive(p)) {
        for (const auto& s : steady_states(p, false))
            if (s.branch == Branch::upper) ss = s;
    }
    return ss;
}

Tracked tracked(const ClassicalParams& p, PumpModel model)
{
    if (model == PumpModel::undepleted) {
        const SystemParams sp = p.undepleted();
        return {[sp](cplx z) { return characteristic_eval(sp, z); }, unstable_root_bound(sp)};
    }
    const DelayedLinearization lin = linearize_at(p, tracked_state(p));
    return {[lin](cplx z) { return lin.eval(z); }, lin.unstable_root_bound()};
}

// Rightmost root in the strip right of -kappa / 2.
std::optional<cplx> rightmost(const ClassicalParams& p, PumpModel model)
{
    const Tracked t = tracked(p, model);
    const double r = t.bound + 0.1;
    Region reg;
    reg.re_min = -0.5 * p.kappa();
    reg.re_max = r;
    reg.im_min = -r;
    reg.im_max = r;
    RootSearchOptions opt;
    opt.seed_step = 0.25 * p.kappa();
    opt.leaf_size = 2.0 * p.kappa();
    opt.initial_step = p.tau() > 0.0 ? std::min(0.05 * p.kappa(), 0.25 / p.tau()) : 0.05 * p.kappa();
    const auto res = find_roots(t.g, reg, opt);
    if (res.roots.empty()) return std::nullopt;
    // prefer the upper-half member of a conjugate pair
    cplx best = res.roots.front().lambda();
    for (const auto& root : res.roots)
        if (std::abs(root.lambda_re - best.real()) < 1e-9 && root.lambda_im > best.imag()) best = root.lambda();
    return best;
}

}  // namespace

CharacteristicFn tracked_characteristic(const ClassicalParams& p, PumpModel model) { return tracked(p, model).g; }

RootSearchResult tracked_roots(const ClassicalParams& p, PumpModel model)
{
    if (model == PumpModel::undepleted) return rightmost_roots(p.undepleted());
    return linearized_roots(linearize_at(p, tracked_state(p)), p.kappa());
}

bool tracked_unstable(const ClassicalParams& p, PumpModel model)
{
    const Tracked t = tracked(p, model);
    return unstable_root_count(t.g, t.bound, 1e-9) > 0;
}

std::vector<HopfPoint> hopf_locus(const ClassicalParams& p, std::span<const double> taus, double x_min, double x_max,
                                  const HopfOptions& options)
{
    if (!(x_min >= 0.0) || !(x_max > x_min)) throw std::invalid_argument("hopf_locus: need 0 <= x_min < x_max");
    if (options.scan_points < 2) throw std::invalid_argument("hopf_locus: scan_points must be >= 2");
    if (!(options.x_tolerance > 0.0)) throw std::invalid_argument("hopf_locus: x_tolerance must be > 0");
    const double kappa = p.kappa();

    std::vector<HopfPoint> out;
    for (double tau : taus) {
        if (!(tau > 0.0)) throw std::invalid_argument("hopf_locus: delays must be > 0");
        const ClassicalParams pt = p.with_tau(tau);
        const int n = options.scan_points;
        std::vector<double> xs(static_cast<std::size_t>(n));
        std::vector<bool> flags(xs.size());
        for (int i = 0; i < n; ++i) {
            xs[static_cast<std::size_t>(i)] = x_min + (x_max - x_min) * i / (n - 1);
            flags[static_cast<std::size_t>(i)] = tracked_unstable(pt.with_x(xs[static_cast<std::size_t>(i)]), options.model);
        }
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            if (flags[i] == flags[i + 1]) continue;
            double lo = xs[i];
            double hi = xs[i + 1];
            while (hi - lo > options.x_tolerance) {
                const double mid = 0.5 * (lo + hi);
                if (tracked_unstable(pt.with_x(mid), options.model) == flags[i])
                    lo = mid;
                else
                    hi = mid;
            }
            const auto r_lo = rightmost(pt.with_x(lo), options.model);
            const auto r_hi = rightmost(pt.with_x(hi), options.model);
            if (!r_lo || !r_hi) continue;
            // linear interpolation of the crossing inside the final bracket
            double x = 0.5 * (lo + hi);
            cplx guess = 0.5 * (*r_lo + *r_hi);
            const double dr = r_hi->real() - r_lo->real();
            if (dr != 0.0) {
                const double w = std::clamp(-r_lo->real() / dr, 0.0, 1.0);
                x = lo + w * (hi - lo);
                guess = *r_lo + w * (*r_hi - *r_lo);
            }
            const CharacteristicFn g = tracked_characteristic(pt.with_x(x), options.model);
            const cplx root = newton_refine(g, guess);
            if (std::abs(root.imag()) < 1e-6 * kappa) continue;  // real crossing: pitchfork, not Hopf
            HopfPoint hp;
            hp.x = x;
            hp.tau = tau;
            hp.omega_hopf = std::abs(root.imag());
            hp.residual = std::abs(root.real());
            out.push_back(hp);
        }
    }
    return out;
}

}  // namespace dpa
