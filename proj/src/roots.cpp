#include "dpa/roots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace dpa {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Sample {
    cplx z;
    cplx f;
};

Sample sample(const CharacteristicFn& g, cplx z)
{
    const CharEval ev = g(z);
    if (!std::isfinite(ev.value.real()) || !std::isfinite(ev.value.imag()))
        throw ContourError("characteristic function not finite on contour");
    if (std::abs(ev.value) <= 1e-14 * ev.scale) throw ContourError("contour passes through a zero");
    return {z, ev.value};
}

// Accumulated argument change of g along the straight segment a -> b.
double edge_phase(const CharacteristicFn& g, const Sample& a, const Sample& b)
{
    double total = 0.0;
    std::vector<std::pair<Sample, Sample>> stack{{a, b}};
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        const double d = std::arg(hi.f / lo.f);
        const Sample mid = sample(g, 0.5 * (lo.z + hi.z));
        if (std::abs(d) < 0.5 * std::numbers::pi) {
            const double d1 = std::arg(mid.f / lo.f);
            const double d2 = std::arg(hi.f / mid.f);
            // both halves must also turn slowly, otherwise an even-order zero
            // sitting on the segment could cancel its own phase jump
            if (std::abs(d1) < 0.5 * std::numbers::pi && std::abs(d2) < 0.5 * std::numbers::pi &&
                std::abs(d1 + d2 - d) < 1e-9) {
                total += d;
                continue;
            }
        }
        if (std::abs(hi.z - lo.z) < 1e-12 * (1.0 + std::abs(lo.z)))
            throw ContourError("contour subdivision stalled near a zero");
        stack.push_back({mid, hi});
        stack.push_back({lo, mid});
    }
    return total;
}

double residual_of(const CharacteristicFn& g, cplx z)
{
    const CharEval ev = g(z);
    return std::abs(ev.value) / ev.scale;
}

std::array<cplx, 4> corners(const Region& r)
{
    return {cplx(r.re_min, r.im_min), cplx(r.re_max, r.im_min), cplx(r.re_max, r.im_max),
            cplx(r.re_min, r.im_max)};
}

int circle_multiplicity(const CharacteristicFn& g, cplx centre, double radius)
{
    for (int shrink = 0; shrink < 6; ++shrink, radius *= 0.5) {
        std::array<cplx, 32> poly;
        for (std::size_t j = 0; j < poly.size(); ++j) {
            const double a = kTwoPi * static_cast<double>(j) / static_cast<double>(poly.size());
            poly[j] = centre + radius * cplx(std::cos(a), std::sin(a));
        }
        try {
            return winding_number(g, poly, radius / 4.0);
        } catch (const ContourError&) {
        }
    }
    return 1;
}

class Collector {
public:
    Collector(const CharacteristicFn& g, const RootSearchOptions& opt, std::span<const cplx> extra)
        : g_(g), opt_(opt), extra_(extra)
    {
    }

    void collect(const Region& r, int n, int depth)
    {
        if (n <= 0) return;
        const double size = std::max(r.width(), r.height());
        if (size <= opt_.leaf_size || depth >= 60) {
            auto found = seed_leaf(r);
            int total = 0;
            for (const auto& root : found) total += root.multiplicity;
            if (total == n || size < 1e-6 || depth >= 60) {
                roots_.insert(roots_.end(), found.begin(), found.end());
                return;
            }
        }
        // off-centre first: real characteristic functions put roots on the symmetry line
        for (double frac : {0.4871, 0.5213, 0.4629, 0.5371, 0.4114, 0.5886}) {
            Region a = r, b = r;
            if (r.width() >= r.height()) {
                const double cut = r.re_min + frac * r.width();
                a.re_max = cut;
                b.re_min = cut;
            } else {
                const double cut = r.im_min + frac * r.height();
                a.im_max = cut;
                b.im_min = cut;
            }
            int na = 0;
            try {
                na = count_zeros(g_, a, opt_.initial_step);
            } catch (const ContourError&) {
                continue;
            }
            if (na < 0 || na > n) throw ContourError("inconsistent subregion winding counts");
            collect(a, na, depth + 1);
            collect(b, n - na, depth + 1);
            return;
        }
        throw ContourError("could not split region without touching a zero");
    }

    std::vector<CharacteristicRoot> take() { return std::move(roots_); }

private:
    std::vector<CharacteristicRoot> seed_leaf(const Region& r) const
    {
        std::vector<cplx> seeds;
        const int nx = std::max(1, static_cast<int>(std::ceil(r.width() / opt_.seed_step)));
        const int ny = std::max(1, static_cast<int>(std::ceil(r.height() / opt_.seed_step)));
        for (int ix = 0; ix < nx; ++ix)
            for (int iy = 0; iy < ny; ++iy)
                seeds.emplace_back(r.re_min + (ix + 0.5) * r.width() / nx, r.im_min + (iy + 0.5) * r.height() / ny);
        for (cplx s : extra_)
            if (r.contains(s)) seeds.push_back(s);

        std::vector<cplx> pts;
        for (cplx s : seeds) {
            const cplx z = newton_refine(g_, s);
            if (!r.contains(z)) continue;
            if (residual_of(g_, z) > opt_.residual_tol) continue;
            const bool dup = std::any_of(pts.begin(), pts.end(), [&](cplx q) {
                return std::abs(q - z) < 1e-6 * (1.0 + std::abs(z));
            });
            if (!dup) pts.push_back(z);
        }

        std::vector<CharacteristicRoot> out;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            double nearest = 1e-2;
            for (std::size_t i = 0; i < pts.size(); ++i)
                if (i != j) nearest = std::min(nearest, 0.4 * std::abs(pts[i] - pts[j]));
            CharacteristicRoot root;
            root.lambda_re = pts[j].real();
            root.lambda_im = pts[j].imag();
            root.residual = residual_of(g_, pts[j]);
            root.multiplicity = std::max(1, circle_multiplicity(g_, pts[j], nearest));
            out.push_back(root);
        }
        return out;
    }

    const CharacteristicFn& g_;
    const RootSearchOptions& opt_;
    std::span<const cplx> extra_;
    std::vector<CharacteristicRoot> roots_;
};

}  // namespace

double RootSearchResult::max_re() const
{
    if (roots.empty()) return -std::numeric_limits<double>::infinity();
    return roots.front().lambda_re;
}

int winding_number(const CharacteristicFn& g, std::span<const cplx> vertices, double initial_step)
{
    const std::size_t n = vertices.size();
    double total = 0.0;
    for (std::size_t e = 0; e < n; ++e) {
        const cplx a = vertices[e];
        const cplx b = vertices[(e + 1) % n];
        const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / initial_step)));
        Sample prev = sample(g, a);
        for (int j = 1; j <= pieces; ++j) {
            const cplx z = j == pieces ? b : a + (b - a) * (static_cast<double>(j) / pieces);
            const Sample cur = sample(g, z);
            total += edge_phase(g, prev, cur);
            prev = cur;
        }
    }
    const double turns = total / kTwoPi;
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 0.05) throw ContourError("non-integer winding number");
    return static_cast<int>(rounded);
}

int count_zeros(const CharacteristicFn& g, const Region& region, double initial_step)
{
    const auto c = corners(region);
    return winding_number(g, c, initial_step);
}

cplx newton_refine(const CharacteristicFn& g, cplx seed, int max_iter)
{
    cplx z = seed;
    CharEval ev = g(z);
    for (int it = 0; it < max_iter; ++it) {
        if (ev.derivative == cplx(0.0, 0.0)) break;
        const cplx step = ev.value / ev.derivative;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
        double t = 1.0;
        bool accepted = false;
        cplx z1;
        CharEval e1;
        for (int h = 0; h < 30; ++h, t *= 0.5) {
            z1 = z - t * step;
            e1 = g(z1);
            if (std::isfinite(std::abs(e1.value)) && std::abs(e1.value) <= std::abs(ev.value)) {
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
        const double moved = std::abs(z1 - z);
        z = z1;
        ev = e1;
        if (ev.value == cplx(0.0, 0.0) || moved <= 1e-15 * (1.0 + std::abs(z))) break;
        if (std::abs(z) > 1e8) break;
    }
    return z;
}

RootSearchResult find_roots(const CharacteristicFn& g, Region region, const RootSearchOptions& options,
                            std::span<const cplx> extra_seeds)
{
    const Region original = region;
    for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
        try {
            RootSearchResult res;
            res.region = region;
            res.attempts = attempt;
            res.winding_count = count_zeros(g, region, options.initial_step);
            Collector col(g, options, extra_seeds);
            col.collect(region, res.winding_count, 0);
            res.roots = col.take();
            std::sort(res.roots.begin(), res.roots.end(), [](const auto& a, const auto& b) {
                if (a.lambda_re != b.lambda_re) return a.lambda_re > b.lambda_re;
                return a.lambda_im > b.lambda_im;
            });
            for (const auto& r : res.roots) res.found_count += r.multiplicity;
            res.complete = res.found_count == res.winding_count;
            return res;
        } catch (const ContourError&) {
            // grow every edge by a different small amount and retry
            const double d = 1e-3 * attempt;
            region.re_min = original.re_min - 0.618 * d;
            region.re_max = original.re_max + 0.382 * d;
            region.im_min = original.im_min - 0.713 * d;
            region.im_max = original.im_max + 0.287 * d;
        }
    }
    throw NumericalError("find_roots: contour kept meeting zeros after perturbation");
}

}  // namespace dpa
