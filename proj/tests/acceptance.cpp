// Acceptance checks. One line per criterion: PASS or FAIL, what was measured
// and the tolerance it was held to. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "dpa/classical.hpp"
#include "dpa/critical_points.hpp"
#include "dpa/hopf.hpp"
#include "dpa/spectrum.hpp"
#include "dpa/stability.hpp"
#include "oracle.hpp"

using namespace dpa;

namespace {

int failures = 0;

void report(const std::string& id, bool ok, const std::string& what)
{
    std::printf("[%s] %-3s %s\n", ok ? "PASS" : "FAIL", id.c_str(), what.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SystemParams symmetric(double eps, double tau = 0.0, double loss = 0.0, double delta = 0.0)
{
    ParamValues v;
    v.eps_mag = eps;
    v.tau = tau;
    v.loss = loss;
    v.delta = delta;
    return SystemParams(v);
}

ClassicalParams fig9(double x)
{
    ClassicalValues v;
    v.x = x;
    v.tau = 1.8833;
    v.kappa_p = 1.0;
    return ClassicalParams::with_feedback_strength(1.0, v);
}

struct Reference {
    double eps, nu, tau;
};

const Reference kPoints[] = {{0.75, 0.968, 1.8833}, {0.25, 0.661, 3.657}, {0.5, 0.866, 2.418}};

void characteristic_points()
{
    const auto t0 = std::chrono::steady_clock::now();
    double dnu = 0.0, dtau = 0.0;
    bool valid = true;
    for (const auto& c : kPoints) {
        const auto cp = characteristic_point(symmetric(c.eps));
        valid = valid && cp.valid;
        dnu = std::max(dnu, std::abs(cp.nu_c - c.nu));
        dtau = std::max(dtau, std::abs(cp.tau_c - c.tau));
    }
    const double runtime = seconds_since(t0);
    report("1", valid && dnu <= 5e-4 && dtau <= 5e-4 && runtime < 1.0,
           "characteristic points: max |nu_c - reference| = " + fmt("%.2e", dnu) +
               ", max |tau_c - reference| = " + fmt("%.2e", dtau) + " (tol 5e-4), runtime " +
               fmt("%.3g", runtime) + " s (< 1 s)");
}

void perfect_squeezing_limit()
{
    double worst = -INFINITY;
    for (const auto& c : kPoints) {
        const auto p = symmetric(c.eps);
        const auto cp = characteristic_point(p);
        const auto at = p.with_tau(cp.tau_c);
        for (double side : {-1.0, 1.0})
            worst = std::max(worst, variance_to_db(raw_spectrum_variance(at, kPi, cp.nu_c * (1.0 + side * 1e-4))));
    }
    report("2a", worst < -40.0,
           "lossless squeezed spectrum at nu_c (1 +- 1e-4), tau_c: highest value " + fmt("%.2f", worst) +
               " dB (< -40 dB)");

    const auto lossy = symmetric(0.5, 0.0, 0.05);
    const double target = 10.0 * std::log10(0.05 * 0.5 / 0.5);
    const double limit = variance_to_db(variance_near_characteristic(lossy, kPi, 1e-7));
    report("2b", std::abs(limit - target) <= 0.1,
           "L = 0.05 squeezed spectrum as nu -> nu_c: " + fmt("%.4f", limit) + " dB vs " + fmt("%.4f", target) +
               " dB (tol 0.1 dB)");

    // global minimum over the frequency axis: dense scan, then golden-section refinement
    const auto at = at_characteristic_delay(lossy);
    auto db = [&](double nu) { return variance_to_db(raw_spectrum_variance(at, kPi, nu)); };
    double best_nu = 0.0, best = INFINITY;
    for (double nu : linspace(0.0, 3.0, 300001)) {
        const double v = db(nu);
        if (std::isfinite(v) && v < best) {
            best = v;
            best_nu = nu;
        }
    }
    double lo = best_nu - 1e-5, hi = best_nu + 1e-5;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int i = 0; i < 80; ++i) {
        const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
        if (db(a) < db(b))
            hi = b;
        else
            lo = a;
    }
    best = std::min(best, db(0.5 * (lo + hi)));
    report("2c", std::abs(best - target) <= 0.1,
           "L = 0.05 minimum over nu of the squeezed spectrum at tau_c: " + fmt("%.4f", best) + " dB at nu = " +
               fmt("%.5f", 0.5 * (lo + hi)) + " vs " + fmt("%.4f", target) + " dB (tol 0.1 dB)");
}

void oracle_equivalence()
{
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        ParamValues v;
        v.kappa_b = 1.0;
        v.kappa_c = 0.0;
        v.eps_mag = oracle::uniform(1e-6, 1.0 - 1e-6);
        v.eps_phase = oracle::uniform(-kPi, kPi);
        const SystemParams p(v);
        const double got = squeezing_spectrum(p, squeezed_angle(p), 0.0).variance;
        worst = std::max(worst, oracle::rel_diff(got, oracle::one_sided_resonance(1.0, v.eps_mag)));
    }
    bool exact = true;
    for (int i = 0; i <= 100; ++i) {
        const double e = 0.0099 * i;
        exact = exact && resonance_variance_beamsplitter(1.0, e, 0.0) == resonance_variance_no_feedback(1.0, e);
    }
    report("3", worst < 1e-12 && exact,
           "full spectrum vs one-sided closed form: max rel diff " + fmt("%.2e", worst) +
               " (< 1e-12); beamsplitter r = 0 identical: " + (exact ? "yes" : "no"));
}

void uncertainty_product()
{
    double worst = 0.0;
    int used = 0;
    for (double tau : {0.5, 1.0, 3.0}) {
        const auto p = symmetric(0.5, tau);
        for (double nu : linspace(-3.0, 3.0, 500)) {
            const auto a = squeezing_spectrum(p, 0.0, nu);
            const auto b = squeezing_spectrum(p, kPi, nu);
            if (a.diverged || b.diverged) continue;
            ++used;
            worst = std::max(worst, std::abs(a.variance * b.variance * 16.0 - 1.0));
        }
    }
    report("4", worst <= 1e-9 && used > 0,
           "variance(theta) variance(theta + pi) * 16 - 1: max " + fmt("%.2e", worst) + " over " +
               std::to_string(used) + " points (tol 1e-9)");
}

void stability()
{
    double max_re = -INFINITY;
    bool certified = true;
    for (int i = 0; i < 50; ++i) {
        ParamValues v;
        v.phi = kPi;
        v.eps_mag = 0.45;
        v.tau = 10.0 * i / 49.0;
        const auto res = rightmost_roots(SystemParams::with_feedback_strength(0.5, 0.0, v));
        certified = certified && res.complete;
        max_re = std::max(max_re, res.max_re());
    }
    double marginal = 0.0;
    for (const auto& c : kPoints) {
        const auto res = rightmost_roots(at_characteristic_delay(symmetric(c.eps)));
        certified = certified && res.complete;
        marginal = std::max(marginal, std::abs(res.max_re()));
    }
    report("5", certified && max_re < 0.0 && marginal < 1e-6,
           "Pyragas feedback over 50 delays: max Re lambda = " + fmt("%.4f", max_re) +
               " (< 0); characteristic points: max |Re lambda| = " + fmt("%.2e", marginal) +
               " (< 1e-6); root counts certified: " + (certified ? "yes" : "no"));
}

void classical_threshold()
{
    auto model = [](double k, double phi, double x) {
        ClassicalValues v;
        v.phi = phi;
        v.x = x;
        return ClassicalParams::with_feedback_strength(k, v);
    };
    const bool exact = threshold_drive(model(1.0, 0.0, 0.0)) == 2.0 && threshold_drive(model(0.5, kPi, 0.0)) == 0.5 &&
                       threshold_drive(model(0.0, 0.0, 0.0)) == 1.0;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double k = oracle::uniform(0.0, 1.0);
        const double phi = oracle::uniform(-kPi, kPi);
        const double x = threshold_drive(model(k, phi, 0.0)) + oracle::uniform(1e-3, 3.0);
        const auto p = model(k, phi, x);
        for (const auto& ss : steady_states(p, false)) {
            if (ss.branch == Branch::trivial) continue;
            const State s = make_state(ss.signal, ss.pump);
            for (double c : dde_rhs(s, s, p)) worst = std::max(worst, std::abs(c));
        }
    }
    report("6", exact && worst < 1e-12,
           std::string("thresholds 2, 0.5, 1 exact: ") + (exact ? "yes" : "no") +
               "; above-threshold residual max " + fmt("%.2e", worst) + " over 200 draws (< 1e-12)");
}

void hopf_circle()
{
    ClassicalValues v;
    v.kappa_p = 1.0;
    const auto p = ClassicalParams::with_feedback_strength(1.0, v);
    const auto taus = linspace(1.6, 4.1, 51);
    const auto t0 = std::chrono::steady_clock::now();
    const auto pts = hopf_locus(p, taus, 0.2, 0.999);
    const double runtime = seconds_since(t0);
    double worst = 0.0;
    for (const auto& h : pts)
        worst = std::max(worst, std::abs(h.omega_hopf * h.omega_hopf + (h.x - 1.0) * (h.x - 1.0) - 1.0));
    report("7", !pts.empty() && worst <= 1e-3 && runtime < 30.0,
           std::to_string(pts.size()) + " Hopf points over tau in [1.6, 4.1]: max circle deviation " +
               fmt("%.2e", worst) + " (tol 1e-3), runtime " + fmt("%.3g", runtime) + " s (< 30 s)");
}

void fig9_dynamics()
{
    const State init = make_state(0.5, 0.0);
    const auto a = fig9(0.745);
    const auto ca = classify_longtime(integrate(a, init, 12000.0, default_step(a), 20));
    const auto b = fig9(0.78);
    const auto cb = classify_longtime(integrate(b, init, 2000.0, default_step(b), 5));
    const double expected = 2.0 * kPi / std::sqrt(1.0 - 0.22 * 0.22);
    const double dev = std::abs(cb.period - expected) / expected;
    report("8", ca.verdict == LongtimeVerdict::converged && cb.verdict == LongtimeVerdict::oscillating && dev <= 0.02,
           "x = 0.745: " + to_string(ca.verdict) + " (peak-to-peak " + fmt("%.1e", ca.peak_to_peak) +
               "); x = 0.78: " + to_string(cb.verdict) + ", period " + fmt("%.4f", cb.period) + " vs " +
               fmt("%.4f", expected) + " (rel dev " + fmt("%.2e", dev) + ", tol 2e-2)");
}

void detuned_optimum()
{
    double worst = 0.0;
    for (double delta : {0.0, 0.2, 0.4}) {
        const auto p = symmetric(0.5, 0.0, 0.05, delta);
        double best = INFINITY, arg = 0.0;
        for (int i = 0; i < 6284; ++i) {
            const double tp = 0.001 * i;
            const double v = variance_near_characteristic(p, tp);
            if (v < best) {
                best = v;
                arg = tp;
            }
        }
        const double expected = std::remainder(optimal_quadrature_angle(p), 2.0 * kPi);
        worst = std::max(worst, std::abs(std::remainder(arg - expected, 2.0 * kPi)));
    }
    report("9", worst <= 0.001,
           "argmin over theta' (step 1e-3) vs theta + pi - asin(Delta / |eps|) for Delta = 0, 0.2, 0.4: max "
           "deviation " + fmt("%.2e", worst) + " rad (tol 1e-3)");
}

void integrator_order()
{
    const auto p = fig9(0.745);
    const State init = make_state(0.5, 0.0);
    const double h = p.tau() / 19;
    auto final_state = [&](double step) { return integrate(p, init, 30.0, step).states().back(); };
    const State a = final_state(h), b = final_state(h / 2), ref = final_state(h / 4);
    double ea = 0.0, eb = 0.0;
    for (int i = 0; i < 4; ++i) {
        ea = std::max(ea, std::abs(a[i] - ref[i]));
        eb = std::max(eb, std::abs(b[i] - ref[i]));
    }
    const double ratio = ea / eb;
    report("10", ratio >= 8.0 && ratio <= 32.0,
           "step-halving error ratio at t = 30: " + fmt("%.2f", ratio) + " (in [8, 32]), errors " + fmt("%.2e", ea) +
               " / " + fmt("%.2e", eb));
}

}  // namespace

int main()
{
    characteristic_points();
    perfect_squeezing_limit();
    oracle_equivalence();
    uncertainty_product();
    stability();
    classical_threshold();
    hopf_circle();
    fig9_dynamics();
    detuned_optimum();
    integrator_order();
    std::printf("%d failure(s)\n", failures);
    return failures;
}
