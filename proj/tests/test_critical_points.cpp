#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "dpa/critical_points.hpp"
#include "dpa/spectrum.hpp"
#include "oracle.hpp"

using namespace dpa;

namespace {

SystemParams symmetric(double eps, double loss = 0.0, double delta = 0.0, double phi = 0.0)
{
    ParamValues v;
    v.eps_mag = eps;
    v.loss = loss;
    v.delta = delta;
    v.phi = phi;
    return SystemParams(v);
}

// Solves m(nu, tau) = 0 by two-dimensional Newton on the reference response
// functions, with a finite-difference Jacobian.
std::pair<double, double> solve_marginal(oracle::Setup s, double nu, double tau)
{
    auto m = [&](double n, double t) {
        s.tau = t;
        return oracle::dpm(s, n, 1) * oracle::dpm(s, n, -1) - s.eps * s.eps;
    };
    for (int it = 0; it < 50; ++it) {
        const oracle::cplx f = m(nu, tau);
        const double h = 1e-7;
        const oracle::cplx fn = (m(nu + h, tau) - m(nu - h, tau)) / (2 * h);
        const oracle::cplx ft = (m(nu, tau + h) - m(nu, tau - h)) / (2 * h);
        const double det = fn.real() * ft.imag() - ft.real() * fn.imag();
        const double dn = (f.real() * ft.imag() - ft.real() * f.imag()) / det;
        const double dt = (fn.real() * f.imag() - f.real() * fn.imag()) / det;
        nu -= dn;
        tau -= dt;
        if (std::abs(dn) + std::abs(dt) < 1e-14) break;
    }
    return {nu, tau};
}

}  // namespace

TEST_CASE("reference characteristic points")
{
    struct Case {
        double eps, nu, tau;
    };
    for (const Case c : {Case{0.75, 0.968, 1.8833}, Case{0.25, 0.661, 3.657}, Case{0.5, 0.866, 2.418}}) {
        const auto cp = characteristic_point(symmetric(c.eps));
        REQUIRE(cp.valid);
        CHECK(cp.nu_c == doctest::Approx(c.nu).epsilon(5e-4));
        CHECK(cp.tau_c == doctest::Approx(c.tau).epsilon(5e-4));
        CHECK(cp.squeezed_floor == 0.0);
    }
}

TEST_CASE("characteristic points agree with a direct solve of m = 0")
{
    for (int i = 0; i < 50; ++i) {
        oracle::Setup s;
        s.kb = oracle::uniform(0.2, 0.8);
        s.kc = 1.0 - s.kb;
        s.loss = oracle::uniform(0.0, 0.2);
        const double k = oracle::feedback(s);
        s.eps = oracle::uniform(1.0 - k + 0.02, 0.98);
        ParamValues v;
        v.kappa_b = s.kb;
        v.kappa_c = s.kc;
        v.loss = s.loss;
        v.eps_mag = s.eps;
        const auto cp = characteristic_point(SystemParams(v));
        REQUIRE(cp.valid);
        const auto [nu, tau] = solve_marginal(s, cp.nu_c * 1.01, cp.tau_c * 0.99);
        CHECK(nu == doctest::Approx(cp.nu_c).epsilon(1e-9));
        CHECK(tau == doctest::Approx(cp.tau_c).epsilon(1e-9));
    }
}

TEST_CASE("m vanishes at every valid characteristic point")
{
    int valid = 0;
    for (int i = 0; i < 200; ++i) {
        ParamValues v;
        v.kappa_b = oracle::uniform(0.05, 1.0);
        v.kappa_c = oracle::uniform(0.05, 1.0);
        v.loss = oracle::uniform(0.0, 0.5);
        v.eps_mag = oracle::uniform(0.0, 2.0);
        v.delta = oracle::uniform(-0.5, 0.5) * v.eps_mag;
        const SystemParams p(v);
        const auto cp = characteristic_point(p);
        if (!cp.valid) continue;
        ++valid;
        const double kappa = total_kappa(p);
        CHECK(std::abs(response_at(p.with_tau(cp.tau_c), cp.nu_c).m) < 1e-10 * kappa * kappa);
    }
    CHECK(valid > 40);
}

TEST_CASE("full-strength feedback traces a circle in (|eps|, nu_c)")
{
    for (int i = 1; i < 100; ++i) {
        const double eps = i / 100.0;
        const auto cp = characteristic_point(symmetric(eps));
        REQUIRE(cp.valid);
        CHECK(cp.nu_c * cp.nu_c + (1.0 - eps) * (1.0 - eps) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(cp.nu_c == doctest::Approx(nu_c_range(1.0, eps).second).epsilon(1e-12));
    }
}

TEST_CASE("detuning enters only through the reduced pump")
{
    for (int i = 0; i < 100; ++i) {
        ParamValues v;
        v.kappa_b = oracle::uniform(0.1, 1.0);
        v.kappa_c = oracle::uniform(0.1, 1.0);
        v.loss = oracle::uniform(0.0, 0.3);
        v.eps_mag = oracle::uniform(0.0, 2.0);
        v.delta = oracle::uniform(-1.0, 1.0) * v.eps_mag;
        const SystemParams detuned(v);
        ParamValues w = v;
        w.delta = 0.0;
        w.eps_mag = detuned_pump(detuned);
        const auto a = characteristic_point(detuned);
        const auto b = characteristic_point(SystemParams(w));
        CHECK(a.valid == b.valid);
        CHECK(a.nu_c == b.nu_c);
        CHECK(a.tau_c == b.tau_c);
        CHECK(a.squeezed_floor == b.squeezed_floor);
    }
}

TEST_CASE("lossless squeezed spectrum plunges next to the characteristic point")
{
    for (double eps : {0.25, 0.5, 0.75}) {
        const auto p = symmetric(eps);
        const auto cp = characteristic_point(p);
        const auto at = p.with_tau(cp.tau_c);
        for (double side : {-1.0, 1.0}) {
            const double near = raw_spectrum_variance(at, kPi, cp.nu_c * (1.0 + side * 1e-4));
            const double far = raw_spectrum_variance(at, kPi, cp.nu_c * (1.0 + side * 1e-3));
            CHECK(variance_to_db(near) < -40.0);
            CHECK(near < far);
        }
    }
}

TEST_CASE("squeezing floor with loss")
{
    CHECK(squeezed_floor(symmetric(0.5)) == 0.0);
    CHECK(squeezed_floor(symmetric(0.25, 0.05)) == doctest::Approx(0.025).epsilon(1e-14));
    CHECK(variance_to_db(squeezed_floor(symmetric(0.25, 0.05))) == doctest::Approx(-10.0).epsilon(1e-12));
    CHECK(squeezed_floor(symmetric(0.5, 0.1)) == doctest::Approx(0.025).epsilon(1e-14));
    CHECK(squeezed_floor(symmetric(0.5, 0.05)) == doctest::Approx(0.0125).epsilon(1e-14));

    const auto p = symmetric(0.5, 0.05);
    CHECK(variance_near_characteristic(p, kPi, 1e-7) == doctest::Approx(0.0125).epsilon(1e-5));
}

TEST_CASE("loss shifts the characteristic point")
{
    const auto lossless = characteristic_point(symmetric(0.5));
    const auto lossy = characteristic_point(symmetric(0.5, 0.05));
    CHECK(lossy.nu_c == doctest::Approx(0.83666).epsilon(1e-5));
    CHECK(lossy.tau_c == doctest::Approx(2.52129).epsilon(1e-5));
    CHECK(lossy.nu_c < lossless.nu_c);
}

TEST_CASE("invalid characteristic points")
{
    const auto pi_branch = characteristic_point(symmetric(0.5, 0.0, 0.0, kPi));
    CHECK_FALSE(pi_branch.valid);
    CHECK_FALSE(pi_branch.reason.empty());
    CHECK_THROWS_AS(squeezed_floor(symmetric(0.5, 0.0, 0.0, kPi)), std::domain_error);
    CHECK_THROWS_AS(at_characteristic_delay(symmetric(0.5, 0.0, 0.0, 1.0)), std::domain_error);

    ParamValues v;
    v.kappa_b = 1.0;
    v.kappa_c = 0.0;
    v.eps_mag = 0.5;
    CHECK_FALSE(characteristic_point(SystemParams(v)).valid);
}

TEST_CASE("antisqueezed divergence near the characteristic point")
{
    const auto p = symmetric(0.75);
    const auto cp = characteristic_point(p);
    CHECK(antisqueezed_divergence_check(p.with_tau(cp.tau_c), 0.05));
    CHECK_FALSE(antisqueezed_divergence_check(p.with_tau(cp.tau_c / 2), 0.05));

    ParamValues v;
    v.kappa_b = 1.0;
    v.kappa_c = 0.0;
    v.eps_mag = 0.75;
    CHECK_FALSE(antisqueezed_divergence_check(SystemParams(v), 0.05));
}

TEST_CASE("admissible feedback strengths and frequencies")
{
    CHECK(feedback_strength_bounds(1.0, 1.0) == std::pair<double, double>{0.0, 1.0});
    CHECK(feedback_strength_bounds(1.0, 0.5) == std::pair<double, double>{0.5, 1.0});
    CHECK(feedback_strength_bounds(1.0, 0.25) == std::pair<double, double>{0.75, 1.0});
    CHECK(nu_c_range(1.0, 1.0).second == 1.0);
    CHECK(nu_c_range(1.0, 0.0).second == 0.0);
    CHECK(nu_c_range(1.0, 0.5).second == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-15));
}
