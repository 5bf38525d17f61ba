#include <algorithm>
#include <cmath>
#include <limits>

#include "dpa/classical.hpp"
#include "dpa/critical_points.hpp"
#include "dpa/figures.hpp"
#include "dpa/hopf.hpp"
#include "dpa/spectrum.hpp"
#include "dpa/stability.hpp"

namespace dpa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double flag(bool b) { return b ? 1.0 : 0.0; }

void echo_system(Table& t, const SystemParams& p)
{
    t.add_meta("kappa_b", p.kappa_b());
    t.add_meta("kappa_c", p.kappa_c());
    t.add_meta("loss", p.loss());
    t.add_meta("phi", p.phi());
    t.add_meta("tau", p.tau());
    t.add_meta("delta", p.delta());
    t.add_meta("eps", p.eps_mag());
    t.add_meta("theta", p.eps_phase());
    t.add_meta("feedback_strength", feedback_strength(p));
}

void echo_classical(Table& t, const ClassicalParams& p)
{
    t.add_meta("kappa_b", p.kappa_b());
    t.add_meta("kappa_c", p.kappa_c());
    t.add_meta("loss", p.loss());
    t.add_meta("phi", p.phi());
    t.add_meta("tau", p.tau());
    t.add_meta("delta", p.delta());
    t.add_meta("kappa_p", p.kappa_p());
    t.add_meta("x", p.x());
    t.add_meta("feedback_strength", p.feedback());
}

PumpModel pump_model(const RunConfig& cfg)
{
    const std::string m = cfg.text("model", "depleted");
    if (m == "depleted") return PumpModel::depleted;
    if (m == "undepleted") return PumpModel::undepleted;
    throw ConfigError("model must be 'depleted' or 'undepleted', got '" + m + "'");
}

CommandResult spectrum_command(const RunConfig& cfg)
{
    const SystemParams p = system_params(cfg);
    const double tp = quadrature_angle(cfg, p);
    const double kappa = total_kappa(p);
    const auto nus = cfg.values("nu", linspace(-3.0 * kappa, 3.0 * kappa, 601));
    const bool absolute = cfg.has("kappa_hz");
    const double scale = cfg.number("kappa_hz", 1.0) / kappa;

    Table t;
    t.name = "spectrum";
    echo_config(t, cfg);
    echo_system(t, p);
    t.add_meta("theta_prime", tp);
    t.columns = {"nu", "variance", "db", "diverged"};
    if (absolute) t.columns.insert(t.columns.begin() + 1, "nu_abs");
    for (const auto& pt : spectrum_curve(p, tp, nus)) {
        std::vector<Cell> row{pt.nu, pt.variance, plot_db(pt), flag(pt.diverged)};
        if (absolute) row.insert(row.begin() + 1, pt.nu * scale);
        t.add_row(std::move(row));
    }
    return {{t}, false, {}};
}

CommandResult critical_point_command(const RunConfig& cfg)
{
    const SystemParams p = system_params(cfg);
    const CriticalPoint cp = characteristic_point(p);
    Table t;
    t.name = "critical_point";
    echo_config(t, cfg);
    echo_system(t, p);
    if (!cp.valid) t.add_meta("reason", cp.reason);
    t.columns = {"nu_c", "tau_c", "floor_variance", "floor_db", "valid"};
    if (cp.valid)
        t.add_row({cp.nu_c, cp.tau_c, cp.squeezed_floor, variance_to_db(cp.squeezed_floor), 1.0});
    else
        t.add_row({kNaN, kNaN, kNaN, kNaN, 0.0});
    return {{t}, false, {}};
}

CommandResult roots_command(const RunConfig& cfg)
{
    const SystemParams p = system_params(cfg);
    const auto res = rightmost_roots(p);
    Table t;
    t.name = "roots";
    echo_config(t, cfg);
    echo_system(t, p);
    t.add_meta("winding_count", std::to_string(res.winding_count));
    t.add_meta("found_count", std::to_string(res.found_count));
    t.add_meta("complete", res.complete ? "true" : "false");
    t.columns = {"lambda_re", "lambda_im", "residual", "multiplicity"};
    for (const auto& r : res.roots)
        t.add_row({r.lambda_re, r.lambda_im, r.residual, static_cast<double>(r.multiplicity)});
    CommandResult out{{t}, !res.complete, {}};
    if (!res.complete)
        out.message = "root count not certified: found " + std::to_string(res.found_count) + " of " +
                      std::to_string(res.winding_count);
    return out;
}

CommandResult steady_command(const RunConfig& cfg)
{
    const ClassicalParams p = classical_params(cfg);
    Table t;
    t.name = "steady_states";
    echo_config(t, cfg);
    echo_classical(t, p);
    t.add_meta("x_th", threshold_drive(p));
    t.columns = {"branch", "x", "signal_re", "signal_im", "pump_re", "pump_im", "stable"};
    for (const auto& ss : steady_states(p))
        t.add_row({to_string(ss.branch), ss.x, ss.signal.real(), ss.signal.imag(), ss.pump.real(), ss.pump.imag(),
                   flag(ss.stable)});
    return {{t}, false, {}};
}

CommandResult evolve_command(const RunConfig& cfg)
{
    const ClassicalParams p = classical_params(cfg);
    const State init =
        make_state({cfg.number("signal_re", 0.5), cfg.number("signal_im", 0.0)},
                   {cfg.number("pump_re", 0.0), cfg.number("pump_im", 0.0)});
    const double t_end = cfg.number("t_end");
    const double step = cfg.number("step", default_step(p));
    std::size_t stride = 1;
    if (cfg.has("stride")) {
        const double s = cfg.number("stride");
        if (!(s >= 1.0) || s != std::floor(s)) throw ConfigError("stride must be a positive integer");
        stride = static_cast<std::size_t>(s);
    } else {
        stride = std::max<std::size_t>(1, static_cast<std::size_t>(t_end / step / 20000.0));
    }
    const auto traj = integrate(p, init, t_end, step, stride);
    const auto cls = classify_longtime(traj);

    Table t;
    t.name = "trajectory";
    echo_config(t, cfg);
    echo_classical(t, p);
    t.add_meta("step", traj.step());
    t.add_meta("verdict", to_string(cls.verdict));
    t.add_meta("peak_to_peak", cls.peak_to_peak);
    if (cls.verdict == LongtimeVerdict::oscillating) t.add_meta("period", cls.period);
    if (!cls.note.empty()) t.add_meta("note", cls.note);
    t.columns = {"t", "signal_re", "signal_im", "signal_abs", "pump_re", "pump_im"};
    for (std::size_t i = 0; i < traj.times().size(); ++i) {
        const State& s = traj.states()[i];
        t.add_row({traj.times()[i], s[0], s[1], std::abs(signal_of(s)), s[2], s[3]});
    }
    CommandResult out{{t}, cls.verdict == LongtimeVerdict::undecidable, {}};
    if (out.numerical_failure) out.message = "long-time behaviour undecidable: " + cls.note;
    return out;
}

CommandResult hopf_command(const RunConfig& cfg)
{
    const auto taus = cfg.values("tau", {});
    if (taus.empty()) throw ConfigError("hopf-locus: missing required key 'tau'");
    const ClassicalParams p = classical_params(with_values(cfg, {"tau"}, {taus.front()}));
    HopfOptions opt;
    opt.model = pump_model(cfg);
    opt.x_tolerance = cfg.number("x_tol", 1e-6);
    const double sp = cfg.number("scan_points", 16.0);
    if (!(sp >= 2.0) || sp != std::floor(sp)) throw ConfigError("scan_points must be an integer >= 2");
    opt.scan_points = static_cast<int>(sp);
    const auto pts = hopf_locus(p, taus, cfg.number("x_min"), cfg.number("x_max"), opt);

    Table t;
    t.name = "hopf_locus";
    echo_config(t, cfg);
    t.add_meta("model", cfg.text("model", "depleted"));
    t.columns = {"tau", "x", "omega_hopf", "residual"};
    for (const auto& h : pts) t.add_row({h.tau, h.x, h.omega_hopf, h.residual});
    return {{t}, false, {}};
}

// Output columns and values of one sweep quantity at a single grid point.
struct Evaluation {
    std::vector<Cell> values;
    bool uncertified = false;
};

std::vector<std::string> quantity_columns(const std::string& q)
{
    if (q == "spectrum") return {"variance", "db", "diverged"};
    if (q == "nu_c") return {"nu_c", "valid"};
    if (q == "tau_c") return {"tau_c", "valid"};
    if (q == "floor") return {"floor_variance", "floor_db", "valid"};
    if (q == "max_re") return {"max_re", "rightmost_im", "unstable", "certified"};
    if (q == "x_th") return {"x_th"};
    if (q == "omega_hopf") return {"x_hopf", "omega_hopf", "found"};
    throw ConfigError("unknown sweep quantity '" + q + "' (spectrum, nu_c, tau_c, floor, max_re, x_th, omega_hopf)");
}

Evaluation evaluate(const std::string& q, const RunConfig& cfg)
{
    if (q == "spectrum") {
        const SystemParams p = system_params(cfg);
        const auto pt = squeezing_spectrum(p, quadrature_angle(cfg, p), cfg.number("nu", 0.0));
        return {{pt.variance, plot_db(pt), flag(pt.diverged)}};
    }
    if (q == "nu_c" || q == "tau_c" || q == "floor") {
        const CriticalPoint cp = characteristic_point(system_params(cfg));
        if (q == "nu_c") return {{cp.valid ? cp.nu_c : kNaN, flag(cp.valid)}};
        if (q == "tau_c") return {{cp.valid ? cp.tau_c : kNaN, flag(cp.valid)}};
        return {{cp.valid ? cp.squeezed_floor : kNaN, cp.valid ? variance_to_db(cp.squeezed_floor) : kNaN,
                 flag(cp.valid)}};
    }
    if (q == "max_re") {
        // with a drive x the classical steady state is analysed, otherwise the linear model
        const RootSearchResult res =
            cfg.has("x") ? tracked_roots(classical_params(cfg), pump_model(cfg)) : rightmost_roots(system_params(cfg));
        const double re = res.max_re();
        const double im = res.roots.empty() ? kNaN : std::abs(res.roots.front().lambda_im);
        return {{re, im, flag(re > 0.0), flag(res.complete)}, !res.complete};
    }
    if (q == "x_th") return {{threshold_drive(classical_params(cfg))}};
    // omega_hopf
    const ClassicalParams p = classical_params(cfg);
    HopfOptions opt;
    opt.model = pump_model(cfg);
    opt.x_tolerance = cfg.number("x_tol", 1e-6);
    const double taus[] = {p.tau()};
    const auto pts = hopf_locus(p, taus, cfg.number("x_min", 0.05), cfg.number("x_max", 3.0), opt);
    if (pts.empty()) return {{kNaN, kNaN, 0.0}};
    return {{pts.front().x, pts.front().omega_hopf, 1.0}};
}

}  // namespace

CommandResult sweep(const RunConfig& cfg)
{
    const std::string q = cfg.text("quantity", "");
    if (q.empty()) throw ConfigError("sweep: missing required key 'quantity'");
    const auto keys = cfg.swept_keys();
    if (keys.size() > 2) throw ConfigError("sweep: at most two keys may be swept");
    for (const auto& k : keys)
        if (!is_numeric_key(k)) throw ConfigError("sweep: '" + k + "' is not numeric");

    Table t;
    t.name = "sweep";
    echo_config(t, cfg);
    t.columns = keys;
    for (const auto& c : quantity_columns(q)) t.columns.push_back(c);

    std::vector<std::vector<double>> axes;
    for (const auto& k : keys) axes.push_back(cfg.values(k, {}));
    std::size_t total = 1;
    for (const auto& ax : axes) total *= ax.size();
    CommandResult out;
    for (std::size_t n = 0; n < total; ++n) {
        // last swept key varies fastest
        std::vector<double> point(keys.size());
        std::size_t rem = n;
        for (std::size_t a = keys.size(); a-- > 0;) {
            point[a] = axes[a][rem % axes[a].size()];
            rem /= axes[a].size();
        }
        const Evaluation ev = evaluate(q, with_values(cfg, keys, point));
        std::vector<Cell> row(point.begin(), point.end());
        row.insert(row.end(), ev.values.begin(), ev.values.end());
        t.add_row(std::move(row));
        if (ev.uncertified) out.numerical_failure = true;
    }
    if (out.numerical_failure) out.message = "some root counts could not be certified";
    out.tables.push_back(std::move(t));
    return out;
}

CommandResult run_command(const RunConfig& cfg)
{
    validate(cfg);
    if (cfg.command == "spectrum") return spectrum_command(cfg);
    if (cfg.command == "critical-point") return critical_point_command(cfg);
    if (cfg.command == "stability-roots") return roots_command(cfg);
    if (cfg.command == "steady-states") return steady_command(cfg);
    if (cfg.command == "evolve") return evolve_command(cfg);
    if (cfg.command == "hopf-locus") return hopf_command(cfg);
    if (cfg.command == "sweep") return sweep(cfg);
    throw ConfigError("command '" + cfg.command + "' is not handled here");
}

}  // namespace dpa
