#include "dpa/figures.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

#include "dpa/classical.hpp"
#include "dpa/critical_points.hpp"
#include "dpa/hopf.hpp"
#include "dpa/spectrum.hpp"
#include "dpa/stability.hpp"

namespace dpa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SystemParams symmetric(double eps, double tau, double loss = 0.0, double phi = 0.0, double delta = 0.0)
{
    ParamValues v;
    v.eps_mag = eps;
    v.tau = tau;
    v.loss = loss;
    v.phi = phi;
    v.delta = delta;
    return SystemParams(v);
}

SystemParams one_sided(double eps)
{
    ParamValues v;
    v.kappa_b = 1.0;
    v.kappa_c = 0.0;
    v.eps_mag = eps;
    return SystemParams(v);
}

// Nearly one-sided cavity with k = sqrt(1 - L) / 2 and phi = pi.
SystemParams pyragas(double eps, double tau, double loss, double phi = kPi, double delta = 0.0)
{
    ParamValues v;
    v.eps_mag = eps;
    v.tau = tau;
    v.phi = phi;
    v.delta = delta;
    return SystemParams::with_feedback_strength(0.5 * std::sqrt(1.0 - loss), loss, v);
}

void add_curve(Table& t, const std::vector<Cell>& prefix, const SystemParams& p, double tp,
               const std::vector<double>& nus)
{
    for (const auto& pt : spectrum_curve(p, tp, nus)) {
        std::vector<Cell> row = prefix;
        row.insert(row.end(), {pt.nu, pt.variance, plot_db(pt), pt.diverged ? 1.0 : 0.0});
        t.add_row(std::move(row));
    }
}

double floor_db(const SystemParams& p)
{
    const CriticalPoint cp = characteristic_point(p);
    return cp.valid ? variance_to_db(cp.squeezed_floor) : kNaN;
}

std::vector<Table> fig2()
{
    const double eps = 0.75;
    const CriticalPoint cp = characteristic_point(symmetric(eps, 0.0));
    const std::vector<double> taus{0.0, 0.5, 1.0, 1.4, cp.tau_c};
    const auto nus = linspace(-3.0, 3.0, 1201);
    std::vector<Table> out;
    for (const auto& [name, tp] : {std::pair<std::string, double>{"antisqueezed", 0.0}, {"squeezed", kPi}}) {
        Table t;
        t.name = name;
        t.add_meta("eps", eps);
        t.add_meta("kappa_b", 0.5);
        t.add_meta("kappa_c", 0.5);
        t.add_meta("loss", 0.0);
        t.add_meta("phi", 0.0);
        t.add_meta("delta", 0.0);
        t.add_meta("theta_prime", tp);
        t.add_meta("nu_c", cp.nu_c);
        t.add_meta("tau_c", cp.tau_c);
        t.columns = {"tau", "nu", "variance", "db", "diverged"};
        for (double tau : taus) add_curve(t, {tau}, symmetric(eps, tau), tp, nus);
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<Table> delay_and_loss(double eps)
{
    const auto nus = linspace(-3.0, 3.0, 1201);
    Table t;
    t.name = "spectra";
    t.add_meta("eps", eps);
    t.add_meta("kappa_b", 0.5);
    t.add_meta("kappa_c", 0.5);
    t.add_meta("phi", 0.0);
    t.add_meta("delta", 0.0);
    t.add_meta("theta_prime", kPi);
    t.columns = {"curve", "loss", "tau", "nu", "variance", "db", "diverged"};
    for (double loss : {0.0, 0.05}) {
        const CriticalPoint cp = characteristic_point(symmetric(eps, 0.0, loss));
        t.add_meta("tau_c_loss_" + exact_number(loss), cp.tau_c);
        t.add_meta("nu_c_loss_" + exact_number(loss), cp.nu_c);
        for (double tau : {0.0, 1.0, cp.tau_c}) add_curve(t, {"feedback", loss, tau}, symmetric(eps, tau, loss), kPi, nus);
    }
    // loss = 1 removes the feedback: vacuum enters the second mirror
    add_curve(t, {"no_feedback_symmetric", 1.0, 0.0}, symmetric(eps, 0.0, 1.0), kPi, nus);
    add_curve(t, {"no_feedback_one_sided", 0.0, 0.0}, one_sided(eps), kPi, nus);
    return {t};
}

std::vector<Table> fig5()
{
    Table t;
    t.name = "floor";
    t.add_meta("kappa_b", 0.5);
    t.add_meta("kappa_c", 0.5);
    t.add_meta("phi", 0.0);
    t.add_meta("delta", 0.0);
    t.columns = {"eps", "db_loss_0.02", "db_loss_0.05", "db_loss_0.10", "db_one_sided"};
    for (double eps : linspace(0.01, 0.99, 99)) {
        std::vector<Cell> row{eps};
        for (double loss : {0.02, 0.05, 0.10}) row.push_back(floor_db(symmetric(eps, 0.0, loss)));
        row.push_back(variance_to_db(resonance_variance_no_feedback(1.0, eps)));
        t.add_row(std::move(row));
    }
    return {t};
}

std::vector<Table> fig7()
{
    struct Panel {
        std::string id;
        double k;
        double phi;
    };
    Table t;
    t.name = "bifurcation";
    t.add_meta("tau", 0.0);
    t.add_meta("kappa_p", 1.0);
    t.columns = {"panel", "k", "phi", "x", "branch", "signal_re", "signal_im", "pump_re", "pump_im", "stable"};
    for (const Panel& pn : {Panel{"a", 0.0, 0.0}, Panel{"b", 1.0, 0.0}, Panel{"c", 0.5, 0.0}, Panel{"d", 0.5, kPi}}) {
        ClassicalValues v;
        v.phi = pn.phi;
        const ClassicalParams base = ClassicalParams::with_feedback_strength(pn.k, v);
        for (double x : linspace(0.0, 4.0, 201)) {
            for (const auto& ss : steady_states(base.with_x(x)))
                t.add_row({pn.id, pn.k, pn.phi, x, to_string(ss.branch), ss.signal.real(), ss.signal.imag(),
                           ss.pump.real(), ss.pump.imag(), ss.stable ? 1.0 : 0.0});
        }
    }
    return {t};
}

std::vector<Table> fig9()
{
    std::vector<Table> out;
    for (const auto& [name, x] : {std::pair<std::string, double>{"a", 0.745}, {"b", 0.78}}) {
        ClassicalValues v;
        v.tau = 1.8833;
        v.x = x;
        const ClassicalParams p = ClassicalParams::with_feedback_strength(1.0, v);
        const double h = default_step(p);
        const auto stride = static_cast<std::size_t>(std::max(1.0, std::round(0.1 / h)));
        const auto traj = integrate(p, make_state(0.5, 0.0), 300.0, h, stride);
        const auto cls = classify_longtime(traj);
        Table t;
        t.name = name;
        t.add_meta("x", x);
        t.add_meta("k", 1.0);
        t.add_meta("tau", v.tau);
        t.add_meta("phi", 0.0);
        t.add_meta("kappa_p", 1.0);
        t.add_meta("step", traj.step());
        t.add_meta("verdict", to_string(cls.verdict));
        if (!cls.note.empty()) t.add_meta("note", cls.note);
        if (cls.verdict == LongtimeVerdict::oscillating) t.add_meta("period", cls.period);
        t.columns = {"t", "signal_re", "signal_im", "signal_abs", "pump_re", "pump_im"};
        for (std::size_t i = 0; i < traj.times().size(); ++i) {
            const State& s = traj.states()[i];
            t.add_row({traj.times()[i], s[0], s[1], std::abs(signal_of(s)), s[2], s[3]});
        }
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<Table> fig10()
{
    ClassicalValues v;
    const ClassicalParams base = ClassicalParams::with_feedback_strength(1.0, v);
    std::vector<double> taus;
    for (int i = 10; i <= 120; ++i) taus.push_back(0.05 * i);
    HopfOptions opt;
    opt.scan_points = 40;

    Table locus, vs_x, vs_tau;
    locus.name = "locus_x_tau";
    vs_x.name = "omega_vs_x";
    vs_tau.name = "omega_vs_tau";
    for (Table* t : {&locus, &vs_x, &vs_tau}) {
        t->add_meta("k", 1.0);
        t->add_meta("phi", 0.0);
        t->add_meta("kappa_p", 1.0);
        t->add_meta("x_min", 0.05);
        t->add_meta("x_max", 3.95);
        t->add_meta("x_tolerance", opt.x_tolerance);
    }
    locus.columns = {"model", "tau", "x"};
    vs_x.columns = {"model", "x", "omega_hopf"};
    vs_tau.columns = {"model", "tau", "omega_hopf"};
    for (PumpModel m : {PumpModel::depleted, PumpModel::undepleted}) {
        opt.model = m;
        const std::string name = m == PumpModel::depleted ? "depleted" : "undepleted";
        for (const auto& h : hopf_locus(base, taus, 0.05, 3.95, opt)) {
            locus.add_row({name, h.tau, h.x});
            vs_x.add_row({name, h.x, h.omega_hopf});
            vs_tau.add_row({name, h.tau, h.omega_hopf});
        }
    }
    return {locus, vs_x, vs_tau};
}

std::vector<Table> fig11()
{
    Table t;
    t.name = "rightmost";
    t.add_meta("kappa_b", 0.5);
    t.add_meta("kappa_c", 0.5);
    t.add_meta("phi", 0.0);
    t.add_meta("delta", 0.0);
    t.add_meta("loss", 0.0);
    t.columns = {"eps", "tau", "max_re", "rightmost_im", "db_at_rightmost_im", "certified"};
    for (double eps : linspace(0.05, 1.0, 20)) {
        for (double tau : linspace(0.25, 6.0, 24)) {
            const SystemParams p = symmetric(eps, tau);
            const auto res = rightmost_roots(p);
            const double im = res.roots.empty() ? kNaN : std::abs(res.roots.front().lambda_im);
            const double db = std::isfinite(im) ? plot_db(squeezing_spectrum(p, kPi, im)) : kNaN;
            t.add_row({eps, tau, res.max_re(), im, db, res.complete ? 1.0 : 0.0});
        }
    }
    return {t};
}

std::vector<Table> fig12()
{
    Table t;
    t.name = "quadrature";
    t.add_meta("eps", 0.5);
    t.add_meta("kappa_b", 0.5);
    t.add_meta("kappa_c", 0.5);
    t.add_meta("phi", 0.0);
    t.add_meta("loss", 0.05);
    t.columns = {"delta", "nu_c", "tau_c", "theta_prime", "variance", "db"};
    for (double delta : {0.0, 0.2, 0.4}) {
        const SystemParams p = at_characteristic_delay(symmetric(0.5, 0.0, 0.05, 0.0, delta));
        const CriticalPoint cp = characteristic_point(p);
        for (double tp : linspace(0.0, kPi, 361)) {
            const double var = variance_near_characteristic(p, tp);
            t.add_row({delta, cp.nu_c, cp.tau_c, tp, var, variance_to_db(var)});
        }
    }
    return {t};
}

std::vector<Table> fig13()
{
    const double nu = characteristic_point(symmetric(0.5, 0.0, 0.05)).nu_c;
    Table t;
    t.name = "quadrature";
    t.add_meta("eps", 0.5);
    t.add_meta("kappa_b", 0.5);
    t.add_meta("kappa_c", 0.5);
    t.add_meta("tau", 2.4358);
    t.add_meta("delta", 0.0);
    t.add_meta("loss", 0.05);
    t.add_meta("nu", nu);
    t.columns = {"phi", "theta_prime", "variance", "db", "diverged"};
    for (double phi : {0.0, -0.05 * kPi, -0.1 * kPi}) {
        const SystemParams p = symmetric(0.5, 2.4358, 0.05, phi);
        for (double tp : linspace(0.0, kPi, 361)) {
            const auto pt = squeezing_spectrum(p, tp, nu);
            t.add_row({phi, tp, pt.variance, plot_db(pt), pt.diverged ? 1.0 : 0.0});
        }
    }
    return {t};
}

std::vector<Table> fig14()
{
    ParamValues v;
    v.kappa_b = 0.3;
    v.kappa_c = 0.7;
    v.eps_mag = 0.5;
    v.tau = 2.0;
    v.phi = -0.3 * kPi;
    v.loss = 0.05;
    const SystemParams p(v);
    Table t;
    t.name = "grid";
    t.add_meta("eps", v.eps_mag);
    t.add_meta("kappa_b", v.kappa_b);
    t.add_meta("kappa_c", v.kappa_c);
    t.add_meta("tau", v.tau);
    t.add_meta("phi", v.phi);
    t.add_meta("loss", v.loss);
    t.add_meta("delta", 0.0);
    t.columns = {"theta_d", "nu", "variance", "db", "diverged"};
    const auto nus = linspace(0.0, 2.0, 201);
    for (double td : linspace(0.0, kPi, 61)) add_curve(t, {td}, p, p.eps_phase() + td, nus);
    return {t};
}

std::vector<Table> fig15()
{
    const auto nus = linspace(-3.0, 3.0, 1201);
    Table t;
    t.name = "spectra";
    t.add_meta("eps", 0.45);
    t.add_meta("phi", kPi);
    t.add_meta("delta", 0.0);
    t.add_meta("theta_prime", kPi);
    t.columns = {"curve", "loss", "tau", "nu", "variance", "db", "diverged"};
    for (double loss : {0.0, 0.05})
        for (double tau : {0.0, 2.0, 4.0}) add_curve(t, {"feedback", loss, tau}, pyragas(0.45, tau, loss), kPi, nus);
    add_curve(t, {"no_feedback_one_sided", 0.0, 0.0}, one_sided(0.45), kPi, nus);
    return {t};
}

std::vector<Table> fig16()
{
    Table t;
    t.name = "resonance";
    t.add_meta("phi", kPi);
    t.add_meta("delta", 0.0);
    t.add_meta("nu", 0.0);
    t.columns = {"eps", "db_loss_0.02", "db_loss_0.05", "db_loss_0.10", "db_one_sided"};
    for (double eps : linspace(0.01, 0.99, 99)) {
        std::vector<Cell> row{eps};
        for (double loss : {0.02, 0.05, 0.10}) {
            const SystemParams p = pyragas(eps, 0.0, loss);
            // stable only while kappa - k > |eps|
            row.push_back(stability_boundary_phipi(p) ? plot_db(squeezing_spectrum(p, kPi, 0.0)) : kNaN);
        }
        row.push_back(variance_to_db(resonance_variance_no_feedback(1.0, eps)));
        t.add_row(std::move(row));
    }
    return {t};
}

std::vector<Table> fig17()
{
    Table t;
    t.name = "quadrature";
    t.add_meta("eps", 0.45);
    t.add_meta("phi", kPi);
    t.add_meta("tau", 0.0);
    t.add_meta("loss", 0.05);
    t.add_meta("nu", 0.0);
    t.columns = {"delta", "theta_prime", "variance", "db"};
    for (double delta : {0.0, 0.2, 0.4}) {
        const SystemParams p = pyragas(0.45, 0.0, 0.05, kPi, delta);
        for (double tp : linspace(0.0, kPi, 361)) {
            const auto pt = squeezing_spectrum(p, tp, 0.0);
            t.add_row({delta, tp, pt.variance, plot_db(pt)});
        }
    }
    return {t};
}

}  // namespace

void Table::add_meta(const std::string& key, double value) { meta.emplace_back(key, exact_number(value)); }

void Table::add_meta(const std::string& key, const std::string& value) { meta.emplace_back(key, value); }

void Table::add_row(std::vector<Cell> row)
{
    if (row.size() != columns.size())
        throw std::logic_error("Table " + name + ": row has " + std::to_string(row.size()) + " cells for " +
                               std::to_string(columns.size()) + " columns");
    rows.push_back(std::move(row));
}

std::string exact_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_cell(const Cell& c)
{
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    const double v = std::get<double>(c);
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
    return buf;
}

void write_csv(std::ostream& out, const Table& t)
{
    if (!t.name.empty()) out << "# table = " << t.name << '\n';
    for (const auto& [k, v] : t.meta) out << "# " << k << " = " << v << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
        out << '\n';
    }
}

void echo_config(Table& t, const RunConfig& cfg)
{
    t.add_meta("command", cfg.command);
    for (const auto& [key, b] : cfg.bindings) {
        if (b.number)
            t.add_meta("input." + key, *b.number);
        else if (b.grid)
            t.add_meta("input." + key, exact_number(b.grid->start) + ":" + exact_number(b.grid->stop) + ":" +
                                std::to_string(b.grid->count));
        else
            t.add_meta("input." + key, b.text);
    }
}

std::vector<std::string> figure_ids()
{
    return {"fig2", "fig3", "fig4", "fig5", "fig7", "fig9", "fig10", "fig11", "fig12", "fig13", "fig14", "fig15",
            "fig16", "fig17"};
}

std::vector<Table> figure_tables(const std::string& id)
{
    if (id == "fig2") return fig2();
    if (id == "fig3") return delay_and_loss(0.25);
    if (id == "fig4") return delay_and_loss(0.5);
    if (id == "fig5") return fig5();
    if (id == "fig7") return fig7();
    if (id == "fig9") return fig9();
    if (id == "fig10") return fig10();
    if (id == "fig11") return fig11();
    if (id == "fig12") return fig12();
    if (id == "fig13") return fig13();
    if (id == "fig14") return fig14();
    if (id == "fig15") return fig15();
    if (id == "fig16") return fig16();
    if (id == "fig17") return fig17();
    throw ConfigError("unknown figure id '" + id + "'");
}

std::vector<std::string> run_figure(const std::string& id, const std::string& out_dir)
{
    const auto tables = figure_tables(id);
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> paths;
    for (const auto& t : tables) {
        const auto path = (std::filesystem::path(out_dir) / (id + "_" + t.name + ".csv")).string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot write '" + path + "'");
        Table copy = t;
        copy.meta.insert(copy.meta.begin(), {"figure", id});
        write_csv(out, copy);
        paths.push_back(path);
    }
    return paths;
}

}  // namespace dpa
