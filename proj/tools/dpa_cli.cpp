// Command-line front end: spectra, characteristic points, stability roots,
// classical dynamics, Hopf loci, figure data and parameter sweeps as CSV.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpa/config.hpp"
#include "dpa/errors.hpp"
#include "dpa/figures.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Invocation {
    std::vector<std::string> assignments;
    std::string config_path;
    std::string output;
};

dpa::RunConfig build_config(const std::string& command, const Invocation& inv)
{
    dpa::RunConfig cfg;
    if (!inv.config_path.empty()) cfg = dpa::load_config(inv.config_path);
    dpa::RunConfig flags;
    for (const auto& a : inv.assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos || eq == 0) throw dpa::ConfigError("expected key=value, got '" + a + "'");
        flags.set(a.substr(0, eq), a.substr(eq + 1));
    }
    if (!inv.output.empty()) flags.set("output", inv.output);
    cfg.merge(flags);
    cfg.command = command;
    return cfg;
}

void emit(const dpa::CommandResult& res, const std::string& output)
{
    if (output.empty() || output == "-") {
        for (const auto& t : res.tables) dpa::write_csv(std::cout, t);
        return;
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) throw dpa::ConfigError("cannot write '" + output + "'");
    for (const auto& t : res.tables) dpa::write_csv(out, t);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Delayed coherent feedback DPA toolkit"};
    app.require_subcommand(0, 1);

    const std::vector<std::pair<std::string, std::string>> commands{
        {"spectrum", "output quadrature variance versus sideband frequency (nu may be a start:stop:count grid)"},
        {"critical-point", "characteristic frequency, delay and squeezing floor"},
        {"stability-roots", "characteristic roots of the delayed linear system"},
        {"steady-states", "steady-state branches of the pump-depleted classical model"},
        {"evolve", "integrate the classical delay equations and classify the long-time behaviour"},
        {"hopf-locus", "Hopf points over a tau grid by bisection in x"},
        {"sweep", "evaluate a quantity over one or two swept keys"},
    };
    std::map<std::string, Invocation> invocations;
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        auto& inv = invocations[name];
        sub->add_option("assignments", inv.assignments, "key=value bindings (override the config file)");
        sub->add_option("-c,--config", inv.config_path, "config file with key=value lines");
        sub->add_option("-o,--output", inv.output, "CSV output path (default stdout)");
    }

    std::string figure_id;
    std::string out_dir = ".";
    auto* fig = app.add_subcommand("figure", "write the CSV tables behind one figure");
    fig->add_option("id", figure_id, "figure id")->required();
    fig->add_option("-d,--out-dir", out_dir, "directory for the CSV files");
    bool list_figures = false;
    app.add_flag("--list-figures", list_figures, "print the known figure ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }
    if (list_figures) {
        for (const auto& id : dpa::figure_ids()) std::cout << id << '\n';
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return kExitConfig;
    }

    try {
        if (fig->parsed()) {
            for (const auto& path : dpa::run_figure(figure_id, out_dir)) std::cerr << "wrote " << path << '\n';
            return 0;
        }
        for (const auto& [name, help] : commands) {
            if (!app.got_subcommand(name)) continue;
            const dpa::RunConfig cfg = build_config(name, invocations[name]);
            const dpa::CommandResult res = dpa::run_command(cfg);
            emit(res, cfg.text("output", ""));
            if (res.numerical_failure) {
                std::cerr << "numerical failure: " << res.message << '\n';
                return kExitNumerical;
            }
            return 0;
        }
    } catch (const dpa::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kExitConfig;
    } catch (const dpa::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
