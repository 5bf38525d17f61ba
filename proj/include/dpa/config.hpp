#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dpa/classical.hpp"
#include "dpa/params.hpp"

namespace dpa {

/// Malformed or incomplete run configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// start:stop:count, inclusive of both ends.
struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    int count = 1;

    std::vector<double> values() const;
};

struct Binding {
    std::string text;                // as written
    std::optional<double> number;    // numeric keys with a single value
    std::optional<GridSpec> grid;    // numeric keys given as start:stop:count
    int line = 0;                    // 0 for command-line bindings
};

/// Parses a number with an optional "pi" factor: "0.25", "pi", "-0.3pi", "0.5*pi".
double parse_number(std::string_view text);

/// True for keys that hold numbers (and may therefore be swept).
bool is_numeric_key(std::string_view key);

/// Every key accepted in a config file or on the command line.
const std::vector<std::string>& known_keys();

struct RunConfig {
    std::string command;
    std::map<std::string, Binding> bindings;

    bool has(const std::string& key) const { return bindings.count(key) != 0; }

    /// Adds or replaces a binding after checking the key and parsing the value.
    void set(const std::string& key, const std::string& text, int line = 0);

    /// Bindings of `overrides` replace those held here.
    void merge(const RunConfig& overrides);

    double number(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    std::string text(const std::string& key, const std::string& fallback) const;

    /// Grid values of a swept key, or the single value, or `fallback` when unbound.
    std::vector<double> values(const std::string& key, const std::vector<double>& fallback) const;

    /// Keys bound to grids, in key order.
    std::vector<std::string> swept_keys() const;
};

/// One key=value per line; '#' starts a comment; blank lines ignored.
/// Throws ConfigError naming the line for malformed lines, unknown keys and
/// duplicate keys with conflicting values.
RunConfig parse_config(std::string_view text);

/// Reads and parses a config file.
RunConfig load_config(const std::string& path);

/// Checks that every key required by `command` is bound and that no swept
/// key is used where a single value is needed.
void validate(const RunConfig& cfg);

/// Undepleted model parameters. "k" (with "loss") selects a kappa = 1 cavity
/// with that feedback strength; otherwise kappa_b and kappa_c are used.
/// "eps" and "theta" give the pump magnitude and phase. Grid keys are rejected.
SystemParams system_params(const RunConfig& cfg);

/// Classical model parameters from the same keys plus kappa_p and x.
ClassicalParams classical_params(const RunConfig& cfg);

/// Quadrature angle: theta_prime if bound, theta + theta_d if theta_d is
/// bound, otherwise the squeezed angle theta + pi.
double quadrature_angle(const RunConfig& cfg, const SystemParams& p);

/// A copy of `cfg` with each listed key bound to a single value.
RunConfig with_values(const RunConfig& cfg, const std::vector<std::string>& keys, const std::vector<double>& values);

}  // namespace dpa
