#include "dpa/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace dpa {

namespace {

const std::set<std::string, std::less<>> kTextKeys{"quantity", "model", "output"};

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_plain(std::string_view s)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError("not a number: '" + std::string(s) + "'");
    return v;
}

std::string where(int line) { return line > 0 ? "line " + std::to_string(line) + ": " : ""; }

std::string exact(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<double> GridSpec::values() const
{
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = count == 1 ? start : start + (stop - start) * i / (count - 1);
    if (count > 1) out.back() = stop;
    return out;
}

double parse_number(std::string_view text)
{
    std::string_view s = trim(text);
    if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
        std::string_view head = trim(s.substr(0, s.size() - 2));
        if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
        double factor = 1.0;
        if (head == "-")
            factor = -1.0;
        else if (!head.empty() && head != "+")
            factor = parse_plain(head);
        return factor * kPi;
    }
    const double v = parse_plain(s);
    if (!std::isfinite(v)) throw ConfigError("value must be finite: '" + std::string(s) + "'");
    return v;
}

const std::vector<std::string>& known_keys()
{
    static const std::vector<std::string> keys{
        "kappa_b",  "kappa_c",  "k",      "loss",   "phi",     "tau",       "delta",     "eps",
        "theta",    "theta_prime", "theta_d", "nu",  "kappa_p", "x",         "signal_re", "signal_im",
        "pump_re",  "pump_im",  "t_end",  "step",   "stride",  "x_min",     "x_max",     "scan_points",
        "x_tol",    "kappa_hz", "quantity", "model", "output"};
    return keys;
}

bool is_numeric_key(std::string_view key)
{
    const auto& keys = known_keys();
    return std::find(keys.begin(), keys.end(), key) != keys.end() && kTextKeys.count(key) == 0;
}

void RunConfig::set(const std::string& key, const std::string& text, int line)
{
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(where(line) + "unknown key '" + key + "'");
    Binding b;
    b.text = std::string(trim(text));
    b.line = line;
    if (b.text.empty()) throw ConfigError(where(line) + "empty value for '" + key + "'");
    if (is_numeric_key(key)) {
        try {
            if (b.text.find(':') != std::string::npos) {
                std::vector<std::string_view> parts;
                std::string_view rest = b.text;
                for (auto pos = rest.find(':'); pos != std::string_view::npos; pos = rest.find(':')) {
                    parts.push_back(rest.substr(0, pos));
                    rest.remove_prefix(pos + 1);
                }
                parts.push_back(rest);
                if (parts.size() != 3) throw ConfigError("grid must be start:stop:count");
                GridSpec g;
                g.start = parse_number(parts[0]);
                g.stop = parse_number(parts[1]);
                const double n = parse_plain(parts[2]);
                if (n < 1.0 || n != std::floor(n) || n > 1e7) throw ConfigError("grid count must be a positive integer");
                g.count = static_cast<int>(n);
                b.grid = g;
            } else {
                b.number = parse_number(b.text);
            }
        } catch (const ConfigError& e) {
            throw ConfigError(where(line) + key + ": " + e.what());
        }
    } else if (b.text.find(':') != std::string::npos) {
        throw ConfigError(where(line) + "'" + key + "' is not numeric and cannot be swept");
    }
    bindings[key] = b;
}

void RunConfig::merge(const RunConfig& overrides)
{
    if (!overrides.command.empty()) command = overrides.command;
    for (const auto& [key, b] : overrides.bindings) bindings[key] = b;
}

double RunConfig::number(const std::string& key) const
{
    const auto it = bindings.find(key);
    if (it == bindings.end()) throw ConfigError("missing required key '" + key + "'");
    if (!it->second.number) throw ConfigError("'" + key + "' needs a single numeric value here");
    return *it->second.number;
}

double RunConfig::number(const std::string& key, double fallback) const
{
    return has(key) ? number(key) : fallback;
}

std::string RunConfig::text(const std::string& key, const std::string& fallback) const
{
    const auto it = bindings.find(key);
    return it == bindings.end() ? fallback : it->second.text;
}

std::vector<double> RunConfig::values(const std::string& key, const std::vector<double>& fallback) const
{
    const auto it = bindings.find(key);
    if (it == bindings.end()) return fallback;
    if (it->second.grid) return it->second.grid->values();
    if (it->second.number) return {*it->second.number};
    throw ConfigError("'" + key + "' is not numeric");
}

std::vector<std::string> RunConfig::swept_keys() const
{
    std::vector<std::string> out;
    for (const auto& [key, b] : bindings)
        if (b.grid) out.push_back(key);
    return out;
}

RunConfig parse_config(std::string_view text)
{
    RunConfig cfg;
    int line = 0;
    std::istringstream in{std::string(text)};
    std::string buffer;
    while (std::getline(in, buffer)) {
        ++line;
        std::string_view raw = buffer;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        raw = trim(raw);
        if (raw.empty()) continue;
        const auto eq = raw.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected key=value, got '" + std::string(raw) + "'");
        const std::string key(trim(raw.substr(0, eq)));
        const std::string value(trim(raw.substr(eq + 1)));
        if (key.empty()) throw ConfigError("line " + std::to_string(line) + ": missing key");
        if (const auto it = cfg.bindings.find(key); it != cfg.bindings.end()) {
            RunConfig probe;
            probe.set(key, value, line);
            const Binding& a = it->second;
            const Binding& b = probe.bindings.at(key);
            const bool same = a.number && b.number ? *a.number == *b.number : a.text == b.text;
            if (!same)
                throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "' conflicts with line " +
                                  std::to_string(a.line));
            continue;
        }
        cfg.set(key, value, line);
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate(const RunConfig& cfg)
{
    static const std::map<std::string, std::vector<std::string>> required{
        {"spectrum", {"eps"}},          {"critical-point", {"eps"}},     {"stability-roots", {"eps"}},
        {"steady-states", {"x"}},       {"evolve", {"x", "t_end"}},      {"hopf-locus", {"tau", "x_min", "x_max"}},
        {"sweep", {"quantity"}},        {"figure", {}}};
    static const std::map<std::string, std::vector<std::string>> sweepable{
        {"spectrum", {"nu"}}, {"hopf-locus", {"tau"}}};

    const auto it = required.find(cfg.command);
    if (it == required.end()) throw ConfigError("unknown command '" + cfg.command + "'");
    for (const auto& key : it->second)
        if (!cfg.has(key)) throw ConfigError(cfg.command + ": missing required key '" + key + "'");

    const auto swept = cfg.swept_keys();
    if (cfg.command == "sweep") {
        if (swept.size() > 2) throw ConfigError("sweep: at most two keys may be swept");
        return;
    }
    const auto allowed = sweepable.count(cfg.command) ? sweepable.at(cfg.command) : std::vector<std::string>{};
    for (const auto& key : swept)
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(cfg.command + ": '" + key + "' must be a single value (use the sweep command)");
}

SystemParams system_params(const RunConfig& cfg)
{
    ParamValues v;
    v.loss = cfg.number("loss", 0.0);
    v.phi = cfg.number("phi", 0.0);
    v.tau = cfg.number("tau", 0.0);
    v.delta = cfg.number("delta", 0.0);
    v.eps_mag = cfg.number("eps", 0.0);
    v.eps_phase = cfg.number("theta", 0.0);
    try {
        if (cfg.has("k")) {
            if (cfg.has("kappa_b") || cfg.has("kappa_c")) throw ConfigError("give either k or kappa_b/kappa_c, not both");
            return SystemParams::with_feedback_strength(cfg.number("k"), v.loss, v);
        }
        v.kappa_b = cfg.number("kappa_b", 0.5);
        v.kappa_c = cfg.number("kappa_c", 0.5);
        return SystemParams(v);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

ClassicalParams classical_params(const RunConfig& cfg)
{
    ClassicalValues v;
    v.loss = cfg.number("loss", 0.0);
    v.phi = cfg.number("phi", 0.0);
    v.tau = cfg.number("tau", 0.0);
    v.delta = cfg.number("delta", 0.0);
    v.kappa_p = cfg.number("kappa_p", 1.0);
    v.x = cfg.number("x", 0.0);
    try {
        if (cfg.has("k")) {
            if (cfg.has("kappa_b") || cfg.has("kappa_c")) throw ConfigError("give either k or kappa_b/kappa_c, not both");
            return ClassicalParams::with_feedback_strength(cfg.number("k"), v);
        }
        v.kappa_b = cfg.number("kappa_b", 0.5);
        v.kappa_c = cfg.number("kappa_c", 0.5);
        return ClassicalParams(v);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

double quadrature_angle(const RunConfig& cfg, const SystemParams& p)
{
    if (cfg.has("theta_prime") && cfg.has("theta_d")) throw ConfigError("give either theta_prime or theta_d, not both");
    if (cfg.has("theta_prime")) return cfg.number("theta_prime");
    if (cfg.has("theta_d")) return p.eps_phase() + cfg.number("theta_d");
    return p.eps_phase() + kPi;
}

RunConfig with_values(const RunConfig& cfg, const std::vector<std::string>& keys, const std::vector<double>& values)
{
    RunConfig out = cfg;
    for (std::size_t i = 0; i < keys.size() && i < values.size(); ++i) {
        Binding b;
        b.text = exact(values[i]);
        b.number = values[i];
        out.bindings[keys[i]] = b;
    }
    return out;
}

}  // namespace dpa
