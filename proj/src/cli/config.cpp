#include "stochmech/cli/config.hpp"

#include "stochmech/core/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace stochmech::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& text)
{
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto r = std::from_chars(text.data(), end, v);
    if (r.ec != std::errc() || r.ptr != end)
        throw ConfigError(key, "expected a number, got '" + text + "'");
    return v;
}

const std::map<std::string, std::vector<std::string>>& option_table()
{
    static const std::map<std::string, std::vector<std::string>> table{
        {"spectrum", {"n", "x_max", "grid_points", "n_eigs", "scheme", "richardson", "interval", "parity"}},
        {"evolve", {"n", "x_max", "grid_points", "dt", "output_times", "initial", "x0", "q", "width"}},
        {"kernel", {"n", "x_max", "grid_points", "dt", "sources", "t", "tolerance"}},
        {"control", {"kind", "x0", "a", "tau", "N", "t_end", "x_max", "grid_points", "frame_dt", "exclusion",
                     "certify_from", "tolerance", "frames"}},
        {"simulate", {"n", "n_particles", "dt", "t_end", "snapshot_times", "initial", "x0", "q", "width", "x_max", "grid_points"}},
        {"compare", {"engines", "n", "x_max", "grid_points", "dt", "times", "x0", "initial", "n_eigs",
                     "n_particles", "sde_dt", "bins", "tolerance", "q", "width"}},
    };
    return table;
}

}  // namespace

std::string format_double(double x)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

PhysicalParams ScenarioConfig::params() const
{
    try {
        return derive_params(mass, omega, action, mode);
    } catch (const DomainError& e) {
        throw ConfigError(e.field(), e.what());
    }
}

std::string ScenarioConfig::get(const std::string& key, const std::string& fallback) const
{
    const auto it = options.find(key);
    return it == options.end() ? fallback : it->second;
}

double ScenarioConfig::get_double(const std::string& key, double fallback) const
{
    const auto it = options.find(key);
    return it == options.end() ? fallback : to_double(key, it->second);
}

long ScenarioConfig::get_int(const std::string& key, long fallback) const
{
    const auto it = options.find(key);
    if (it == options.end())
        return fallback;
    long v = 0;
    const auto& s = it->second;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw ConfigError(key, "expected an integer, got '" + s + "'");
    return v;
}

bool ScenarioConfig::get_bool(const std::string& key, bool fallback) const
{
    const auto it = options.find(key);
    if (it == options.end())
        return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes")
        return true;
    if (it->second == "false" || it->second == "0" || it->second == "no")
        return false;
    throw ConfigError(key, "expected true or false, got '" + it->second + "'");
}

std::vector<double> ScenarioConfig::get_list(const std::string& key, const std::vector<double>& fallback) const
{
    const auto it = options.find(key);
    if (it == options.end())
        return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(to_double(key, trim(item)));
    if (out.empty())
        throw ConfigError(key, "empty list");
    return out;
}

ScenarioConfig parse_config(std::istream& in)
{
    ScenarioConfig c;
    bool have_action = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no), "missing key");
        if (key == "command") {
            c.command = value;
        } else if (key == "m") {
            c.mass = to_double(key, value);
        } else if (key == "omega") {
            c.omega = to_double(key, value);
        } else if (key == "hbar" || key == "emittance") {
            if (have_action)
                throw ConfigError(key, "give only one of hbar and emittance");
            have_action = true;
            c.action = to_double(key, value);
            if (key == "emittance")
                c.mode = Mode::beam;
        } else if (key == "mode") {
            try {
                c.mode = parse_mode(value);
            } catch (const DomainError& e) {
                throw ConfigError(key, e.what());
            }
        } else if (key == "out") {
            c.out_dir = value;
        } else if (key == "seed") {
            std::uint64_t s = 0;
            const auto r = std::from_chars(value.data(), value.data() + value.size(), s);
            if (r.ec != std::errc() || r.ptr != value.data() + value.size())
                throw ConfigError(key, "expected an unsigned integer, got '" + value + "'");
            c.seed = s;
        } else {
            c.options[key] = value;
        }
    }
    validate(c);
    return c;
}

ScenarioConfig parse_config_text(const std::string& text)
{
    std::istringstream in(text);
    return parse_config(in);
}

ScenarioConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("--config", "cannot open '" + path + "'");
    return parse_config(in);
}

std::string to_text(const ScenarioConfig& c)
{
    std::ostringstream out;
    out << "command = " << c.command << '\n';
    out << "mode = " << to_string(c.mode) << '\n';
    out << "m = " << format_double(c.mass) << '\n';
    out << "omega = " << format_double(c.omega) << '\n';
    out << (c.mode == Mode::beam ? "emittance = " : "hbar = ") << format_double(c.action) << '\n';
    out << "out = " << c.out_dir << '\n';
    out << "seed = " << c.seed << '\n';
    for (const auto& [k, v] : c.options)
        out << k << " = " << v << '\n';
    return out.str();
}

std::string config_hash(const ScenarioConfig& c)
{
    ScenarioConfig keyed = c;
    keyed.out_dir.clear();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : to_text(keyed)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

const std::vector<std::string>& known_options(const std::string& command)
{
    const auto& t = option_table();
    const auto it = t.find(command);
    if (it == t.end())
        throw ConfigError("command", "unknown command '" + command + "'");
    return it->second;
}

void validate(const ScenarioConfig& c)
{
    if (c.command.empty())
        throw ConfigError("command", "missing");
    const auto& keys = known_options(c.command);
    for (const auto& [k, v] : c.options) {
        if (std::find(keys.begin(), keys.end(), k) == keys.end())
            throw ConfigError(k, "unknown option for command '" + c.command + "'");
        if (v.empty())
            throw ConfigError(k, "empty value");
        static const std::vector<std::string> text_keys{"scheme", "parity", "initial", "kind", "engines"};
        static const std::vector<std::string> int_keys{"n", "grid_points", "n_eigs", "N", "n_particles", "bins"};
        static const std::vector<std::string> list_keys{"interval", "output_times", "sources", "snapshot_times",
                                                        "times", "frames"};
        auto in = [&](const std::vector<std::string>& set) { return std::find(set.begin(), set.end(), k) != set.end(); };
        if (in(text_keys))
            continue;
        if (in(int_keys))
            (void)c.get_int(k, 0);
        else if (in(list_keys))
            (void)c.get_list(k, {});
        else if (k == "richardson")
            (void)c.get_bool(k, true);
        else
            (void)c.get_double(k, 0.0);
    }
    (void)c.params();
}

}  // namespace stochmech::cli
