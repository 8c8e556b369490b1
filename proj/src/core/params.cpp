#include "stochmech/core/params.hpp"

#include "stochmech/core/errors.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <sstream>

namespace stochmech {

namespace {

void require_positive(const char* field, double value)
{
    if (!(value > 0.0) || !std::isfinite(value))
        throw DomainError(field, "must be strictly positive and finite, got " + std::to_string(value));
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw DomainError(key, "not a number: '" + value + "'");
    }
}

}  // namespace

PhysicalParams PhysicalParams::natural()
{
    return derive_params(0.5, 1.0, 1.0, Mode::quantum);
}

PhysicalParams derive_params(double mass, double omega, double action, Mode mode)
{
    PhysicalParams p;
    if (mode == Mode::quantum)
        require_positive("m", mass);
    require_positive("omega", omega);
    require_positive(mode == Mode::quantum ? "hbar" : "emittance", action);

    p.mode = mode;
    p.omega = omega;
    p.action = action;
    p.mass = mode == Mode::quantum ? mass : 1.0;
    p.diffusion = action / (2.0 * p.mass);
    p.sigma0 = std::sqrt(p.diffusion / omega);
    return p;
}

Mode parse_mode(const std::string& s)
{
    if (s == "quantum")
        return Mode::quantum;
    if (s == "beam")
        return Mode::beam;
    throw DomainError("mode", "expected 'quantum' or 'beam', got '" + s + "'");
}

std::string to_string(Mode m)
{
    return m == Mode::quantum ? "quantum" : "beam";
}

PhysicalParams parse_params(std::istream& in)
{
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError(line, "expected 'key = value'");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    const Mode mode = kv.count("mode") ? parse_mode(kv.at("mode")) : Mode::quantum;
    const bool has_hbar = kv.count("hbar") != 0;
    const bool has_eps = kv.count("emittance") != 0;
    if (has_hbar && has_eps)
        throw DomainError("hbar", "give either hbar or emittance, not both");
    if (mode == Mode::quantum && has_eps)
        throw DomainError("emittance", "only valid with mode = beam");
    if (mode == Mode::beam && has_hbar)
        throw DomainError("hbar", "beam mode takes emittance");
    for (const auto& [key, value] : kv) {
        if (key != "m" && key != "omega" && key != "hbar" && key != "emittance" && key != "mode")
            throw DomainError(key, "unknown parameter key");
    }

    const double m = kv.count("m") ? parse_number("m", kv.at("m")) : 1.0;
    const double omega = kv.count("omega") ? parse_number("omega", kv.at("omega")) : 1.0;
    double action = 1.0;
    if (has_hbar)
        action = parse_number("hbar", kv.at("hbar"));
    if (has_eps)
        action = parse_number("emittance", kv.at("emittance"));
    return derive_params(m, omega, action, mode);
}

PhysicalParams parse_params_text(const std::string& text)
{
    std::istringstream in(text);
    return parse_params(in);
}

std::string format_params(const PhysicalParams& p)
{
    std::ostringstream out;
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "mode = " << to_string(p.mode) << '\n';
    if (p.mode == Mode::quantum)
        out << "m = " << p.mass << '\n';
    out << "omega = " << p.omega << '\n';
    out << (p.mode == Mode::quantum ? "hbar = " : "emittance = ") << p.action << '\n';
    return out.str();
}

}  // namespace stochmech
