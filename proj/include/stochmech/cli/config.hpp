#pragma once

#include "stochmech/core/params.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace stochmech::cli {

/// Bad configuration; `key()` names the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error("config key '" + key + "': " + what), key_(std::move(key))
    {
    }
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

/// One run: the physical inputs, the command and its options, all as flat
/// `key = value` text. Options are kept verbatim so the text form round-trips.
struct ScenarioConfig {
    std::string command;  ///< spectrum | evolve | kernel | control | simulate | compare
    double mass = 0.5;
    double omega = 1.0;
    double action = 1.0;
    Mode mode = Mode::quantum;
    std::map<std::string, std::string> options;
    std::string out_dir = "run";
    std::uint64_t seed = 1;

    PhysicalParams params() const;

    bool has(const std::string& key) const { return options.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

    void set(const std::string& key, const std::string& value) { options[key] = value; }

    bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig parse_config(std::istream& in);
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Canonical text: fixed header keys, then options sorted by key.
std::string to_text(const ScenarioConfig& c);

/// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string config_hash(const ScenarioConfig& c);

/// Option keys each command understands.
const std::vector<std::string>& known_options(const std::string& command);

/// Throws ConfigError for an unknown command or option key.
void validate(const ScenarioConfig& c);

std::string format_double(double x);

}  // namespace stochmech::cli
