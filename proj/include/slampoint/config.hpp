#pragma once

// Plain-text key=value run configuration with CLI-flag overrides.
// Flags win over file values; the config hash covers the merged view.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace slampoint::config {

struct BadConfig : std::runtime_error {
    explicit BadConfig(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;  // throws BadConfig
    long get_int(const std::string& key, long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;

    void set(const std::string& key, const std::string& value) { values[key] = value; }

    // FNV-1a over the sorted key=value view; stable across reruns.
    std::uint64_t hash() const;
};

// Parses `key=value` lines; '#' comments and blank lines are ignored.
// Later duplicates win. Throws BadConfig on a line without '='.
RunConfig load_config(const std::string& path);

RunConfig parse_config_text(const std::string& text, const std::string& origin = "<inline>");

}  // namespace slampoint::config
