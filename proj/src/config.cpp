#include "slampoint/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "slampoint/common.hpp"

namespace slampoint::config {

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

std::string RunConfig::require(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw BadConfig("missing required config key '" + key + "'");
    return it->second;
}

long RunConfig::get_int(const std::string& key, long fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    char* end = nullptr;
    const long v = std::strtol(it->second.c_str(), &end, 10);
    if (end == it->second.c_str() || *end != '\0')
        throw BadConfig("config key '" + key + "' is not an integer: '" + it->second + "'");
    return v;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    char* end = nullptr;
    const double v = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0')
        throw BadConfig("config key '" + key + "' is not a number: '" + it->second + "'");
    return v;
}

std::uint64_t RunConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(it->second.c_str(), &end, 10);
    if (end == it->second.c_str() || *end != '\0')
        throw BadConfig("config key '" + key + "' is not an unsigned integer: '" + it->second +
                        "'");
    return static_cast<std::uint64_t>(v);
}

std::uint64_t RunConfig::hash() const {
    std::string view;
    for (const auto& [k, v] : values) view += k + "=" + v + "\n";  // std::map is sorted
    return fnv1a64(view);
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw BadConfig(origin + ":" + std::to_string(line_no) +
                            ": expected key=value, got '" + t + "'");
        cfg.values[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BadConfig("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

}  // namespace slampoint::config
