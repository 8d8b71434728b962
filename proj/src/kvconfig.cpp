#include "tgs/kvconfig.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tgs/error.hpp"

namespace tgs {

namespace {

std::string_view trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::pair<std::string, std::string> parse_assignment(std::string_view text) {
    auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key=value, got '" + std::string(text) + "'");
    auto key = trim(text.substr(0, eq));
    if (key.empty()) throw ConfigError("empty key in '" + std::string(text) + "'");
    return {std::string(key), std::string(trim(text.substr(eq + 1)))};
}

KeyValues parse_key_values(std::string_view text) {
    KeyValues kv;
    std::size_t line_no = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        auto line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        try {
            auto [k, v] = parse_assignment(line);
            kv[k] = v;
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return kv;
}

KeyValues load_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_key_values(ss.str());
}

double parse_double(const std::string& key, const std::string& value) {
    // Accept simple fractions such as 1/8.
    auto slash = value.find('/');
    if (slash != std::string::npos) {
        const double q = parse_double(key, value.substr(0, slash)) / parse_double(key, value.substr(slash + 1));
        if (!std::isfinite(q)) throw ConfigError("'" + key + "': not a number: '" + value + "'");
        return q;
    }
    std::size_t used = 0;
    double d = 0.0;
    try {
        d = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "': not a number: '" + value + "'");
    }
    if (used != value.size() || !std::isfinite(d)) throw ConfigError("'" + key + "': not a number: '" + value + "'");
    return d;
}

long long parse_int(const std::string& key, const std::string& value) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError("'" + key + "': not an integer: '" + value + "'");
    return v;
}

}  // namespace tgs
