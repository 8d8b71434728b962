#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace tgs {

// Flat `key = value` settings. Blank lines and lines starting with '#' are
// ignored; keys are case-sensitive.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::string_view text);
KeyValues load_key_values(const std::filesystem::path& path);

// Splits "key=value"; throws ConfigError when there is no '='.
std::pair<std::string, std::string> parse_assignment(std::string_view text);

double parse_double(const std::string& key, const std::string& value);
long long parse_int(const std::string& key, const std::string& value);

}  // namespace tgs
