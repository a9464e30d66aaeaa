#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace varlex {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key-table configuration: [section] headers, key = value lines,
// '#'/';' comments. Values are strings until a typed getter parses them;
// lists are comma-separated.
class Config {
public:
    Config() = default;

    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const;

    // Getters with defaults; the `require_` forms throw ConfigError naming
    // section.key when the entry is missing or malformed.
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int64_t get_int(const std::string& section, const std::string& key, int64_t fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                    const std::vector<double>& fallback) const;

    std::string require_string(const std::string& section, const std::string& key) const;
    double require_double(const std::string& section, const std::string& key) const;
    int64_t require_int(const std::string& section, const std::string& key) const;
    std::vector<double> require_doubles(const std::string& section, const std::string& key) const;

    // All keys of a section in file order (empty if absent).
    std::vector<std::string> keys(const std::string& section) const;

    void set(const std::string& section, const std::string& key, const std::string& value);

private:
    const std::string* find(const std::string& section, const std::string& key) const;
    [[noreturn]] void missing(const std::string& section, const std::string& key) const;

    struct Entry {
        std::string key;
        std::string value;
    };
    std::map<std::string, std::vector<Entry>> sections_;
    std::string origin_ = "<empty>";
};

double parse_double(const std::string& text, const std::string& what);
int64_t parse_int(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);
std::vector<double> parse_doubles(const std::string& text, const std::string& what);

} // namespace varlex
