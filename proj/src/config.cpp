#include "varlex/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace varlex {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '#' || line[i] == ';') return line.substr(0, i);
    }
    return line;
}

} // namespace

double parse_double(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    if (t == "-inf") return -std::numeric_limits<double>::infinity();
    double value = 0.0;
    const char* begin = t.data();
    const char* end = begin + t.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(what + ": expected a number, got '" + t + "'");
    }
    return value;
}

int64_t parse_int(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    int64_t value = 0;
    const char* begin = t.data();
    const char* end = begin + t.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(what + ": expected an integer, got '" + t + "'");
    }
    return value;
}

bool parse_bool(const std::string& text, const std::string& what) {
    std::string t = trim(text);
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError(what + ": expected a boolean, got '" + text + "'");
}

std::vector<double> parse_doubles(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = trim(item);
        if (t.empty()) throw ConfigError(what + ": empty list element");
        out.push_back(parse_double(t, what));
    }
    if (out.empty()) throw ConfigError(what + ": expected a comma-separated list of numbers");
    return out;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::stringstream ss(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']' || body.size() < 3) {
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": malformed section header '" + body + "'");
            }
            section = trim(body.substr(1, body.size() - 2));
            if (section.empty()) {
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
            }
            cfg.sections_.try_emplace(section);
            continue;
        }
        const size_t eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + body + "'");
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        }
        if (section.empty()) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": key '" + key +
                              "' appears before any [section] header");
        }
        auto& entries = cfg.sections_[section];
        const bool duplicate = std::any_of(entries.begin(), entries.end(),
                                           [&](const Entry& e) { return e.key == key; });
        if (duplicate) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                              section + "." + key + "'");
        }
        entries.push_back({key, value});
    }
    return cfg;
}

const std::string* Config::find(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    if (it == sections_.end()) return nullptr;
    for (const Entry& e : it->second) {
        if (e.key == key) return &e.value;
    }
    return nullptr;
}

void Config::missing(const std::string& section, const std::string& key) const {
    throw ConfigError(origin_ + ": missing required key '" + section + "." + key + "'");
}

bool Config::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

bool Config::has_section(const std::string& section) const {
    return sections_.count(section) > 0;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    const std::string* v = find(section, key);
    return v ? *v : fallback;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    const std::string* v = find(section, key);
    return v ? parse_double(*v, origin_ + ": " + section + "." + key) : fallback;
}

int64_t Config::get_int(const std::string& section, const std::string& key,
                        int64_t fallback) const {
    const std::string* v = find(section, key);
    return v ? parse_int(*v, origin_ + ": " + section + "." + key) : fallback;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    const std::string* v = find(section, key);
    return v ? parse_bool(*v, origin_ + ": " + section + "." + key) : fallback;
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) const {
    const std::string* v = find(section, key);
    return v ? parse_doubles(*v, origin_ + ": " + section + "." + key) : fallback;
}

std::string Config::require_string(const std::string& section, const std::string& key) const {
    const std::string* v = find(section, key);
    if (!v) missing(section, key);
    return *v;
}

double Config::require_double(const std::string& section, const std::string& key) const {
    const std::string* v = find(section, key);
    if (!v) missing(section, key);
    return parse_double(*v, origin_ + ": " + section + "." + key);
}

int64_t Config::require_int(const std::string& section, const std::string& key) const {
    const std::string* v = find(section, key);
    if (!v) missing(section, key);
    return parse_int(*v, origin_ + ": " + section + "." + key);
}

std::vector<double> Config::require_doubles(const std::string& section,
                                            const std::string& key) const {
    const std::string* v = find(section, key);
    if (!v) missing(section, key);
    return parse_doubles(*v, origin_ + ": " + section + "." + key);
}

std::vector<std::string> Config::keys(const std::string& section) const {
    std::vector<std::string> out;
    auto it = sections_.find(section);
    if (it == sections_.end()) return out;
    out.reserve(it->second.size());
    for (const Entry& e : it->second) out.push_back(e.key);
    return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    auto& entries = sections_[section];
    for (Entry& e : entries) {
        if (e.key == key) {
            e.value = value;
            return;
        }
    }
    entries.push_back({key, value});
}

} // namespace varlex
