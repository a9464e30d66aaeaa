#include "varlex/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace varlex {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_integer(int64_t v) {
    return std::to_string(v);
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c; break;
        }
    }
    return out;
}

Report::Report(std::string kind, std::vector<std::string> columns)
    : kind_(std::move(kind)), columns_(std::move(columns)) {}

void Report::summary(const std::string& key, const std::string& value) {
    summary_.emplace_back(key, value);
}

void Report::summary(const std::string& key, double value) {
    summary_.emplace_back(key, format_number(value));
}

void Report::summary(const std::string& key, int64_t value) {
    summary_.emplace_back(key, format_integer(value));
}

void Report::summary_flag(const std::string& key, bool value) {
    summary_.emplace_back(key, value ? "true" : "false");
}

void Report::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size()) {
        throw std::invalid_argument("Report::add_row: cell count does not match column count");
    }
    rows_.push_back(std::move(cells));
}

void Report::write_csv(std::ostream& out) const {
    out << "# report = " << kind_ << "\n";
    for (const auto& [key, value] : summary_) {
        out << "# " << key << " = " << value << "\n";
    }
    for (size_t c = 0; c < columns_.size(); ++c) {
        if (c) out << ",";
        out << columns_[c];
    }
    out << "\n";
    for (const auto& row : rows_) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out << ",";
            out << row[c];
        }
        out << "\n";
    }
}

namespace {

// Summary values are rendered strings; re-emit numbers and booleans as JSON
// scalars so consumers do not need to unquote them.
bool looks_like_scalar(const std::string& v) {
    if (v == "true" || v == "false") return true;
    if (v.empty()) return false;
    char* end = nullptr;
    std::strtod(v.c_str(), &end);
    return end == v.c_str() + v.size();
}

void write_json_value(std::ostream& out, const std::string& v) {
    if (looks_like_scalar(v) && v != "inf" && v != "-inf" && v != "nan") {
        out << v;
    } else {
        out << '"' << json_escape(v) << '"';
    }
}

} // namespace

void Report::write_json(std::ostream& out) const {
    out << "{\n  \"report\": \"" << json_escape(kind_) << "\",\n  \"summary\": {";
    for (size_t i = 0; i < summary_.size(); ++i) {
        out << (i ? ",\n    " : "\n    ");
        out << '"' << json_escape(summary_[i].first) << "\": ";
        write_json_value(out, summary_[i].second);
    }
    out << (summary_.empty() ? "},\n" : "\n  },\n");
    out << "  \"rows\": [";
    for (size_t r = 0; r < rows_.size(); ++r) {
        out << (r ? ",\n    {" : "\n    {");
        for (size_t c = 0; c < columns_.size(); ++c) {
            out << (c ? ", " : "");
            out << '"' << json_escape(columns_[c]) << "\": ";
            write_json_value(out, rows_[r][c]);
        }
        out << "}";
    }
    out << (rows_.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

std::string Report::write_file(const std::string& directory, const std::string& name,
                               const std::string& format) const {
    if (format != "csv" && format != "json") {
        throw std::invalid_argument("Report::write_file: format must be csv or json");
    }
    const std::string path = directory + "/" + name + "." + format;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("Report::write_file: cannot open '" + path + "'");
    if (format == "csv") {
        write_csv(out);
    } else {
        write_json(out);
    }
    return path;
}

void write_grid_function(const std::string& path, const GridFunction& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_grid_function: cannot open '" + path + "'");
    const Grid& g = f.grid;
    out << "dim," << g.box.dim << "\n";
    out << "depth," << g.depth << "\n";
    out << "center," << format_number(g.box.center[0]) << "," << format_number(g.box.center[1])
        << "\n";
    out << "half_width," << format_number(g.box.half_width) << "\n";
    out << "values," << f.values.size() << "\n";
    for (double v : f.values) out << format_number(v) << "\n";
}

namespace {

double parse_number_field(const std::string& text, const std::string& path) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str()) {
        throw std::runtime_error("read_grid_function: expected a number, got '" + text +
                                 "' in '" + path + "'");
    }
    return v;
}

} // namespace

GridFunction read_grid_function(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_grid_function: cannot open '" + path + "'");
    auto next_line = [&](const std::string& expect) {
        std::string line;
        if (!std::getline(in, line)) {
            throw std::runtime_error("read_grid_function: truncated file '" + path + "'");
        }
        if (line.rfind(expect + ",", 0) != 0) {
            throw std::runtime_error("read_grid_function: expected '" + expect + ",...' in '" +
                                     path + "'");
        }
        return line.substr(expect.size() + 1);
    };
    Box box;
    box.dim = static_cast<int>(parse_number_field(next_line("dim"), path));
    const int depth = static_cast<int>(parse_number_field(next_line("depth"), path));
    {
        const std::string centers = next_line("center");
        std::stringstream ss(centers);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) {
            throw std::runtime_error("read_grid_function: malformed center line in '" + path +
                                     "'");
        }
        box.center = {parse_number_field(a, path), parse_number_field(b, path)};
    }
    box.half_width = parse_number_field(next_line("half_width"), path);
    const size_t count = static_cast<size_t>(parse_number_field(next_line("values"), path));
    Grid grid{box, depth};
    GridFunction f(grid);
    if (f.values.size() != count) {
        throw std::runtime_error("read_grid_function: value count does not match grid in '" +
                                 path + "'");
    }
    for (size_t i = 0; i < count; ++i) {
        std::string line;
        if (!std::getline(in, line)) {
            throw std::runtime_error("read_grid_function: truncated values in '" + path + "'");
        }
        f.values[i] = parse_number_field(line, path);
    }
    return f;
}

} // namespace varlex
