#pragma once

#include "varlex/geometry.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace varlex {

// Canonical decimal rendering for every report writer: 17 significant digits,
// so round-trips are exact and output bytes are reproducible.
std::string format_number(double v);
std::string format_integer(int64_t v);

// A report is an ordered summary (key/value pairs) plus a rectangular table
// with a fixed column order. All values are rendered before insertion, so
// CSV and JSON writers emit identical bytes for identical inputs.
class Report {
public:
    Report(std::string kind, std::vector<std::string> columns);

    void summary(const std::string& key, const std::string& value);
    void summary(const std::string& key, double value);
    void summary(const std::string& key, int64_t value);
    void summary_flag(const std::string& key, bool value);

    void add_row(std::vector<std::string> cells);

    const std::string& kind() const { return kind_; }
    const std::vector<std::string>& columns() const { return columns_; }
    size_t row_count() const { return rows_.size(); }

    void write_csv(std::ostream& out) const;
    void write_json(std::ostream& out) const;

    // Writes `<directory>/<name>.<ext>` for format "csv" or "json".
    std::string write_file(const std::string& directory, const std::string& name,
                           const std::string& format) const;

private:
    std::string kind_;
    std::vector<std::string> columns_;
    std::vector<std::pair<std::string, std::string>> summary_;
    std::vector<std::vector<std::string>> rows_;
};

// Grid-function exchange format: a small key,value header followed by one
// value per line in flat-index order.
void write_grid_function(const std::string& path, const GridFunction& f);
GridFunction read_grid_function(const std::string& path);

std::string json_escape(const std::string& s);

} // namespace varlex
