#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ft {

// CSV table whose header comment block documents every column.
class Table {
public:
    Table(std::string title, std::vector<std::pair<std::string, std::string>> columns);

    void add_note(std::string line);  // extra '#' line before the column docs
    Table& row();                     // start a new row
    Table& add(const std::string& v);
    Table& add(const char* v) { return add(std::string(v)); }
    Table& add(double v);
    Table& add(std::int64_t v);
    Table& add(std::uint64_t v);
    Table& add(int v) { return add(static_cast<std::int64_t>(v)); }
    Table& add(bool v) { return add(std::string(v ? "true" : "false")); }

    const std::string& title() const { return title_; }
    std::size_t rows() const { return cells_.size(); }
    std::size_t column(const std::string& name) const;  // throws std::out_of_range
    const std::string& cell(std::size_t r, std::size_t c) const { return cells_.at(r).at(c); }
    double number(std::size_t r, const std::string& name) const;

    void write_csv(std::ostream& os) const;
    std::string csv() const;

private:
    std::string title_;
    std::vector<std::pair<std::string, std::string>> columns_;
    std::vector<std::string> notes_;
    std::vector<std::vector<std::string>> cells_;
};

// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double v);

struct PlotSeries {
    std::string label;
    std::string y_column;
};

// Line plot of y columns against an x column. Non-finite points are skipped.
// With log_y the axis is log10 and nonpositive values are skipped.
std::string svg_line_plot(const Table& t, const std::string& x_column, const std::vector<PlotSeries>& series,
                          const std::string& title, bool log_y = false);

}  // namespace ft
