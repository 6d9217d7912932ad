#include "fuzzytori/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ft {

Table::Table(std::string title, std::vector<std::pair<std::string, std::string>> columns)
    : title_(std::move(title)), columns_(std::move(columns)) {
    if (columns_.empty()) throw std::invalid_argument("Table: no columns");
}

void Table::add_note(std::string line) { notes_.push_back(std::move(line)); }

Table& Table::row() {
    if (!cells_.empty() && cells_.back().size() != columns_.size())
        throw std::logic_error("Table: previous row of " + title_ + " is incomplete");
    cells_.emplace_back();
    return *this;
}

Table& Table::add(const std::string& v) {
    if (cells_.empty()) throw std::logic_error("Table: add before row");
    if (cells_.back().size() == columns_.size()) throw std::logic_error("Table: row of " + title_ + " is full");
    if (v.find_first_of(",\n\"") != std::string::npos) {
        std::string q = "\"";
        for (char c : v) {
            if (c == '"') q += '"';
            q += c;
        }
        cells_.back().push_back(q + "\"");
    } else {
        cells_.back().push_back(v);
    }
    return *this;
}

Table& Table::add(double v) { return add(format_double(v)); }
Table& Table::add(std::int64_t v) { return add(std::to_string(v)); }
Table& Table::add(std::uint64_t v) { return add(std::to_string(v)); }

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].first == name) return i;
    throw std::out_of_range("Table " + title_ + ": no column " + name);
}

double Table::number(std::size_t r, const std::string& name) const {
    const auto& s = cell(r, column(name));
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan" || s.empty()) return std::numeric_limits<double>::quiet_NaN();
    return std::stod(s);
}

void Table::write_csv(std::ostream& os) const {
    if (!cells_.empty() && cells_.back().size() != columns_.size())
        throw std::logic_error("Table: last row of " + title_ + " is incomplete");
    os << "# " << title_ << '\n';
    for (const auto& n : notes_) os << "# " << n << '\n';
    os << "# columns:\n";
    for (const auto& [name, doc] : columns_) os << "#   " << name << ": " << doc << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i].first;
    os << '\n';
    for (const auto& r : cells_) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << '\n';
    }
}

std::string Table::csv() const {
    std::ostringstream os;
    write_csv(os);
    return os.str();
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string esc(const std::string& s) {
    std::string o;
    for (char c : s) {
        switch (c) {
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            case '&': o += "&amp;"; break;
            default: o += c;
        }
    }
    return o;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

std::string svg_line_plot(const Table& t, const std::string& x_column, const std::vector<PlotSeries>& series,
                          const std::string& title, bool log_y) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    const double W = 640, H = 400, L = 70, R = 160, T = 40, B = 50;
    struct Pt {
        double x, y;
    };
    std::vector<std::vector<Pt>> pts(series.size());
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (std::size_t s = 0; s < series.size(); ++s)
        for (std::size_t r = 0; r < t.rows(); ++r) {
            const double x = t.number(r, x_column);
            double y = t.number(r, series[s].y_column);
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (log_y) {
                if (y <= 0.0) continue;
                y = std::log10(y);
            }
            pts[s].push_back({x, y});
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto X = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto Y = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << esc(title) << "</text>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
        os << "<text x=\"" << num(X(xv)) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << tick(xv) << "</text>\n";
        os << "<text x=\"" << L - 6 << "\" y=\"" << num(Y(yv) + 4) << "\" text-anchor=\"end\">"
           << (log_y ? "1e" + tick(yv) : tick(yv)) << "</text>\n";
    }
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << esc(x_column) << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* c = colors[s % 6];
        if (!pts[s].empty()) {
            os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\" points=\"";
            for (const auto& p : pts[s]) os << num(X(p.x)) << "," << num(Y(p.y)) << " ";
            os << "\"/>\n";
            for (const auto& p : pts[s])
                os << "<circle cx=\"" << num(X(p.x)) << "\" cy=\"" << num(Y(p.y)) << "\" r=\"3\" fill=\"" << c << "\"/>\n";
        }
        const double ly = T + 16.0 * static_cast<double>(s);
        os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly
           << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << W - R + 36 << "\" y=\"" << ly + 4 << "\">" << esc(series[s].label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace ft
