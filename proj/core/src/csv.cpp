#include "ringlens/csv.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ringlens::csv {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

Table::Table(std::vector<std::string> columns) : n_columns_(columns.size()) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) header_ += ',';
        header_ += columns[i];
    }
    header_ += '\n';
}

void Table::begin_row() {
    if (in_row_ && row_fill_ != n_columns_)
        throw std::logic_error("csv row incomplete");
    in_row_ = true;
    row_fill_ = 0;
}

void Table::add(const std::string& value) {
    if (!in_row_) begin_row();
    if (row_fill_) body_ += ',';
    body_ += value;
    if (++row_fill_ == n_columns_) {
        body_ += '\n';
        in_row_ = false;
    }
}

void Table::add(double value) { add(format_double(value)); }

void Table::add_flag(bool value) { add(std::string(value ? "1" : "0")); }

std::string Table::text() const { return header_ + body_; }

void Table::write(const std::filesystem::path& path) const {
    write_text_atomic(path, text());
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

static std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    cells.push_back(cur);
    return cells;
}

ParsedCsv parse_csv(const std::string& text) {
    ParsedCsv out;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (first) {
            out.columns = std::move(cells);
            first = false;
        } else {
            out.rows.push_back(std::move(cells));
        }
    }
    return out;
}

ParsedCsv read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

int ParsedCsv::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

std::vector<double> ParsedCsv::numeric_column(const std::string& name) const {
    const int idx = column_index(name);
    if (idx < 0) throw std::runtime_error("csv column not found: " + name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        double v = std::numeric_limits<double>::quiet_NaN();
        if (static_cast<std::size_t>(idx) < row.size()) {
            try {
                v = std::stod(row[idx]);
            } catch (...) {
            }
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace ringlens::csv
