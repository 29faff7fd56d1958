#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ringlens::csv {

/// Minimal CSV builder: comma separators, '\n' line endings, mandatory
/// header. Doubles are serialized with 17 significant digits so values
/// round-trip bit-exactly through the text.
class Table {
  public:
    explicit Table(std::vector<std::string> columns);

    void begin_row();
    void add(double value);
    void add(const std::string& value);
    void add_flag(bool value);  // 0 / 1

    const std::string& body() const { return body_; }
    std::string text() const;  // header + body

    /// Write-temp-then-rename so readers never see a partial file.
    void write(const std::filesystem::path& path) const;

  private:
    std::size_t n_columns_;
    std::size_t row_fill_ = 0;
    bool in_row_ = false;
    std::string body_;
    std::string header_;
};

std::string format_double(double value);  // %.17g

/// Atomic text-file write used for every artifact the tools emit.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

struct ParsedCsv {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column_index(const std::string& name) const;  // -1 when absent
    /// Typed view of one column; non-numeric cells become NaN.
    std::vector<double> numeric_column(const std::string& name) const;
};

ParsedCsv read_csv(const std::filesystem::path& path);
ParsedCsv parse_csv(const std::string& text);

}  // namespace ringlens::csv
