#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace gewi {

// RFC-4180 style CSV assembly. Numeric formatting is locale-independent and
// fixed-width enough that identical inputs serialize to identical bytes.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    CsvWriter& field(const std::string& s);
    CsvWriter& field(const char* s) { return field(std::string(s)); }
    CsvWriter& field(double v);
    CsvWriter& field(std::int64_t v);
    CsvWriter& field(std::uint64_t v);
    CsvWriter& field(int v) { return field(static_cast<std::int64_t>(v)); }
    CsvWriter& field(bool v) { return field(std::string(v ? "true" : "false")); }
    void end_row();

    const std::string& header_line() const { return header_line_; }
    std::string str() const;
    void write_file(const std::string& path) const;

private:
    std::string header_line_;
    std::size_t columns_ = 0;
    std::size_t current_ = 0;
    std::ostringstream body_;
};

std::string csv_escape(const std::string& s);
std::string format_double(double v);

} // namespace gewi
