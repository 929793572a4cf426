#include "gewi/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace gewi {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    std::string line;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) line += ',';
        line += csv_escape(header[i]);
    }
    header_line_ = line;
}

CsvWriter& CsvWriter::field(const std::string& s) {
    if (current_) body_ << ',';
    body_ << csv_escape(s);
    ++current_;
    return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(format_double(v)); }

CsvWriter& CsvWriter::field(std::int64_t v) { return field(std::to_string(v)); }

CsvWriter& CsvWriter::field(std::uint64_t v) { return field(std::to_string(v)); }

void CsvWriter::end_row() {
    if (current_ != columns_)
        throw std::logic_error("CsvWriter: row has " + std::to_string(current_) +
                               " fields, header has " + std::to_string(columns_));
    body_ << '\n';
    current_ = 0;
}

std::string CsvWriter::str() const { return header_line_ + "\n" + body_.str(); }

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << str();
}

} // namespace gewi
