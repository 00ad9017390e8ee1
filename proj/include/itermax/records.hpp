#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace itermax {

// Flat output record: ordered named fields, values already rendered.
// Integers print in full decimal (never scientific), reals with 12
// significant digits, so records are byte-stable and diffable.
struct Record {
    std::vector<std::pair<std::string, std::string>> fields;
    std::vector<std::string> quoted; // names of fields that are strings/lists

    void add_int(const std::string& name, std::int64_t v);
    void add_uint(const std::string& name, std::uint64_t v);
    void add_real(const std::string& name, double v);
    void add_str(const std::string& name, const std::string& v);
    void add_uint_list(const std::string& name, const std::vector<std::uint64_t>& v);
    bool is_quoted(const std::string& name) const;
};

std::string to_json_line(const Record& r);
std::string to_csv_header(const Record& r);
std::string to_csv_row(const Record& r);

// Round-trip parsers (field name -> raw value text, unescaped).
std::map<std::string, std::string> parse_json_line(const std::string& line);
std::map<std::string, std::string> parse_csv_row(const std::string& header,
                                                 const std::string& row);

std::string format_real(double v); // %.12g

} // namespace itermax
