#include "itermax/records.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace itermax {

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void Record::add_int(const std::string& name, std::int64_t v) {
    fields.emplace_back(name, std::to_string(v));
}

void Record::add_uint(const std::string& name, std::uint64_t v) {
    fields.emplace_back(name, std::to_string(v));
}

void Record::add_real(const std::string& name, double v) {
    fields.emplace_back(name, format_real(v));
}

void Record::add_str(const std::string& name, const std::string& v) {
    fields.emplace_back(name, v);
    quoted.push_back(name);
}

void Record::add_uint_list(const std::string& name, const std::vector<std::uint64_t>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    s += ']';
    fields.emplace_back(name, s);
}

bool Record::is_quoted(const std::string& name) const {
    return std::find(quoted.begin(), quoted.end(), name) != quoted.end();
}

static std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

std::string to_json_line(const Record& r) {
    std::string out = "{";
    for (std::size_t i = 0; i < r.fields.size(); ++i) {
        if (i) out += ',';
        out += '"';
        out += json_escape(r.fields[i].first);
        out += "\":";
        if (r.is_quoted(r.fields[i].first)) {
            out += '"';
            out += json_escape(r.fields[i].second);
            out += '"';
        } else {
            out += r.fields[i].second;
        }
    }
    out += '}';
    return out;
}

static std::string csv_escape(const std::string& s) {
    bool needs = s.find_first_of(",\"\n") != std::string::npos;
    if (!needs) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string to_csv_header(const Record& r) {
    std::string out;
    for (std::size_t i = 0; i < r.fields.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(r.fields[i].first);
    }
    return out;
}

std::string to_csv_row(const Record& r) {
    std::string out;
    for (std::size_t i = 0; i < r.fields.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(r.fields[i].second);
    }
    return out;
}

// ---------------------------------------------------------------------
// Parsers for the round-trip property.
// ---------------------------------------------------------------------

static std::string json_unescape(const std::string& s, std::size_t& i, char stop) {
    std::string out;
    for (; i < s.size() && s[i] != stop; ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            ++i;
            switch (s[i]) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                default: out += s[i];
            }
        } else {
            out += s[i];
        }
    }
    return out;
}

std::map<std::string, std::string> parse_json_line(const std::string& line) {
    std::map<std::string, std::string> out;
    std::size_t i = 0;
    auto fail = [&]() { throw std::runtime_error("bad json record: " + line); };
    if (i >= line.size() || line[i] != '{') fail();
    ++i;
    while (i < line.size() && line[i] != '}') {
        if (line[i] == ',') ++i;
        if (line[i] != '"') fail();
        ++i;
        std::string key = json_unescape(line, i, '"');
        ++i; // closing quote
        if (i >= line.size() || line[i] != ':') fail();
        ++i;
        std::string value;
        if (line[i] == '"') {
            ++i;
            value = json_unescape(line, i, '"');
            ++i;
        } else if (line[i] == '[') {
            std::size_t depth = 0;
            for (; i < line.size(); ++i) {
                value += line[i];
                if (line[i] == '[') ++depth;
                if (line[i] == ']' && --depth == 0) { ++i; break; }
            }
        } else {
            while (i < line.size() && line[i] != ',' && line[i] != '}') value += line[i++];
        }
        out[key] = value;
    }
    return out;
}

static std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < s.size() && s[i + 1] == '"') { cur += '"'; ++i; }
                else in_quotes = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::map<std::string, std::string> parse_csv_row(const std::string& header,
                                                 const std::string& row) {
    auto names = split_csv(header);
    auto values = split_csv(row);
    if (names.size() != values.size())
        throw std::runtime_error("csv arity mismatch");
    std::map<std::string, std::string> out;
    for (std::size_t i = 0; i < names.size(); ++i) out[names[i]] = values[i];
    return out;
}

} // namespace itermax
