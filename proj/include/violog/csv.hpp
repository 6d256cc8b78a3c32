#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "violog/common.hpp"

namespace violog {

// RFC-4180 style CSV: quoted fields may contain commas, doubled quotes and
// newlines; both LF and CRLF records are accepted.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    // Reads one record. Returns false at end of input. `line` receives the
    // 1-based line number the record started on.
    bool next(std::vector<std::string>& fields, std::size_t& line) {
        fields.clear();
        int c = in_.get();
        while (c == '\n') { // skip blank lines
            ++line_;
            c = in_.get();
        }
        if (c == EOF) return false;
        line = line_ + 1;
        std::string field;
        bool quoted = false;
        while (true) {
            if (c == EOF) {
                fields.push_back(std::move(field));
                ++line_;
                return true;
            }
            char ch = static_cast<char>(c);
            if (quoted) {
                if (ch == '"') {
                    int peek = in_.get();
                    if (peek == '"') {
                        field.push_back('"');
                    } else {
                        quoted = false;
                        if (peek == EOF) continue;
                        in_.unget();
                    }
                } else {
                    if (ch == '\n') ++line_;
                    field.push_back(ch);
                }
            } else if (ch == '"' && field.empty()) {
                quoted = true;
            } else if (ch == ',') {
                fields.push_back(std::move(field));
                field.clear();
            } else if (ch == '\n') {
                if (!field.empty() && field.back() == '\r') field.pop_back();
                fields.push_back(std::move(field));
                ++line_;
                return true;
            } else {
                field.push_back(ch);
            }
            c = in_.get();
        }
    }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

inline std::string csv_escape(std::string_view field) {
    bool needs_quotes = field.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(fields[i]);
    }
    out << '\n';
}

// Header lookup with case-folded column names.
class CsvHeader {
public:
    explicit CsvHeader(const std::vector<std::string>& header) {
        for (std::size_t i = 0; i < header.size(); ++i)
            index_.emplace(fold_key(header[i]), i);
    }

    std::optional<std::size_t> find(std::string_view name) const {
        auto it = index_.find(fold_key(name));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::map<std::string, std::size_t> index_;
};

} // namespace violog
