#ifndef SETBRANCH_RECORDS_HPP
#define SETBRANCH_RECORDS_HPP

#include <array>
#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "setbranch/errors.hpp"
#include "setbranch/search.hpp"

namespace setbranch {

struct RunRecord {
    std::string instance;
    std::string scheme;
    Status status = Status::Unsat;
    std::uint64_t nodes = 0;
    std::uint64_t decisions = 0;
    std::uint64_t wipeouts = 0;
    double elapsed_ms = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

inline constexpr std::array<std::string_view, 8> kCsvColumns{
    "instance", "scheme", "status", "nodes", "decisions", "wipeouts", "elapsed_ms", "seed"};

namespace detail {

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// Shortest text that reads back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

template <class T>
T parse_number(const std::string& s, std::size_t line, std::string_view column) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw Error("results line " + std::to_string(line) + ": bad " + std::string(column) + " '" + s + "'");
    return v;
}

// Reads one RFC 4180 record. Returns false at end of input.
inline bool read_csv_row(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
    fields.clear();
    if (in.peek() == std::char_traits<char>::eof()) return false;
    ++line;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (;;) {
        const int ch = in.get();
        if (ch == std::char_traits<char>::eof()) {
            if (quoted) throw Error("results line " + std::to_string(line) + ": unterminated quote");
            fields.push_back(std::move(field));
            return true;
        }
        const char c = static_cast<char>(ch);
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"' && field.empty() && !was_quoted) {
            quoted = was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else if (c == '\n') {
            fields.push_back(std::move(field));
            return true;
        } else if (c == '\r' && in.peek() == '\n') {
            // tolerate CRLF on input
        } else {
            field += c;
        }
    }
}

}  // namespace detail

inline void write_csv_header(std::ostream& out) {
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i) out << (i ? "," : "") << kCsvColumns[i];
    out << '\n';
}

inline void write_csv_row(std::ostream& out, const RunRecord& r) {
    out << detail::csv_field(r.instance) << ',' << detail::csv_field(r.scheme) << ',' << status_name(r.status) << ','
        << r.nodes << ',' << r.decisions << ',' << r.wipeouts << ',' << detail::format_double(r.elapsed_ms) << ','
        << r.seed << '\n';
}

inline void write_csv(std::ostream& out, const std::vector<RunRecord>& records) {
    write_csv_header(out);
    for (const auto& r : records) write_csv_row(out, r);
}

inline std::vector<RunRecord> read_csv(std::istream& in) {
    std::vector<std::string> f;
    std::size_t line = 0;
    if (!detail::read_csv_row(in, f, line)) throw Error("results file is empty");
    if (f.size() != kCsvColumns.size()) throw Error("results header has wrong column count");
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] != kCsvColumns[i]) throw Error("results header: expected '" + std::string(kCsvColumns[i]) + "'");
    std::vector<RunRecord> out;
    while (detail::read_csv_row(in, f, line)) {
        if (f.size() == 1 && f[0].empty()) continue;
        if (f.size() != kCsvColumns.size())
            throw Error("results line " + std::to_string(line) + ": expected 8 fields");
        RunRecord r;
        r.instance = f[0];
        r.scheme = f[1];
        const auto st = parse_status(f[2]);
        if (!st) throw Error("results line " + std::to_string(line) + ": bad status '" + f[2] + "'");
        r.status = *st;
        r.nodes = detail::parse_number<std::uint64_t>(f[3], line, "nodes");
        r.decisions = detail::parse_number<std::uint64_t>(f[4], line, "decisions");
        r.wipeouts = detail::parse_number<std::uint64_t>(f[5], line, "wipeouts");
        r.elapsed_ms = detail::parse_number<double>(f[6], line, "elapsed_ms");
        r.seed = detail::parse_number<std::uint64_t>(f[7], line, "seed");
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace setbranch

#endif
