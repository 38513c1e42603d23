#pragma once

#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "revsent/csv.hpp"
#include "revsent/error.hpp"

// The subset of TOML used by pipeline configs: [section] and [a.b] headers,
// bare keys, and values that are strings, integers, floats, booleans or
// (possibly multi-line) arrays of those. Comments start with '#'.
namespace revsent::config {

struct Value;
using Array = std::vector<Value>;

struct Value {
    std::variant<bool, std::int64_t, double, std::string, Array> data;
};

class Table {
public:
    static Table parse(std::string_view text);

    static Table load(const std::string& path) {
        try {
            return parse(csv::read_file(path));
        } catch (const ConfigError& e) {
            throw ConfigError(path + ": " + e.what());
        }
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, std::string fallback = {}) const {
        const Value* v = find(key);
        if (!v) return fallback;
        if (auto s = std::get_if<std::string>(&v->data)) return *s;
        throw ConfigError("key '" + key + "' must be a string");
    }

    std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
        const Value* v = find(key);
        if (!v) return fallback;
        if (auto i = std::get_if<std::int64_t>(&v->data)) return *i;
        throw ConfigError("key '" + key + "' must be an integer");
    }

    /// Non-negative integer.
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const {
        const Value* v = find(key);
        if (!v) return fallback;
        if (auto i = std::get_if<std::int64_t>(&v->data)) {
            if (*i < 0) throw ConfigError("key '" + key + "' must be non-negative");
            return static_cast<std::uint64_t>(*i);
        }
        throw ConfigError("key '" + key + "' must be an integer");
    }

    double get_double(const std::string& key, double fallback) const {
        const Value* v = find(key);
        if (!v) return fallback;
        if (auto d = std::get_if<double>(&v->data)) return *d;
        if (auto i = std::get_if<std::int64_t>(&v->data)) return static_cast<double>(*i);
        throw ConfigError("key '" + key + "' must be a number");
    }

    bool get_bool(const std::string& key, bool fallback) const {
        const Value* v = find(key);
        if (!v) return fallback;
        if (auto b = std::get_if<bool>(&v->data)) return *b;
        throw ConfigError("key '" + key + "' must be a boolean");
    }

    std::vector<std::string> get_string_array(const std::string& key) const {
        const Value* v = find(key);
        if (!v) return {};
        const auto* arr = std::get_if<Array>(&v->data);
        if (!arr) throw ConfigError("key '" + key + "' must be an array of strings");
        std::vector<std::string> out;
        for (const auto& e : *arr) {
            const auto* s = std::get_if<std::string>(&e.data);
            if (!s) throw ConfigError("key '" + key + "' must be an array of strings");
            out.push_back(*s);
        }
        return out;
    }

    std::vector<double> get_number_array(const std::string& key) const {
        const Value* v = find(key);
        if (!v) return {};
        const auto* arr = std::get_if<Array>(&v->data);
        if (!arr) throw ConfigError("key '" + key + "' must be an array of numbers");
        std::vector<double> out;
        for (const auto& e : *arr) {
            if (auto d = std::get_if<double>(&e.data)) out.push_back(*d);
            else if (auto i = std::get_if<std::int64_t>(&e.data)) out.push_back(static_cast<double>(*i));
            else throw ConfigError("key '" + key + "' must be an array of numbers");
        }
        return out;
    }

    bool is_array(const std::string& key) const {
        const Value* v = find(key);
        return v && std::holds_alternative<Array>(v->data);
    }

    /// Keys present in the file that no getter has asked for.
    std::vector<std::string> unused_keys() const {
        std::vector<std::string> out;
        for (const auto& [k, _] : values_)
            if (!used_.count(k)) out.push_back(k);
        return out;
    }

    void set(const std::string& key, Value v) { values_[key] = std::move(v); }

private:
    const Value* find(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) return nullptr;
        used_.insert(key);
        return &it->second;
    }

    std::map<std::string, Value> values_;
    mutable std::set<std::string> used_;
};

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    Table run() {
        Table table;
        std::string section;
        while (true) {
            skip_blank_lines();
            if (eof()) break;
            if (peek() == '[') {
                ++pos_;
                skip_inline_space();
                section = bare_key_path();
                skip_inline_space();
                expect(']');
                end_of_line();
                continue;
            }
            std::string key = bare_key_path();
            skip_inline_space();
            expect('=');
            skip_inline_space();
            Value v = value();
            end_of_line();
            const std::string full = section.empty() ? key : section + "." + key;
            if (table.has(full)) fail("duplicate key '" + full + "'");
            table.set(full, std::move(v));
        }
        return table;
    }

private:
    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }

    [[noreturn]] void fail(const std::string& what) const { throw ConfigError("line " + std::to_string(line_) + ": " + what); }

    void expect(char c) {
        if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void skip_inline_space() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
    }

    void skip_comment() {
        if (!eof() && peek() == '#')
            while (!eof() && peek() != '\n') ++pos_;
    }

    void skip_blank_lines() {
        for (;;) {
            skip_inline_space();
            skip_comment();
            if (eof()) return;
            if (peek() == '\r') ++pos_;
            if (!eof() && peek() == '\n') {
                ++pos_;
                ++line_;
                continue;
            }
            return;
        }
    }

    // Whitespace, comments and newlines inside arrays.
    void skip_array_space() { skip_blank_lines(); }

    void end_of_line() {
        skip_inline_space();
        skip_comment();
        if (eof()) return;
        if (peek() == '\r') ++pos_;
        if (eof() || peek() != '\n') fail("unexpected trailing characters");
        ++pos_;
        ++line_;
    }

    static bool bare_char(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    }

    std::string bare_key_path() {
        std::string out;
        for (;;) {
            const std::size_t start = pos_;
            while (!eof() && bare_char(peek())) ++pos_;
            if (pos_ == start) fail("expected a key");
            out.append(s_.substr(start, pos_ - start));
            if (!eof() && peek() == '.') {
                out.push_back('.');
                ++pos_;
                continue;
            }
            return out;
        }
    }

    Value value() {
        if (eof()) fail("missing value");
        const char c = peek();
        if (c == '"') return Value{basic_string()};
        if (c == '\'') return Value{literal_string()};
        if (c == '[') return Value{array()};
        if (s_.substr(pos_, 4) == "true") {
            pos_ += 4;
            return Value{true};
        }
        if (s_.substr(pos_, 5) == "false") {
            pos_ += 5;
            return Value{false};
        }
        return number();
    }

    std::string basic_string() {
        ++pos_;
        std::string out;
        while (!eof() && peek() != '"') {
            char c = peek();
            if (c == '\n') fail("newline in string");
            if (c == '\\') {
                ++pos_;
                if (eof()) fail("dangling escape");
                switch (peek()) {
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case 'r': out.push_back('\r'); break;
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    default: fail("unsupported escape");
                }
                ++pos_;
                continue;
            }
            out.push_back(c);
            ++pos_;
        }
        if (eof()) fail("unterminated string");
        ++pos_;
        return out;
    }

    std::string literal_string() {
        ++pos_;
        const auto end = s_.find('\'', pos_);
        if (end == std::string_view::npos) fail("unterminated string");
        std::string out(s_.substr(pos_, end - pos_));
        if (out.find('\n') != std::string::npos) fail("newline in string");
        pos_ = end + 1;
        return out;
    }

    Array array() {
        ++pos_;
        Array out;
        for (;;) {
            skip_array_space();
            if (eof()) fail("unterminated array");
            if (peek() == ']') {
                ++pos_;
                return out;
            }
            out.push_back(value());
            skip_array_space();
            if (!eof() && peek() == ',') {
                ++pos_;
                continue;
            }
            skip_array_space();
            if (eof() || peek() != ']') fail("expected ',' or ']' in array");
        }
    }

    Value number() {
        const std::size_t start = pos_;
        while (!eof() && (bare_char(peek()) || peek() == '.' || peek() == '+')) ++pos_;
        std::string tok;
        for (char c : s_.substr(start, pos_ - start))
            if (c != '_') tok.push_back(c);
        if (tok.empty()) fail("expected a value");
        const bool is_float = tok.find_first_of(".eE") != std::string::npos || tok == "inf" || tok == "nan";
        const char* b = tok.data();
        const char* e = tok.data() + tok.size();
        if (*b == '+') ++b;
        if (is_float) {
            double d = 0;
            auto [p, ec] = std::from_chars(b, e, d);
            if (ec != std::errc() || p != e) fail("malformed number '" + tok + "'");
            return Value{d};
        }
        std::int64_t i = 0;
        auto [p, ec] = std::from_chars(b, e, i);
        if (ec != std::errc() || p != e) fail("malformed value '" + tok + "'");
        return Value{i};
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

}  // namespace detail

inline Table Table::parse(std::string_view text) { return detail::Parser(text).run(); }

}  // namespace revsent::config
