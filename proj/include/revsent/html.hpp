#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "revsent/error.hpp"

// A forgiving HTML reader: enough of a DOM to run class-based lookups over
// saved review pages. Mismatched close tags are tolerated; only input that
// ends inside a tag, comment or quoted attribute is rejected.
namespace revsent::html {

inline void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp <= 0x10FFFF) {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

namespace detail {

struct NamedEntity {
    std::string_view name;
    std::uint32_t codepoint;
};

inline constexpr std::array<NamedEntity, 20> kNamedEntities{{
    {"amp", '&'},      {"lt", '<'},       {"gt", '>'},       {"quot", '"'},
    {"apos", '\''},    {"nbsp", 0xA0},    {"hellip", 0x2026}, {"mdash", 0x2014},
    {"ndash", 0x2013}, {"lsquo", 0x2018}, {"rsquo", 0x2019}, {"ldquo", 0x201C},
    {"rdquo", 0x201D}, {"eacute", 0xE9},  {"egrave", 0xE8},  {"agrave", 0xE0},
    {"ccedil", 0xE7},  {"copy", 0xA9},    {"euro", 0x20AC},  {"pound", 0xA3},
}};

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

inline std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace detail

/// Decodes named and numeric character references. Unknown references are
/// left as written.
inline std::string decode_entities(std::string_view in) {
    std::string out;
    out.reserve(in.size());
    for (std::size_t i = 0; i < in.size();) {
        if (in[i] != '&') {
            out.push_back(in[i++]);
            continue;
        }
        const auto semi = in.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 12) {
            out.push_back(in[i++]);
            continue;
        }
        const std::string_view ref = in.substr(i + 1, semi - i - 1);
        std::optional<std::uint32_t> cp;
        if (ref.size() >= 2 && ref[0] == '#') {
            const bool hex = ref[1] == 'x' || ref[1] == 'X';
            const std::string_view digits = ref.substr(hex ? 2 : 1);
            std::uint32_t v = 0;
            bool ok = !digits.empty();
            for (char c : digits) {
                int d = -1;
                if (c >= '0' && c <= '9') d = c - '0';
                else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
                else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
                if (d < 0 || v > 0x10FFFF) {
                    ok = false;
                    break;
                }
                v = v * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
            }
            if (ok && v <= 0x10FFFF && v != 0) cp = v;
        } else {
            for (const auto& e : detail::kNamedEntities)
                if (e.name == ref) cp = e.codepoint;
        }
        if (!cp) {
            out.push_back(in[i++]);
            continue;
        }
        append_utf8(out, *cp);
        i = semi + 1;
    }
    return out;
}

struct Node {
    enum class Kind { Element, Text };
    Kind kind = Kind::Element;
    std::string tag;  // lowercase; empty for text
    std::vector<std::pair<std::string, std::string>> attributes;
    std::string text;  // raw (undecoded) character data for text nodes
    std::size_t parent = 0;
    std::vector<std::size_t> children;

    const std::string* attribute(std::string_view name) const {
        for (const auto& [k, v] : attributes)
            if (k == name) return &v;
        return nullptr;
    }
};

/// Arena-backed document tree. Node 0 is a synthetic root element.
class Document {
public:
    static Document parse(std::string_view html);

    const Node& node(std::size_t id) const { return nodes_.at(id); }
    std::size_t size() const { return nodes_.size(); }
    static constexpr std::size_t root() { return 0; }

    /// Descendants of `from` (excluding it) in document order that satisfy pred.
    template <typename Pred>
    std::vector<std::size_t> find_all(std::size_t from, Pred&& pred) const {
        std::vector<std::size_t> out;
        std::vector<std::size_t> stack(nodes_[from].children.rbegin(), nodes_[from].children.rend());
        while (!stack.empty()) {
            const std::size_t id = stack.back();
            stack.pop_back();
            const Node& n = nodes_[id];
            if (n.kind == Node::Kind::Element && pred(n)) out.push_back(id);
            for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
        }
        return out;
    }

    template <typename Pred>
    std::optional<std::size_t> find_first(std::size_t from, Pred&& pred) const {
        auto all = find_all(from, std::forward<Pred>(pred));
        if (all.empty()) return std::nullopt;
        return all.front();
    }

    /// Rendered text of an element: entities decoded, <br> as a newline,
    /// runs of other whitespace collapsed to one space, lines trimmed.
    std::string text_content(std::size_t id) const {
        std::string raw;
        collect_text(id, raw);
        std::string out;
        std::string line;
        auto flush_line = [&](bool newline) {
            // trim
            std::size_t b = 0, e = line.size();
            while (b < e && line[b] == ' ') ++b;
            while (e > b && line[e - 1] == ' ') --e;
            out.append(line, b, e - b);
            if (newline) out.push_back('\n');
            line.clear();
        };
        for (char c : raw) {
            if (c == '\n') {
                flush_line(true);
            } else if (detail::is_space(c)) {
                if (line.empty() || line.back() != ' ') line.push_back(' ');
            } else {
                line.push_back(c);
            }
        }
        flush_line(false);
        // Drop leading/trailing blank lines.
        while (!out.empty() && out.back() == '\n') out.pop_back();
        std::size_t lead = 0;
        while (lead < out.size() && out[lead] == '\n') ++lead;
        return out.substr(lead);
    }

private:
    void collect_text(std::size_t id, std::string& out) const {
        const Node& n = nodes_[id];
        if (n.kind == Node::Kind::Text) {
            // Newlines inside character data are layout, not line breaks.
            std::string decoded = decode_entities(n.text);
            for (char& c : decoded)
                if (c == '\n' || c == '\r') c = ' ';
            // U+00A0 renders as a space.
            std::string cleaned;
            for (std::size_t i = 0; i < decoded.size(); ++i) {
                if (static_cast<unsigned char>(decoded[i]) == 0xC2 && i + 1 < decoded.size() &&
                    static_cast<unsigned char>(decoded[i + 1]) == 0xA0) {
                    cleaned.push_back(' ');
                    ++i;
                } else {
                    cleaned.push_back(decoded[i]);
                }
            }
            out += cleaned;
            return;
        }
        if (n.tag == "br") {
            out.push_back('\n');
            return;
        }
        for (std::size_t c : n.children) collect_text(c, out);
    }

    std::size_t add(Node n) {
        nodes_.push_back(std::move(n));
        const std::size_t id = nodes_.size() - 1;
        nodes_[nodes_[id].parent].children.push_back(id);
        return id;
    }

    std::vector<Node> nodes_;
};

inline bool is_void_element(std::string_view tag) {
    static constexpr std::array<std::string_view, 14> kVoid{"area", "base", "br",    "col",   "embed",
                                                           "hr",   "img",  "input", "link",  "meta",
                                                           "param", "source", "track", "wbr"};
    return std::find(kVoid.begin(), kVoid.end(), tag) != kVoid.end();
}

inline Document Document::parse(std::string_view html) {
    Document doc;
    Node root;
    root.tag = "#root";
    doc.nodes_.push_back(std::move(root));
    std::vector<std::size_t> open{0};

    auto line_of = [&](std::size_t pos) {
        return std::to_string(1 + std::count(html.begin(), html.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
    };
    auto add_text = [&](std::string_view t) {
        if (t.empty()) return;
        Node n;
        n.kind = Node::Kind::Text;
        n.text = std::string(t);
        n.parent = open.back();
        doc.add(std::move(n));
    };

    const std::size_t n = html.size();
    std::size_t i = 0;
    std::size_t text_start = 0;
    while (i < n) {
        if (html[i] != '<') {
            ++i;
            continue;
        }
        const std::size_t lt = i;
        if (html.substr(i, 4) == "<!--") {
            add_text(html.substr(text_start, lt - text_start));
            const auto end = html.find("-->", i + 4);
            if (end == std::string_view::npos) throw ParseError("unterminated comment at line " + line_of(lt));
            i = text_start = end + 3;
            continue;
        }
        if (i + 1 < n && (html[i + 1] == '!' || html[i + 1] == '?')) {
            add_text(html.substr(text_start, lt - text_start));
            const auto end = html.find('>', i + 2);
            if (end == std::string_view::npos) throw ParseError("unterminated declaration at line " + line_of(lt));
            i = text_start = end + 1;
            continue;
        }
        const bool closing = i + 1 < n && html[i + 1] == '/';
        std::size_t p = i + (closing ? 2 : 1);
        if (p >= n || !std::isalpha(static_cast<unsigned char>(html[p]))) {
            // A literal '<' in text.
            ++i;
            continue;
        }
        add_text(html.substr(text_start, lt - text_start));
        const std::size_t name_start = p;
        while (p < n && (std::isalnum(static_cast<unsigned char>(html[p])) || html[p] == '-' || html[p] == ':')) ++p;
        std::string tag = detail::lower(html.substr(name_start, p - name_start));

        Node el;
        el.tag = tag;
        bool self_closing = false;
        bool terminated = false;
        while (p < n) {
            while (p < n && detail::is_space(html[p])) ++p;
            if (p >= n) break;
            if (html[p] == '>') {
                terminated = true;
                ++p;
                break;
            }
            if (html[p] == '/') {
                self_closing = true;
                ++p;
                continue;
            }
            const std::size_t an = p;
            while (p < n && !detail::is_space(html[p]) && html[p] != '=' && html[p] != '>' && html[p] != '/') ++p;
            std::string name = detail::lower(html.substr(an, p - an));
            while (p < n && detail::is_space(html[p])) ++p;
            std::string value;
            if (p < n && html[p] == '=') {
                ++p;
                while (p < n && detail::is_space(html[p])) ++p;
                if (p < n && (html[p] == '"' || html[p] == '\'')) {
                    const char q = html[p];
                    const auto close = html.find(q, p + 1);
                    if (close == std::string_view::npos)
                        throw ParseError("unterminated attribute value in <" + tag + "> at line " + line_of(lt));
                    value = decode_entities(html.substr(p + 1, close - p - 1));
                    p = close + 1;
                } else {
                    const std::size_t vs = p;
                    while (p < n && !detail::is_space(html[p]) && html[p] != '>') ++p;
                    value = decode_entities(html.substr(vs, p - vs));
                }
            }
            if (!name.empty()) el.attributes.emplace_back(std::move(name), std::move(value));
        }
        if (!terminated) throw ParseError("unterminated tag <" + tag + "> at line " + line_of(lt));
        i = text_start = p;

        if (closing) {
            // Pop to the nearest matching open element; stray closers are ignored.
            for (std::size_t k = open.size(); k-- > 1;) {
                if (doc.nodes_[open[k]].tag == tag) {
                    open.resize(k);
                    break;
                }
            }
            continue;
        }
        el.parent = open.back();
        const std::size_t id = doc.add(std::move(el));
        if (tag == "script" || tag == "style") {
            const std::string closer = "</" + tag;
            std::size_t end = i;
            for (;;) {
                end = html.find('<', end);
                if (end == std::string_view::npos) break;
                if (detail::lower(html.substr(end, closer.size())) == closer) break;
                ++end;
            }
            if (end == std::string_view::npos) throw ParseError("unterminated <" + tag + "> at line " + line_of(lt));
            const auto gt = html.find('>', end);
            if (gt == std::string_view::npos) throw ParseError("unterminated tag </" + tag + "> at line " + line_of(end));
            i = text_start = gt + 1;
            continue;
        }
        if (!self_closing && !is_void_element(tag)) open.push_back(id);
    }
    add_text(html.substr(text_start, n - text_start));
    return doc;
}

/// Class attribute with whitespace runs collapsed and trimmed.
inline std::string normalized_class(const Node& n) {
    const std::string* cls = n.attribute("class");
    if (!cls) return {};
    std::string out;
    for (char c : *cls) {
        if (detail::is_space(c)) {
            if (!out.empty() && out.back() != ' ') out.push_back(' ');
        } else {
            out.push_back(c);
        }
    }
    if (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

}  // namespace revsent::html
