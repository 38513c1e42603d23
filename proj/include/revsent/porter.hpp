#pragma once

#include <string>
#include <string_view>

// Porter's suffix-stripping algorithm as published in 1980 (five steps,
// no length guard, no later amendments such as "logi" -> "log").
//
// Within a step the longest matching suffix is selected; if its condition
// fails the step leaves the word alone rather than trying shorter suffixes.
namespace revsent::porter {

namespace detail {

class Word {
public:
    explicit Word(std::string w) : b_(std::move(w)) {}

    std::string take() && { return std::move(b_); }
    const std::string& str() const { return b_; }

    bool consonant(std::size_t i) const {
        switch (b_[i]) {
            case 'a': case 'e': case 'i': case 'o': case 'u': return false;
            case 'y': return i == 0 ? true : !consonant(i - 1);
            default: return true;
        }
    }

    /// Measure m of the prefix b_[0, len): the number of VC sequences.
    int measure(std::size_t len) const {
        int m = 0;
        std::size_t i = 0;
        while (i < len && consonant(i)) ++i;
        while (i < len) {
            while (i < len && !consonant(i)) ++i;
            if (i >= len) break;
            while (i < len && consonant(i)) ++i;
            ++m;
        }
        return m;
    }

    bool has_vowel(std::size_t len) const {
        for (std::size_t i = 0; i < len; ++i)
            if (!consonant(i)) return true;
        return false;
    }

    /// *d: prefix ends with a double consonant.
    bool double_consonant(std::size_t len) const {
        return len >= 2 && b_[len - 1] == b_[len - 2] && consonant(len - 1);
    }

    /// *o: prefix ends consonant-vowel-consonant, last not w, x or y.
    bool cvc(std::size_t len) const {
        if (len < 3) return false;
        if (!consonant(len - 1) || consonant(len - 2) || !consonant(len - 3)) return false;
        const char c = b_[len - 1];
        return c != 'w' && c != 'x' && c != 'y';
    }

    bool ends(std::string_view s) const {
        return b_.size() >= s.size() && std::string_view(b_).substr(b_.size() - s.size()) == s;
    }

    std::size_t stem_len(std::string_view suffix) const { return b_.size() - suffix.size(); }

    void replace_suffix(std::string_view suffix, std::string_view with) {
        b_.resize(b_.size() - suffix.size());
        b_.append(with);
    }

    char back() const { return b_.back(); }
    void pop_back() { b_.pop_back(); }
    void push_back(char c) { b_.push_back(c); }
    std::size_t size() const { return b_.size(); }

private:
    std::string b_;
};

struct Rule {
    std::string_view suffix;
    std::string_view replacement;
};

/// Picks the longest matching suffix; replaces it when the stem's measure
/// exceeds min_measure.
template <std::size_t N>
void apply_longest(Word& w, const Rule (&rules)[N], int min_measure) {
    const Rule* best = nullptr;
    for (const auto& r : rules)
        if (w.ends(r.suffix) && (!best || r.suffix.size() > best->suffix.size())) best = &r;
    if (best && w.measure(w.stem_len(best->suffix)) > min_measure) w.replace_suffix(best->suffix, best->replacement);
}

inline void step1a(Word& w) {
    if (w.ends("sses")) w.replace_suffix("sses", "ss");
    else if (w.ends("ies")) w.replace_suffix("ies", "i");
    else if (w.ends("ss")) return;
    else if (w.ends("s")) w.replace_suffix("s", "");
}

inline void step1b(Word& w) {
    if (w.ends("eed")) {
        if (w.measure(w.stem_len("eed")) > 0) w.replace_suffix("eed", "ee");
        return;
    }
    bool stripped = false;
    for (std::string_view suf : {std::string_view("ed"), std::string_view("ing")}) {
        if (w.ends(suf) && w.has_vowel(w.stem_len(suf))) {
            w.replace_suffix(suf, "");
            stripped = true;
            break;
        }
    }
    if (!stripped) return;
    if (w.ends("at")) w.replace_suffix("at", "ate");
    else if (w.ends("bl")) w.replace_suffix("bl", "ble");
    else if (w.ends("iz")) w.replace_suffix("iz", "ize");
    else if (w.double_consonant(w.size())) {
        const char c = w.back();
        if (c != 'l' && c != 's' && c != 'z') w.pop_back();
    } else if (w.measure(w.size()) == 1 && w.cvc(w.size())) {
        w.push_back('e');
    }
}

inline void step1c(Word& w) {
    if (w.ends("y") && w.has_vowel(w.stem_len("y"))) w.replace_suffix("y", "i");
}

inline void step2(Word& w) {
    static constexpr Rule rules[] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},   {"izer", "ize"},
        {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},       {"ousli", "ous"},
        {"ization", "ize"}, {"ation", "ate"},   {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
        {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
    };
    apply_longest(w, rules, 0);
}

inline void step3(Word& w) {
    static constexpr Rule rules[] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    };
    apply_longest(w, rules, 0);
}

inline void step4(Word& w) {
    static constexpr std::string_view suffixes[] = {
        "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
        "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize",
    };
    std::string_view best;
    for (auto s : suffixes)
        if (w.ends(s) && s.size() > best.size()) best = s;
    if (best.empty()) return;
    const std::size_t len = w.stem_len(best);
    if (best == "ion") {
        if (len == 0) return;
        const char prev = w.str()[len - 1];
        if (prev != 's' && prev != 't') return;
    }
    if (w.measure(len) > 1) w.replace_suffix(best, "");
}

inline void step5a(Word& w) {
    if (!w.ends("e")) return;
    const std::size_t len = w.stem_len("e");
    const int m = w.measure(len);
    if (m > 1 || (m == 1 && !w.cvc(len))) w.pop_back();
}

inline void step5b(Word& w) {
    if (w.measure(w.size()) > 1 && w.double_consonant(w.size()) && w.back() == 'l') w.pop_back();
}

}  // namespace detail

/// Stems one lowercase ASCII word. Words containing anything other than
/// a-z are returned unchanged.
inline std::string stem(std::string_view word) {
    if (word.empty()) return {};
    for (char c : word)
        if (c < 'a' || c > 'z') return std::string(word);
    detail::Word w{std::string(word)};
    detail::step1a(w);
    if (w.size() == 0) return std::move(w).take();
    detail::step1b(w);
    detail::step1c(w);
    detail::step2(w);
    detail::step3(w);
    detail::step4(w);
    detail::step5a(w);
    detail::step5b(w);
    return std::move(w).take();
}

}  // namespace revsent::porter
