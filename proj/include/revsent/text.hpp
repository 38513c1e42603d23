#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "revsent/csv.hpp"
#include "revsent/error.hpp"
#include "revsent/html.hpp"
#include "revsent/porter.hpp"
#include "revsent/random.hpp"

namespace revsent::text {

/// Sentence-boundary pseudo-token left by normalize(). Uppercase, so it can
/// never collide with a (lowercased) word.
inline constexpr std::string_view kBoundary = "<P>";
inline constexpr std::string_view kNegationPrefix = "NOT_";

using TokenSequence = std::vector<std::string>;

struct NegationLexicon {
    std::set<std::string> triggers{"no",      "not",   "never",   "n't", "without", "none",
                                   "nobody",  "nothing", "neither", "nor", "cannot"};
    // The boundary sentinel always ends a scope; these words do as well.
    std::set<std::string> scope_terminators{"but"};

    void validate() const {
        if (triggers.empty()) throw ValidationError("negation trigger list is empty");
        for (const auto& t : triggers)
            for (char c : t)
                if (c >= 'A' && c <= 'Z') throw ValidationError("negation trigger '" + t + "' is not lowercase");
    }

    bool is_trigger(std::string_view w) const { return triggers.count(std::string(w)) != 0; }
    bool ends_scope(std::string_view w) const {
        return w == kBoundary || scope_terminators.count(std::string(w)) != 0;
    }
};

/// English stopwords (the NLTK list with negation words and contraction
/// stubs removed). Version 1; bump kDefaultStopwordsVersion on edits.
inline constexpr int kDefaultStopwordsVersion = 1;
inline const std::vector<std::string>& default_stopwords() {
    static const std::vector<std::string> words{
        "i",       "me",         "my",      "myself", "we",     "our",     "ours",     "ourselves", "you",
        "your",    "yours",      "yourself", "yourselves", "he", "him",    "his",      "himself",   "she",
        "her",     "hers",       "herself", "it",     "its",    "itself",  "they",     "them",      "their",
        "theirs",  "themselves", "what",    "which",  "who",    "whom",    "this",     "that",      "these",
        "those",   "am",         "is",      "are",    "was",    "were",    "be",       "been",      "being",
        "have",    "has",        "had",     "having", "do",     "does",    "did",      "doing",     "a",
        "an",      "the",        "and",     "but",    "if",     "or",      "because",  "as",        "until",
        "while",   "of",         "at",      "by",     "for",    "with",    "about",    "against",   "between",
        "into",    "through",    "during",  "before", "after",  "above",   "below",    "to",        "from",
        "up",      "down",       "in",      "out",    "on",     "off",     "over",     "under",     "again",
        "further", "then",       "once",    "here",   "there",  "when",    "where",    "why",       "how",
        "all",     "any",        "both",    "each",   "few",    "more",    "most",     "other",     "some",
        "such",    "only",       "own",     "same",   "so",     "than",    "too",      "very",      "s",
        "t",       "can",        "will",    "just",   "should", "now",     "d",        "ll",        "m",
        "o",       "re",         "ve",      "y",      "ma",     "would",   "could",    "shall",     "might",
        "must",    "need"};
    return words;
}

/// Stopwords never include negation triggers: the constructor drops them,
/// since removing a trigger would erase its scope.
class StopwordList {
public:
    StopwordList(const std::vector<std::string>& words, const NegationLexicon& lexicon) {
        for (const auto& w : words)
            if (!w.empty() && !lexicon.is_trigger(w)) words_.insert(w);
    }

    bool contains(std::string_view w) const { return words_.count(std::string(w)) != 0; }
    const std::set<std::string>& words() const { return words_; }

private:
    std::set<std::string> words_;
};

/// One token per line; blank lines and lines starting with '#' ignored.
inline std::vector<std::string> read_word_list(const std::string& path) {
    const std::string content = csv::read_file(path);
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        auto end = content.find('\n', pos);
        if (end == std::string::npos) end = content.size();
        std::string line = content.substr(pos, end - pos);
        pos = end + 1;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
        std::size_t b = 0;
        while (b < line.size() && (line[b] == ' ' || line[b] == '\t')) ++b;
        line.erase(0, b);
        if (line.empty() || line[0] == '#') continue;
        out.push_back(std::move(line));
    }
    return out;
}

namespace detail {

inline bool is_ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

/// Replaces markup tags with spaces.
inline std::string strip_tags(std::string_view in) {
    std::string out;
    out.reserve(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (in[i] == '<' && i + 1 < in.size() &&
            (is_ascii_letter(in[i + 1]) || in[i + 1] == '/' || in[i + 1] == '!' || in[i + 1] == '?')) {
            const auto gt = in.find('>', i + 1);
            if (gt != std::string_view::npos) {
                out.push_back(' ');
                i = gt;
                continue;
            }
        }
        out.push_back(in[i]);
    }
    return out;
}

/// Folds the Unicode punctuation that shows up in reviews onto ASCII.
inline std::string fold_unicode_punctuation(std::string_view in) {
    struct Fold {
        std::string_view from;
        std::string_view to;
    };
    static constexpr Fold folds[] = {
        {"\xE2\x80\x98", "'"}, {"\xE2\x80\x99", "'"}, {"\xE2\x80\x9C", "\""}, {"\xE2\x80\x9D", "\""},
        {"\xE2\x80\x93", " "}, {"\xE2\x80\x94", " "}, {"\xE2\x80\xA6", "."},  {"\xC2\xA0", " "},
    };
    std::string out;
    out.reserve(in.size());
    for (std::size_t i = 0; i < in.size();) {
        bool folded = false;
        if (static_cast<unsigned char>(in[i]) >= 0x80) {
            for (const auto& f : folds) {
                if (in.substr(i, f.from.size()) == f.from) {
                    out.append(f.to);
                    i += f.from.size();
                    folded = true;
                    break;
                }
            }
        }
        if (!folded) out.push_back(in[i++]);
    }
    return out;
}

inline bool is_sentence_punct(char c) { return c == '.' || c == '!' || c == '?' || c == ';' || c == ':'; }

}  // namespace detail

/// Cleans raw review text into space-separated lowercase words and boundary
/// sentinels.
///
/// Markup is stripped and entities decoded; ASCII letters are lowercased
/// (bytes outside ASCII are kept as word characters, so the result does not
/// depend on the locale). Digits become separators, sentence punctuation
/// (. ! ? ; :) becomes one "<P>" per run, other punctuation becomes a space.
/// A trailing "n't" is split off as its own word (wouldn't -> would n't,
/// can't -> can n't, won't -> will n't); other apostrophes are deleted.
inline std::string normalize(std::string_view raw) {
    const std::string s = detail::fold_unicode_punctuation(html::decode_entities(detail::strip_tags(raw)));
    std::vector<std::string> out;
    std::string word;

    auto flush_word = [&] {
        if (!word.empty()) out.push_back(std::move(word));
        word.clear();
    };
    auto boundary = [&] {
        flush_word();
        if (!out.empty() && out.back() != kBoundary) out.emplace_back(kBoundary);
    };

    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i) {
        const char c = s[i];
        const auto uc = static_cast<unsigned char>(c);
        if (detail::is_ascii_letter(c)) {
            word.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
        } else if (uc >= 0x80) {
            word.push_back(c);
        } else if (c == '\'') {
            const bool contraction = !word.empty() && word.back() == 'n' && i + 1 < n && (s[i + 1] == 't' || s[i + 1] == 'T') &&
                                     (i + 2 >= n || !detail::is_ascii_letter(s[i + 2]));
            if (contraction) {
                word.pop_back();
                if (word == "ca") word = "can";
                else if (word == "wo") word = "will";
                else if (word == "sha") word = "shall";
                flush_word();
                out.emplace_back("n't");
                ++i;  // consume 't'
            }
            // Otherwise the apostrophe is dropped and the word continues.
        } else if (detail::is_digit(c)) {
            flush_word();
        } else if (detail::is_sentence_punct(c)) {
            // A decimal point or separator inside a number is part of the number.
            if ((c == '.' || c == ':') && i > 0 && i + 1 < n && detail::is_digit(s[i - 1]) && detail::is_digit(s[i + 1])) {
                flush_word();
                continue;
            }
            boundary();
        } else {
            flush_word();
        }
    }
    flush_word();

    std::string joined;
    for (const auto& t : out) {
        if (!joined.empty()) joined.push_back(' ');
        joined += t;
    }
    return joined;
}

/// Splits on ASCII whitespace.
inline TokenSequence tokenize(std::string_view normalized) {
    TokenSequence tokens;
    std::size_t i = 0;
    while (i < normalized.size()) {
        while (i < normalized.size() && (normalized[i] == ' ' || normalized[i] == '\t' || normalized[i] == '\n' || normalized[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < normalized.size() && !(normalized[j] == ' ' || normalized[j] == '\t' || normalized[j] == '\n' || normalized[j] == '\r')) ++j;
        if (j > i) tokens.emplace_back(normalized.substr(i, j - i));
        i = j;
    }
    return tokens;
}

/// Marks every content token inside a negation scope with NOT_.
///
/// A trigger toggles the scope state, so two triggers inside one scope
/// cancel. A scope ends at a boundary sentinel, a terminator word, or the
/// end of the sequence. Triggers and sentinels are dropped from the
/// output; terminator words are kept unmarked.
inline TokenSequence apply_negation_scope(const TokenSequence& tokens, const NegationLexicon& lexicon) {
    TokenSequence out;
    out.reserve(tokens.size());
    bool negated = false;
    for (const auto& t : tokens) {
        if (t == kBoundary) {
            negated = false;
            continue;
        }
        if (lexicon.is_trigger(t)) {
            negated = !negated;
            continue;
        }
        if (lexicon.ends_scope(t)) {
            negated = false;
            out.push_back(t);
            continue;
        }
        out.push_back(negated ? std::string(kNegationPrefix) + t : t);
    }
    return out;
}

inline bool is_negated(std::string_view token) { return token.substr(0, kNegationPrefix.size()) == kNegationPrefix; }

inline std::string_view base_word(std::string_view token) {
    return is_negated(token) ? token.substr(kNegationPrefix.size()) : token;
}

/// Stems the surface part of a token, keeping any NOT_ marker.
inline std::string stem_token(std::string_view token) {
    const std::string_view base = base_word(token);
    std::string s = porter::stem(base);
    if (s.empty()) s = std::string(base);
    return is_negated(token) ? std::string(kNegationPrefix) + s : s;
}

/// Stoplist plus negation lexicon: everything needed to turn raw text into
/// tokens. Immutable once built; safe to share across threads.
class Preprocessor {
public:
    Preprocessor() : Preprocessor(default_stopwords(), NegationLexicon{}) {}

    Preprocessor(const std::vector<std::string>& stopwords, NegationLexicon lexicon)
        : lexicon_((lexicon.validate(), std::move(lexicon))), stoplist_(stopwords, lexicon_) {}

    /// normalize -> tokenize -> negation scope -> stopword removal -> stem.
    TokenSequence operator()(std::string_view raw) const;

    const NegationLexicon& lexicon() const { return lexicon_; }
    const StopwordList& stoplist() const { return stoplist_; }

    /// Hash identifying the exact preprocessing behaviour: stoplist,
    /// triggers, terminators and the pipeline version.
    std::uint64_t fingerprint() const {
        std::string blob = "revsent-preprocess-v1\nstop:";
        for (const auto& w : stoplist_.words()) blob += w + "\n";
        blob += "trig:";
        for (const auto& w : lexicon_.triggers) blob += w + "\n";
        blob += "term:";
        for (const auto& w : lexicon_.scope_terminators) blob += w + "\n";
        return fnv1a64(blob);
    }

private:
    NegationLexicon lexicon_;
    StopwordList stoplist_;
};

inline TokenSequence preprocess(std::string_view raw, const StopwordList& stoplist, const NegationLexicon& lexicon) {
    const TokenSequence scoped = apply_negation_scope(tokenize(normalize(raw)), lexicon);
    TokenSequence out;
    for (const auto& t : scoped) {
        if (stoplist.contains(base_word(t))) continue;
        out.push_back(stem_token(t));
    }
    return out;
}

inline TokenSequence Preprocessor::operator()(std::string_view raw) const {
    return preprocess(raw, stoplist_, lexicon_);
}

inline std::string join(const TokenSequence& tokens) {
    std::string s;
    for (const auto& t : tokens) {
        if (!s.empty()) s.push_back(' ');
        s += t;
    }
    return s;
}

}  // namespace revsent::text
