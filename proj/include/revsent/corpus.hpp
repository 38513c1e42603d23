#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "revsent/csv.hpp"
#include "revsent/error.hpp"
#include "revsent/random.hpp"

namespace revsent {

enum class Sentiment { Positive, Negative };

inline std::string_view to_string(Sentiment s) { return s == Sentiment::Positive ? "positive" : "negative"; }

/// +1 for Positive, -1 for Negative.
inline int sign_of(Sentiment s) { return s == Sentiment::Positive ? 1 : -1; }

/// Ratings 4 and 5 are positive; 1, 2 and 3 are negative.
inline Sentiment label_review(int rating) {
    if (rating < 1 || rating > 5) throw ValidationError("rating " + std::to_string(rating) + " outside 1..5");
    return rating >= 4 ? Sentiment::Positive : Sentiment::Negative;
}

struct LabeledDocument {
    std::size_t id = 0;
    std::string body;
    int rating = 0;
    Sentiment label = Sentiment::Positive;

    bool operator==(const LabeledDocument&) const = default;
};

using Corpus = std::vector<LabeledDocument>;

struct ClassCounts {
    std::size_t positive = 0;
    std::size_t negative = 0;

    std::size_t total() const { return positive + negative; }
    /// Share of the smaller class.
    double minority_share() const {
        return total() == 0 ? 0.0 : static_cast<double>(std::min(positive, negative)) / static_cast<double>(total());
    }
};

inline ClassCounts count_classes(const Corpus& corpus) {
    ClassCounts c;
    for (const auto& d : corpus) (d.label == Sentiment::Positive ? c.positive : c.negative)++;
    return c;
}

inline int parse_rating(std::string_view field, std::size_t row) {
    auto trimmed = field;
    while (!trimmed.empty() && trimmed.front() == ' ') trimmed.remove_prefix(1);
    while (!trimmed.empty() && trimmed.back() == ' ') trimmed.remove_suffix(1);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), value);
    if (ec != std::errc() || ptr != trimmed.data() + trimmed.size() || trimmed.empty())
        throw ValidationError("row " + std::to_string(row) + ": unparseable rating '" + std::string(field) + "'");
    if (value < 1 || value > 5)
        throw ValidationError("row " + std::to_string(row) + ": rating " + std::to_string(value) + " outside 1..5");
    return value;
}

/// Labels the rows of a Score,Date,Title,Review table. Row numbers in errors
/// count the header as row 1.
inline Corpus corpus_from_rows(const std::vector<csv::Row>& rows) {
    Corpus corpus;
    if (rows.empty()) return corpus;
    const auto& header = rows.front();
    const std::size_t score_col = csv::column_index(header, "Score");
    const std::size_t review_col = csv::column_index(header, "Review");
    if (score_col == static_cast<std::size_t>(-1)) throw ValidationError("missing column 'Score'");
    if (review_col == static_cast<std::size_t>(-1)) throw ValidationError("missing column 'Review'");
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() == 1 && row[0].empty()) continue;  // blank line
        if (row.size() != header.size())
            throw ParseError("row " + std::to_string(r + 1) + ": expected " + std::to_string(header.size()) +
                             " fields, found " + std::to_string(row.size()));
        LabeledDocument d;
        d.id = corpus.size();
        d.rating = parse_rating(row[score_col], r + 1);
        d.label = label_review(d.rating);
        d.body = row[review_col];
        corpus.push_back(std::move(d));
    }
    return corpus;
}

inline Corpus load_corpus_csv(const std::string& path) {
    std::string text = csv::read_file(path);
    if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);
    try {
        return corpus_from_rows(csv::parse(text));
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

/// Test-set size is either a fraction of the corpus or an absolute count.
struct SplitSpec {
    std::optional<double> test_fraction = 0.3;
    std::optional<std::size_t> test_count;
    std::uint64_t seed = 0;
    bool stratified = true;

    std::size_t resolve_test_size(std::size_t corpus_size) const {
        if (test_count) return *test_count;
        if (!test_fraction) throw ValidationError("split needs test_fraction or test_count");
        const double f = *test_fraction;
        if (!(f > 0.0 && f < 1.0)) throw ValidationError("test_fraction must lie in (0,1)");
        return static_cast<std::size_t>(std::llround(f * static_cast<double>(corpus_size)));
    }
};

struct TrainTestSplit {
    Corpus train;
    Corpus test;
};

/// Partitions the corpus. With stratification each class contributes a test
/// quota from largest-remainder apportionment of the total test size, so
/// per-class test counts are within one document of proportional. Both
/// halves keep the corpus's id order.
inline TrainTestSplit split(const Corpus& corpus, const SplitSpec& spec) {
    if (corpus.empty()) throw ValidationError("cannot split an empty corpus");
    const std::size_t n = corpus.size();
    const std::size_t test_size = spec.resolve_test_size(n);
    if (test_size >= n)
        throw ValidationError("test size " + std::to_string(test_size) + " leaves no training documents (corpus " +
                              std::to_string(n) + ")");
    if (test_size == 0) throw ValidationError("test size rounds to zero documents");

    Rng rng(spec.seed);
    std::vector<bool> in_test(n, false);
    if (spec.stratified) {
        std::array<std::vector<std::size_t>, 2> members;
        for (std::size_t i = 0; i < n; ++i) members[corpus[i].label == Sentiment::Positive ? 0 : 1].push_back(i);
        std::array<std::size_t, 2> quota{};
        std::array<double, 2> remainder{};
        std::size_t assigned = 0;
        for (int c = 0; c < 2; ++c) {
            const double exact = static_cast<double>(test_size) * static_cast<double>(members[c].size()) /
                                 static_cast<double>(n);
            quota[c] = static_cast<std::size_t>(std::floor(exact));
            remainder[c] = exact - static_cast<double>(quota[c]);
            assigned += quota[c];
        }
        // At most one leftover seat for two classes; ties go to Positive.
        if (assigned < test_size) quota[remainder[1] > remainder[0] ? 1 : 0] += test_size - assigned;
        for (int c = 0; c < 2; ++c) {
            rng.shuffle(members[c]);
            for (std::size_t k = 0; k < quota[c]; ++k) in_test[members[c][k]] = true;
        }
    } else {
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        rng.shuffle(order);
        for (std::size_t k = 0; k < test_size; ++k) in_test[order[k]] = true;
    }
    TrainTestSplit out;
    for (std::size_t i = 0; i < n; ++i) (in_test[i] ? out.test : out.train).push_back(corpus[i]);
    return out;
}

/// Bag-of-lexicon review generator. Each word of a review is a cross-class
/// word with probability noise_rate; otherwise it is a neutral word with
/// probability neutral_rate and an own-class word with the remainder.
struct SyntheticCorpusSpec {
    std::size_t total = 2000;
    double minority_fraction = 0.1;
    std::vector<std::string> positive_lexicon;
    std::vector<std::string> negative_lexicon;
    std::vector<std::string> neutral_lexicon;
    std::size_t words_min = 8;
    std::size_t words_max = 20;
    double noise_rate = 0.15;
    double neutral_rate = 0.4;
    std::uint64_t seed = 0;

    void validate() const {
        if (total == 0) throw ValidationError("synthetic corpus total must be positive");
        if (!(minority_fraction > 0.0 && minority_fraction < 0.5))
            throw ValidationError("minority_fraction must lie in (0, 0.5)");
        if (positive_lexicon.empty()) throw ValidationError("positive lexicon is empty");
        if (negative_lexicon.empty()) throw ValidationError("negative lexicon is empty");
        if (neutral_lexicon.empty() && neutral_rate > 0.0) throw ValidationError("neutral lexicon is empty");
        if (words_min == 0 || words_min > words_max) throw ValidationError("words_per_review range is invalid");
        if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) throw ValidationError("noise_rate must lie in [0,1]");
        if (!(neutral_rate >= 0.0 && neutral_rate <= 1.0)) throw ValidationError("neutral_rate must lie in [0,1]");
        std::set<std::string> seen;
        for (const auto* lex : {&positive_lexicon, &negative_lexicon, &neutral_lexicon}) {
            std::set<std::string> own(lex->begin(), lex->end());
            for (const auto& w : own)
                if (!seen.insert(w).second) throw ValidationError("lexicons overlap on word '" + w + "'");
        }
    }

    std::size_t minority_count() const {
        return static_cast<std::size_t>(std::llround(static_cast<double>(total) * minority_fraction));
    }
};

inline Corpus generate_synthetic_corpus(const SyntheticCorpusSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    const std::size_t negatives = spec.minority_count();
    std::vector<Sentiment> labels(spec.total, Sentiment::Positive);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(negatives), Sentiment::Negative);
    rng.shuffle(labels);

    auto pick = [&](const std::vector<std::string>& lex) -> const std::string& {
        return lex[static_cast<std::size_t>(rng.uniform_below(lex.size()))];
    };

    Corpus corpus;
    corpus.reserve(spec.total);
    for (std::size_t i = 0; i < spec.total; ++i) {
        const bool positive = labels[i] == Sentiment::Positive;
        const auto& own = positive ? spec.positive_lexicon : spec.negative_lexicon;
        const auto& other = positive ? spec.negative_lexicon : spec.positive_lexicon;
        const std::size_t len =
            spec.words_min + static_cast<std::size_t>(rng.uniform_below(spec.words_max - spec.words_min + 1));
        std::string body;
        for (std::size_t w = 0; w < len; ++w) {
            const std::string* word = nullptr;
            if (rng.bernoulli(spec.noise_rate)) word = &pick(other);
            else if (rng.bernoulli(spec.neutral_rate)) word = &pick(spec.neutral_lexicon);
            else word = &pick(own);
            if (!body.empty()) body.push_back(' ');
            body += *word;
        }
        body.push_back('.');
        LabeledDocument d;
        d.id = i;
        d.label = labels[i];
        d.rating = positive ? 4 + static_cast<int>(rng.uniform_below(2)) : 1 + static_cast<int>(rng.uniform_below(3));
        d.body = std::move(body);
        corpus.push_back(std::move(d));
    }
    return corpus;
}

/// Serializes a labeled corpus in the Score,Date,Title,Review schema.
inline std::string corpus_csv_text(const Corpus& corpus) {
    std::string out = csv::format_row({"Score", "Date", "Title", "Review"});
    for (const auto& d : corpus) out += csv::format_row({std::to_string(d.rating), "", "", d.body});
    return out;
}

}  // namespace revsent
