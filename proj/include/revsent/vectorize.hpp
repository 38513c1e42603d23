#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "revsent/error.hpp"
#include "revsent/sparse.hpp"
#include "revsent/text.hpp"

namespace revsent {

enum class WeightingScheme { Binary, Count, TfIdf };

inline std::string_view to_string(WeightingScheme s) {
    switch (s) {
        case WeightingScheme::Binary: return "binary";
        case WeightingScheme::Count: return "count";
        case WeightingScheme::TfIdf: return "tfidf";
    }
    return "?";
}

inline WeightingScheme parse_weighting_scheme(std::string_view s) {
    if (s == "binary") return WeightingScheme::Binary;
    if (s == "count") return WeightingScheme::Count;
    if (s == "tfidf") return WeightingScheme::TfIdf;
    throw ValidationError("unknown weighting scheme '" + std::string(s) + "'");
}

struct NgramRange {
    std::size_t lo = 1;
    std::size_t hi = 2;

    void validate() const {
        if (lo < 1 || lo > hi) throw ValidationError("ngram range must satisfy 1 <= lo <= hi");
    }
};

/// Joins tokens[begin, begin+n) with '_' (tokens never contain whitespace,
/// and only NOT_ markers contain an underscore).
inline std::string ngram_key(const text::TokenSequence& tokens, std::size_t begin, std::size_t n) {
    std::string key = tokens[begin];
    for (std::size_t k = 1; k < n; ++k) {
        key.push_back('_');
        key += tokens[begin + k];
    }
    return key;
}

/// Calls fn(key) for each contiguous n-gram in position-major order: at each
/// start position, n runs from lo to hi.
template <typename Fn>
void for_each_ngram(const text::TokenSequence& tokens, const NgramRange& range, Fn&& fn) {
    for (std::size_t i = 0; i < tokens.size(); ++i)
        for (std::size_t n = range.lo; n <= range.hi && i + n <= tokens.size(); ++n) fn(ngram_key(tokens, i, n));
}

/// w(r,t) = tf * ln(n / df). Natural log; no smoothing.
inline double term_weight_tfidf(double tf, std::size_t df, std::size_t n) {
    if (df == 0 || df > n)
        throw DomainError("tf-idf needs 1 <= df <= n (df=" + std::to_string(df) + ", n=" + std::to_string(n) + ")");
    if (tf < 0.0) throw DomainError("tf-idf needs tf >= 0");
    if (tf == 0.0 || df == n) return 0.0;
    return tf * std::log(static_cast<double>(n) / static_cast<double>(df));
}

/// Ordered n-gram -> column map with training-set document frequencies.
/// Built once from training documents and then frozen.
class Vocabulary {
public:
    Vocabulary() = default;

    /// Rebuilds a vocabulary from stored entries (model loading). Terms are
    /// given in column order.
    Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> df, std::size_t n_docs, NgramRange range,
               std::size_t min_df)
        : terms_(std::move(terms)), df_(std::move(df)), n_docs_(n_docs), range_(range), min_df_(min_df) {
        if (terms_.size() != df_.size()) throw ValidationError("vocabulary term/df length mismatch");
        range_.validate();
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (df_[i] < 1 || df_[i] > n_docs_) throw ValidationError("vocabulary df out of range for '" + terms_[i] + "'");
            if (!index_.emplace(terms_[i], static_cast<std::uint32_t>(i)).second)
                throw ValidationError("duplicate vocabulary term '" + terms_[i] + "'");
        }
    }

    static Vocabulary build(const std::vector<text::TokenSequence>& train_docs, NgramRange range, std::size_t min_df) {
        if (train_docs.empty()) throw ValidationError("cannot build a vocabulary from an empty corpus");
        range.validate();
        if (min_df < 1) throw ValidationError("min_df must be at least 1");

        std::vector<std::string> order;
        std::unordered_map<std::string, std::size_t> df;
        for (const auto& doc : train_docs) {
            std::unordered_set<std::string> seen;
            for_each_ngram(doc, range, [&](std::string key) {
                if (!seen.insert(key).second) return;
                auto [it, inserted] = df.emplace(key, 0);
                if (inserted) order.push_back(key);
                ++it->second;
            });
        }
        std::vector<std::string> terms;
        std::vector<std::size_t> dfs;
        for (auto& key : order) {
            const std::size_t d = df.at(key);
            if (d < min_df) continue;
            terms.push_back(std::move(key));
            dfs.push_back(d);
        }
        return Vocabulary(std::move(terms), std::move(dfs), train_docs.size(), range, min_df);
    }

    std::size_t size() const { return terms_.size(); }
    std::size_t n_docs() const { return n_docs_; }
    const NgramRange& ngram_range() const { return range_; }
    std::size_t min_df() const { return min_df_; }
    const std::vector<std::string>& terms() const { return terms_; }
    const std::vector<std::size_t>& document_frequencies() const { return df_; }

    std::optional<std::uint32_t> index_of(std::string_view term) const {
        auto it = index_.find(std::string(term));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t df(std::uint32_t index) const { return df_.at(index); }

private:
    std::vector<std::string> terms_;
    std::vector<std::size_t> df_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::size_t n_docs_ = 0;
    NgramRange range_;
    std::size_t min_df_ = 1;
};

struct FeatureVector {
    SparseVector values;
    WeightingScheme scheme = WeightingScheme::TfIdf;
};

/// Maps a token sequence onto the vocabulary's columns. Out-of-vocabulary
/// n-grams are ignored and zero weights are not stored.
inline FeatureVector vectorize_document(const text::TokenSequence& doc, const Vocabulary& vocab, WeightingScheme scheme) {
    std::unordered_map<std::uint32_t, std::size_t> tf;
    for_each_ngram(doc, vocab.ngram_range(), [&](const std::string& key) {
        if (auto idx = vocab.index_of(key)) ++tf[*idx];
    });
    std::vector<std::uint32_t> cols;
    cols.reserve(tf.size());
    for (const auto& [c, _] : tf) cols.push_back(c);
    std::sort(cols.begin(), cols.end());

    FeatureVector fv{SparseVector(vocab.size()), scheme};
    for (std::uint32_t c : cols) {
        const std::size_t count = tf.at(c);
        double w = 0.0;
        switch (scheme) {
            case WeightingScheme::Binary: w = 1.0; break;
            case WeightingScheme::Count: w = static_cast<double>(count); break;
            case WeightingScheme::TfIdf: w = term_weight_tfidf(static_cast<double>(count), vocab.df(c), vocab.n_docs()); break;
        }
        if (w != 0.0) fv.values.push_back(c, w);
    }
    return fv;
}

inline std::vector<SparseVector> vectorize_all(const std::vector<text::TokenSequence>& docs, const Vocabulary& vocab,
                                               WeightingScheme scheme) {
    std::vector<SparseVector> out;
    out.reserve(docs.size());
    for (const auto& d : docs) out.push_back(vectorize_document(d, vocab, scheme).values);
    return out;
}

}  // namespace revsent
