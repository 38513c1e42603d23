#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "revsent/csv.hpp"
#include "revsent/error.hpp"
#include "revsent/logistic.hpp"
#include "revsent/svm.hpp"
#include "revsent/vectorize.hpp"

namespace revsent {

inline constexpr int kModelFormatVersion = 1;
inline constexpr std::string_view kModelMagic = "revsent-model";

struct ModelBundle {
    int version = kModelFormatVersion;
    Vocabulary vocabulary;
    WeightingScheme scheme = WeightingScheme::TfIdf;
    std::uint64_t preprocess_fingerprint = 0;
    std::variant<svm::SvmModel, logistic::LogisticBaseline> model;
    std::string config_echo;

    bool is_svm() const { return std::holds_alternative<svm::SvmModel>(model); }

    std::string model_id() const {
        if (const auto* m = std::get_if<svm::SvmModel>(&model)) return "svm-" + std::string(svm::to_string(m->kernel.kind));
        return "logistic";
    }

    double decision_value(const SparseVector& x) const {
        return std::visit([&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, svm::SvmModel>) return svm::decision_value(m, x);
            else return logistic::decision_value(m, x);
        }, model);
    }

    double decision_value(const text::TokenSequence& tokens) const {
        return decision_value(vectorize_document(tokens, vocabulary, scheme).values);
    }
};

inline std::string fingerprint_hex(std::uint64_t fp) {
    char buf[17];
    auto [p, ec] = std::to_chars(buf, buf + 16, fp, 16);
    std::string s(buf, p);
    return std::string(16 - s.size(), '0') + s;
}

namespace detail {

// Hex-float text is exact, so decision values survive a round trip bit for bit.
inline std::string hexf(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::hex);
    return std::string(buf, p);
}

class BundleReader {
public:
    explicit BundleReader(std::string text) : text_(std::move(text)) {}

    [[noreturn]] void corrupt(const std::string& what) const {
        throw CorruptModelError("corrupt model bundle (line " + std::to_string(line_) + "): " + what);
    }

    std::string_view line() {
        if (pos_ >= text_.size()) corrupt("unexpected end of file");
        auto end = text_.find('\n', pos_);
        if (end == std::string::npos) corrupt("unexpected end of file");
        std::string_view out(text_.data() + pos_, end - pos_);
        pos_ = end + 1;
        ++line_;
        return out;
    }

    /// Reads "key rest" and returns rest.
    std::string_view keyed(std::string_view key) {
        std::string_view l = line();
        if (l.substr(0, key.size()) != key || (l.size() > key.size() && l[key.size()] != ' '))
            corrupt("expected '" + std::string(key) + "'");
        return l.size() > key.size() ? l.substr(key.size() + 1) : std::string_view{};
    }

    std::string_view raw(std::size_t n) {
        if (pos_ + n > text_.size()) corrupt("unexpected end of file");
        std::string_view out(text_.data() + pos_, n);
        pos_ += n;
        for (char c : out)
            if (c == '\n') ++line_;
        return out;
    }

    template <class T>
    T integer(std::string_view s) {
        T v{};
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size()) corrupt("bad integer '" + std::string(s) + "'");
        return v;
    }

    double real(std::string_view s) {
        double v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::hex);
        if (ec != std::errc() || p != s.data() + s.size()) corrupt("bad number '" + std::string(s) + "'");
        return v;
    }

    std::vector<std::string_view> fields(std::string_view s, std::size_t expected) {
        std::vector<std::string_view> out;
        std::size_t b = 0;
        while (b <= s.size()) {
            auto e = s.find(' ', b);
            if (e == std::string_view::npos) e = s.size();
            out.push_back(s.substr(b, e - b));
            b = e + 1;
        }
        if (expected && out.size() != expected) corrupt("expected " + std::to_string(expected) + " fields");
        return out;
    }

    bool at_end() const { return pos_ == text_.size(); }

private:
    std::string text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 0;
};

}  // namespace detail

inline std::string serialize_model(const ModelBundle& b) {
    using detail::hexf;
    std::ostringstream out;
    const auto& v = b.vocabulary;
    out << kModelMagic << ' ' << b.version << '\n';
    out << "preprocess " << fingerprint_hex(b.preprocess_fingerprint) << '\n';
    out << "scheme " << to_string(b.scheme) << '\n';
    out << "ngram " << v.ngram_range().lo << ' ' << v.ngram_range().hi << '\n';
    out << "min_df " << v.min_df() << '\n';
    out << "n_docs " << v.n_docs() << '\n';
    out << "vocabulary " << v.size() << '\n';
    for (std::size_t i = 0; i < v.size(); ++i) out << v.document_frequencies()[i] << ' ' << v.terms()[i] << '\n';

    auto write_sparse = [&](const SparseVector& x) {
        out << x.nnz();
        for (std::size_t k = 0; k < x.nnz(); ++k) out << ' ' << x.indices()[k] << ':' << hexf(x.values()[k]);
    };

    if (const auto* m = std::get_if<svm::SvmModel>(&b.model)) {
        out << "model svm\n";
        out << "kernel " << svm::to_string(m->kernel.kind) << ' ' << hexf(m->kernel.gamma) << ' ' << m->kernel.degree << ' '
            << hexf(m->kernel.coef0) << '\n';
        out << "dim " << m->dim << '\n';
        out << "bias " << hexf(m->bias) << '\n';
        out << "training " << hexf(m->info.objective) << ' ' << m->info.iterations << ' ' << (m->info.converged ? 1 : 0)
            << ' ' << hexf(m->info.final_gap) << ' ' << m->info.n_train << ' ' << hexf(m->info.c_positive) << ' '
            << hexf(m->info.c_negative) << '\n';
        out << "support_vectors " << m->support_vectors.size() << '\n';
        for (std::size_t s = 0; s < m->support_vectors.size(); ++s) {
            out << m->labels[s] << ' ' << hexf(m->multipliers[s]) << ' ' << hexf(m->coefficients[s]) << ' ';
            write_sparse(m->support_vectors[s]);
            out << '\n';
        }
    } else {
        const auto& l = std::get<logistic::LogisticBaseline>(b.model);
        out << "model logistic\n";
        out << "dim " << l.weights.size() << '\n';
        out << "bias " << hexf(l.bias) << '\n';
        out << "training " << hexf(l.learning_rate) << ' ' << l.epochs << ' ' << l.seed << '\n';
        out << "weights ";
        write_sparse(SparseVector::from_dense(l.weights));
        out << '\n';
    }
    out << "config " << b.config_echo.size() << '\n' << b.config_echo << '\n';
    out << "end\n";
    return out.str();
}

inline ModelBundle parse_model(std::string text) {
    detail::BundleReader r(std::move(text));
    ModelBundle b;

    {
        const auto head = r.fields(r.line(), 0);
        if (head.size() != 2 || head[0] != kModelMagic) r.corrupt("not a model bundle");
        const int version = r.integer<int>(head[1]);
        if (version != kModelFormatVersion)
            throw VersionMismatchError("model format version " + std::to_string(version) + " is not supported (expected " +
                                       std::to_string(kModelFormatVersion) + ")");
        b.version = version;
    }
    b.preprocess_fingerprint = [&] {
        const auto s = r.keyed("preprocess");
        std::uint64_t fp = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), fp, 16);
        if (ec != std::errc() || p != s.data() + s.size() || s.size() != 16) r.corrupt("bad fingerprint");
        return fp;
    }();
    try {
        b.scheme = parse_weighting_scheme(r.keyed("scheme"));
    } catch (const ValidationError&) {
        r.corrupt("unknown weighting scheme");
    }
    const auto ng = r.fields(r.keyed("ngram"), 2);
    const NgramRange range{r.integer<std::size_t>(ng[0]), r.integer<std::size_t>(ng[1])};
    const auto min_df = r.integer<std::size_t>(r.keyed("min_df"));
    const auto n_docs = r.integer<std::size_t>(r.keyed("n_docs"));
    const auto vsize = r.integer<std::size_t>(r.keyed("vocabulary"));
    std::vector<std::string> terms;
    std::vector<std::size_t> dfs;
    for (std::size_t i = 0; i < vsize; ++i) {
        const auto l = r.line();
        const auto sp = l.find(' ');
        if (sp == std::string_view::npos || sp + 1 == l.size()) r.corrupt("bad vocabulary entry");
        dfs.push_back(r.integer<std::size_t>(l.substr(0, sp)));
        terms.emplace_back(l.substr(sp + 1));
    }
    try {
        b.vocabulary = Vocabulary(std::move(terms), std::move(dfs), n_docs, range, min_df);
    } catch (const ValidationError& e) {
        r.corrupt(e.what());
    }

    auto read_sparse = [&](const std::vector<std::string_view>& f, std::size_t first, std::size_t dim) {
        const auto nnz = r.integer<std::size_t>(f.at(first));
        if (f.size() != first + 1 + nnz) r.corrupt("sparse vector length mismatch");
        std::vector<std::uint32_t> idx;
        std::vector<double> val;
        for (std::size_t k = 0; k < nnz; ++k) {
            const auto item = f[first + 1 + k];
            const auto colon = item.find(':');
            if (colon == std::string_view::npos) r.corrupt("bad sparse entry");
            idx.push_back(r.integer<std::uint32_t>(item.substr(0, colon)));
            val.push_back(r.real(item.substr(colon + 1)));
        }
        try {
            return SparseVector(dim, std::move(idx), std::move(val));
        } catch (const ValidationError& e) {
            r.corrupt(e.what());
        }
    };

    const auto kind = r.keyed("model");
    if (kind == "svm") {
        svm::SvmModel m;
        const auto k = r.fields(r.keyed("kernel"), 4);
        try {
            m.kernel.kind = svm::parse_kernel_kind(k[0]);
        } catch (const ValidationError&) {
            r.corrupt("unknown kernel");
        }
        m.kernel.gamma = r.real(k[1]);
        m.kernel.degree = r.integer<int>(k[2]);
        m.kernel.coef0 = r.real(k[3]);
        m.dim = r.integer<std::size_t>(r.keyed("dim"));
        m.bias = r.real(r.keyed("bias"));
        const auto t = r.fields(r.keyed("training"), 7);
        m.info.objective = r.real(t[0]);
        m.info.iterations = r.integer<std::size_t>(t[1]);
        m.info.converged = r.integer<int>(t[2]) != 0;
        m.info.final_gap = r.real(t[3]);
        m.info.n_train = r.integer<std::size_t>(t[4]);
        m.info.c_positive = r.real(t[5]);
        m.info.c_negative = r.real(t[6]);
        const auto nsv = r.integer<std::size_t>(r.keyed("support_vectors"));
        for (std::size_t s = 0; s < nsv; ++s) {
            const auto f = r.fields(r.line(), 0);
            if (f.size() < 4) r.corrupt("bad support vector");
            const int y = r.integer<int>(f[0]);
            if (y != 1 && y != -1) r.corrupt("bad support vector label");
            m.labels.push_back(y);
            m.multipliers.push_back(r.real(f[1]));
            m.coefficients.push_back(r.real(f[2]));
            m.support_vectors.push_back(read_sparse(f, 3, m.dim));
        }
        b.model = std::move(m);
    } else if (kind == "logistic") {
        logistic::LogisticBaseline l;
        const auto dim = r.integer<std::size_t>(r.keyed("dim"));
        l.bias = r.real(r.keyed("bias"));
        const auto t = r.fields(r.keyed("training"), 3);
        l.learning_rate = r.real(t[0]);
        l.epochs = r.integer<std::size_t>(t[1]);
        l.seed = r.integer<std::uint64_t>(t[2]);
        l.weights = read_sparse(r.fields(r.keyed("weights"), 0), 0, dim).to_dense();
        b.model = std::move(l);
    } else {
        r.corrupt("unknown model kind '" + std::string(kind) + "'");
    }
    const auto echo_size = r.integer<std::size_t>(r.keyed("config"));
    b.config_echo = std::string(r.raw(echo_size));
    if (r.line() != "") r.corrupt("config echo length mismatch");
    if (r.line() != "end") r.corrupt("missing end marker");
    if (!r.at_end()) r.corrupt("trailing data after end marker");

    const std::size_t dim = b.is_svm() ? std::get<svm::SvmModel>(b.model).dim
                                       : std::get<logistic::LogisticBaseline>(b.model).weights.size();
    if (dim != b.vocabulary.size()) r.corrupt("model dimension does not match vocabulary");
    return b;
}

inline void save_model(const ModelBundle& bundle, const std::string& path) { csv::write_file(path, serialize_model(bundle)); }

/// Loads a bundle; when `expected_fingerprint` is given it must match the
/// preprocessing fingerprint recorded at training time.
inline ModelBundle load_model(const std::string& path, std::optional<std::uint64_t> expected_fingerprint = std::nullopt) {
    ModelBundle b = parse_model(csv::read_file(path));
    if (expected_fingerprint && *expected_fingerprint != b.preprocess_fingerprint)
        throw FingerprintMismatchError("preprocessing fingerprint " + fingerprint_hex(*expected_fingerprint) +
                                       " does not match the model's " + fingerprint_hex(b.preprocess_fingerprint) +
                                       " (stoplist or negation lexicon changed since training)");
    return b;
}

}  // namespace revsent
