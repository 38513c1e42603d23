#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "revsent/balance.hpp"
#include "revsent/config.hpp"
#include "revsent/corpus.hpp"
#include "revsent/eval.hpp"
#include "revsent/logistic.hpp"
#include "revsent/model_io.hpp"
#include "revsent/random.hpp"
#include "revsent/report.hpp"
#include "revsent/svm.hpp"
#include "revsent/text.hpp"
#include "revsent/vectorize.hpp"

namespace revsent::pipeline {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNonConvergence = 4;

enum class CorpusSource { Csv, Synthetic };
enum class ModelChoice { Svm, Logistic };
enum class WeightMode { None, InverseFrequency, Explicit };

struct PipelineConfig {
    std::uint64_t seed = 0;

    CorpusSource source = CorpusSource::Synthetic;
    std::filesystem::path corpus_path;
    SyntheticCorpusSpec synthetic;

    // Empty paths select the built-in lists.
    std::filesystem::path stoplist_path;
    std::filesystem::path triggers_path;
    std::filesystem::path terminators_path;

    NgramRange ngram{1, 2};
    std::size_t min_df = 1;
    WeightingScheme scheme = WeightingScheme::TfIdf;

    SplitSpec split;

    bool balance = true;
    std::size_t k = 5;
    std::optional<double> rate;  // nullopt: bring the minority up to the majority
    balance::InterpolationMode mode = balance::InterpolationMode::Standard;

    ModelChoice model = ModelChoice::Svm;
    svm::TrainSpec train;
    WeightMode weights = WeightMode::InverseFrequency;
    svm::KernelSpec kernel;
    bool fatal_nonconvergence = false;
    logistic::LogisticSpec logistic;

    std::filesystem::path out_dir = "out";

    /// Config file bytes plus any command-line overrides; hashed into the
    /// report fingerprint and stored in the model bundle.
    std::string echo;

    std::uint64_t stage_seed(std::string_view stage) const { return derive_seed(seed, stage); }

    std::string fingerprint() const { return fingerprint_hex(fnv1a64(echo)); }

    void set_seed(std::uint64_t s) {
        seed = s;
        echo += "# override seed = " + std::to_string(s) + "\n";
    }

    void set_balance(bool on) {
        balance = on;
        echo += std::string("# override balance = ") + (on ? "true" : "false") + "\n";
    }
};

namespace detail {

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    if (p.empty()) return {};
    std::filesystem::path path(p);
    if (path.is_relative()) path = base / path;
    path = path.lexically_normal();
    if (!std::filesystem::exists(path)) throw ConfigError("referenced path does not exist: " + path.string());
    return path;
}

}  // namespace detail

/// Builds a config from parsed TOML. Relative paths resolve against
/// `base_dir`. Unknown keys are rejected so that typos do not silently fall
/// back to defaults.
inline PipelineConfig parse_config(const config::Table& t, const std::filesystem::path& base_dir, std::string echo) {
    PipelineConfig c;
    c.echo = std::move(echo);
    try {
        c.seed = t.get_uint("seed", 0);

        const std::string source = t.get_string("corpus.source", "synthetic");
        if (source == "csv") {
            c.source = CorpusSource::Csv;
            const std::string p = t.get_string("corpus.path");
            if (p.empty()) throw ConfigError("corpus.path is required when corpus.source = \"csv\"");
            c.corpus_path = detail::resolve(base_dir, p);
        } else if (source == "synthetic") {
            c.source = CorpusSource::Synthetic;
            auto& s = c.synthetic;
            s.total = t.get_uint("synthetic.total", s.total);
            s.minority_fraction = t.get_double("synthetic.minority_fraction", s.minority_fraction);
            s.noise_rate = t.get_double("synthetic.noise_rate", s.noise_rate);
            s.neutral_rate = t.get_double("synthetic.neutral_rate", s.neutral_rate);
            s.words_min = t.get_uint("synthetic.words_min", s.words_min);
            s.words_max = t.get_uint("synthetic.words_max", s.words_max);
            s.positive_lexicon = t.get_string_array("synthetic.positive_lexicon");
            s.negative_lexicon = t.get_string_array("synthetic.negative_lexicon");
            s.neutral_lexicon = t.get_string_array("synthetic.neutral_lexicon");
            s.validate();
        } else {
            throw ConfigError("corpus.source must be \"csv\" or \"synthetic\", got \"" + source + "\"");
        }

        c.stoplist_path = detail::resolve(base_dir, t.get_string("preprocess.stoplist"));
        c.triggers_path = detail::resolve(base_dir, t.get_string("preprocess.negation_triggers"));
        c.terminators_path = detail::resolve(base_dir, t.get_string("preprocess.scope_terminators"));

        c.ngram.lo = t.get_uint("vectorize.ngram_min", c.ngram.lo);
        c.ngram.hi = t.get_uint("vectorize.ngram_max", c.ngram.hi);
        c.ngram.validate();
        c.min_df = t.get_uint("vectorize.min_df", c.min_df);
        if (c.min_df < 1) throw ConfigError("vectorize.min_df must be at least 1");
        c.scheme = parse_weighting_scheme(t.get_string("vectorize.scheme", "tfidf"));

        if (t.has("split.test_count")) {
            c.split.test_count = t.get_uint("split.test_count", 0);
            c.split.test_fraction.reset();
        } else {
            c.split.test_fraction = t.get_double("split.test_fraction", 0.3);
        }
        c.split.stratified = t.get_bool("split.stratified", true);

        c.balance = t.get_bool("balance.enabled", c.balance);
        c.k = t.get_uint("balance.k", c.k);
        if (c.k < 1) throw ConfigError("balance.k must be at least 1");
        if (t.has("balance.rate")) {
            bool is_text = false;
            try {
                const std::string r = t.get_string("balance.rate");
                is_text = true;
                if (r != "to-balance") throw ConfigError("balance.rate must be a number or \"to-balance\"");
            } catch (const ConfigError&) {
                if (is_text) throw;
                c.rate = t.get_double("balance.rate", 1.0);
                if (!(*c.rate > 0.0)) throw ConfigError("balance.rate must be positive");
            }
        }
        c.mode = balance::parse_interpolation_mode(t.get_string("balance.mode", "standard"));

        const std::string model = t.get_string("model.type", "svm");
        if (model == "svm") c.model = ModelChoice::Svm;
        else if (model == "logistic") c.model = ModelChoice::Logistic;
        else throw ConfigError("model.type must be \"svm\" or \"logistic\", got \"" + model + "\"");

        auto& tr = c.train;
        tr.C = t.get_double("svm.C", tr.C);
        tr.tolerance = t.get_double("svm.tolerance", tr.tolerance);
        tr.max_iterations = t.get_uint("svm.max_iterations", tr.max_iterations);
        tr.full_gram_limit = t.get_uint("svm.full_gram_limit", tr.full_gram_limit);
        tr.cache_mb = t.get_uint("svm.cache_mb", tr.cache_mb);
        c.fatal_nonconvergence = t.get_bool("svm.fatal_nonconvergence", false);
        if (t.is_array("svm.class_weights")) {
            const auto w = t.get_number_array("svm.class_weights");
            if (w.size() != 2) throw ConfigError("svm.class_weights array must be [positive, negative]");
            c.weights = WeightMode::Explicit;
            tr.class_weights = {w[0], w[1]};
        } else {
            const std::string w = t.get_string("svm.class_weights", "inverse-frequency");
            if (w == "inverse-frequency") c.weights = WeightMode::InverseFrequency;
            else if (w == "none") c.weights = WeightMode::None;
            else throw ConfigError("svm.class_weights must be \"inverse-frequency\", \"none\" or [wp, wn]");
        }
        c.kernel.kind = svm::parse_kernel_kind(t.get_string("svm.kernel", "linear"));
        c.kernel.gamma = t.get_double("svm.gamma", c.kernel.gamma);
        c.kernel.degree = static_cast<int>(t.get_int("svm.degree", c.kernel.degree));
        c.kernel.coef0 = t.get_double("svm.coef0", c.kernel.coef0);
        c.kernel.validate();
        tr.validate();

        c.logistic.learning_rate = t.get_double("logistic.learning_rate", c.logistic.learning_rate);
        c.logistic.epochs = t.get_uint("logistic.epochs", c.logistic.epochs);

        const std::string out = t.get_string("output.dir");
        if (!out.empty()) c.out_dir = std::filesystem::path(out).is_relative() ? base_dir / out : std::filesystem::path(out);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    const auto unused = t.unused_keys();
    if (!unused.empty()) {
        std::string list;
        for (const auto& k : unused) list += (list.empty() ? "" : ", ") + k;
        throw ConfigError("unknown config keys: " + list);
    }
    return c;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = csv::read_file(path.string());
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    config::Table t;
    try {
        t = config::Table::parse(text);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(t, path.parent_path(), std::move(text));
}

inline text::Preprocessor make_preprocessor(const PipelineConfig& c) {
    text::NegationLexicon lexicon;
    if (!c.triggers_path.empty()) {
        const auto words = text::read_word_list(c.triggers_path.string());
        lexicon.triggers = {words.begin(), words.end()};
    }
    if (!c.terminators_path.empty()) {
        const auto words = text::read_word_list(c.terminators_path.string());
        lexicon.scope_terminators = {words.begin(), words.end()};
    }
    const auto stopwords =
        c.stoplist_path.empty() ? text::default_stopwords() : text::read_word_list(c.stoplist_path.string());
    return text::Preprocessor(stopwords, std::move(lexicon));
}

struct RunResult {
    eval::MetricsReport report;
    eval::RocCurve roc;
    ModelBundle bundle;
    ClassCounts train_counts;
    ClassCounts test_counts;
    std::vector<std::size_t> test_ids;
    std::string log;
};

namespace detail {

/// Runs one stage, tagging any library error with the stage name and the
/// exit code the CLI should report.
template <class F>
auto stage(std::string_view name, F&& body) {
    try {
        return body();
    } catch (const StageError&) {
        throw;
    } catch (const ConfigError& e) {
        throw StageError(std::string(name), e.what(), kExitConfig);
    } catch (const NonConvergenceError& e) {
        throw StageError(std::string(name), e.what(), kExitNonConvergence);
    } catch (const Error& e) {
        throw StageError(std::string(name), e.what(), kExitData);
    }
}

}  // namespace detail

/// Load or generate, split, preprocess, build the vocabulary on the training
/// split only, vectorize, optionally oversample the training vectors, train,
/// and score the test split. Writes nothing to disk.
inline RunResult run_pipeline(const PipelineConfig& cfg) {
    RunResult out;
    std::ostringstream log;
    log << "config_fingerprint " << cfg.fingerprint() << "\n";
    log << "seed " << cfg.seed << "\n";

    const Corpus corpus = detail::stage("corpus", [&] {
        if (cfg.source == CorpusSource::Csv) return load_corpus_csv(cfg.corpus_path.string());
        SyntheticCorpusSpec spec = cfg.synthetic;
        spec.seed = cfg.stage_seed("corpus");
        return generate_synthetic_corpus(spec);
    });
    const ClassCounts all = count_classes(corpus);
    log << "corpus documents=" << corpus.size() << " positive=" << all.positive << " negative=" << all.negative << "\n";

    const TrainTestSplit parts = detail::stage("split", [&] {
        SplitSpec spec = cfg.split;
        spec.seed = cfg.stage_seed("split");
        return split(corpus, spec);
    });
    out.train_counts = count_classes(parts.train);
    out.test_counts = count_classes(parts.test);
    for (const auto& d : parts.test) out.test_ids.push_back(d.id);
    log << "split train=" << parts.train.size() << " (" << out.train_counts.positive << "/" << out.train_counts.negative
        << ") test=" << parts.test.size() << " (" << out.test_counts.positive << "/" << out.test_counts.negative << ")\n";

    const text::Preprocessor pre = detail::stage("preprocess", [&] { return make_preprocessor(cfg); });
    auto tokens_of = [&](const Corpus& docs) {
        std::vector<text::TokenSequence> t;
        t.reserve(docs.size());
        for (const auto& d : docs) t.push_back(pre(d.body));
        return t;
    };
    const auto train_tokens = detail::stage("preprocess", [&] { return tokens_of(parts.train); });
    const auto test_tokens = detail::stage("preprocess", [&] { return tokens_of(parts.test); });
    log << "preprocess fingerprint=" << fingerprint_hex(pre.fingerprint()) << "\n";

    Vocabulary vocab = detail::stage("vectorize", [&] { return Vocabulary::build(train_tokens, cfg.ngram, cfg.min_df); });
    auto train_x = detail::stage("vectorize", [&] { return vectorize_all(train_tokens, vocab, cfg.scheme); });
    const auto test_x = detail::stage("vectorize", [&] { return vectorize_all(test_tokens, vocab, cfg.scheme); });
    log << "vectorize terms=" << vocab.size() << " scheme=" << to_string(cfg.scheme) << "\n";

    std::vector<int> train_y;
    for (const auto& d : parts.train) train_y.push_back(sign_of(d.label));

    std::size_t synthetic = 0;
    if (cfg.balance) {
        detail::stage("balance", [&] {
            const bool neg_minority = out.train_counts.negative <= out.train_counts.positive;
            const int minority_label = neg_minority ? -1 : 1;
            const std::size_t minority = neg_minority ? out.train_counts.negative : out.train_counts.positive;
            const std::size_t majority = neg_minority ? out.train_counts.positive : out.train_counts.negative;
            const double rate = cfg.rate ? *cfg.rate : balance::rate_to_balance(minority, majority);
            if (balance::synthetic_count(rate, minority) == 0) return;
            std::vector<SparseVector> pool;
            for (std::size_t i = 0; i < train_x.size(); ++i)
                if (train_y[i] == minority_label) pool.push_back(train_x[i]);
            const auto samples = balance::oversample(pool, {cfg.k, rate, cfg.mode, cfg.stage_seed("balance")});
            for (const auto& s : samples) {
                train_x.push_back(s.vector);
                train_y.push_back(minority_label);
            }
            synthetic = samples.size();
        });
    }
    log << "balance enabled=" << (cfg.balance ? "true" : "false") << " synthetic=" << synthetic << "\n";

    ModelBundle bundle;
    bundle.scheme = cfg.scheme;
    bundle.preprocess_fingerprint = pre.fingerprint();
    bundle.config_echo = cfg.echo;
    detail::stage("train", [&] {
        if (cfg.model == ModelChoice::Logistic) {
            logistic::LogisticSpec spec = cfg.logistic;
            spec.seed = cfg.stage_seed("train");
            bundle.model = logistic::train_logistic_baseline(train_x, train_y, spec);
            log << "train model=logistic epochs=" << spec.epochs << "\n";
            return;
        }
        svm::TrainSpec spec = cfg.train;
        spec.seed = cfg.stage_seed("train");
        if (cfg.weights == WeightMode::InverseFrequency) spec.class_weights = svm::inverse_frequency_weights(train_y);
        else if (cfg.weights == WeightMode::None) spec.class_weights = {};
        svm::SvmModel m = svm::train_svm(train_x, train_y, spec, cfg.kernel);
        log << "train model=svm kernel=" << svm::to_string(cfg.kernel.kind) << " C+=" << report::format_double(m.info.c_positive)
            << " C-=" << report::format_double(m.info.c_negative) << " iterations=" << m.info.iterations
            << " converged=" << (m.info.converged ? "true" : "false") << " n=" << m.info.n_train
            << " support_vectors=" << m.support_vectors.size()
            << "\n";
        if (!m.info.converged && cfg.fatal_nonconvergence)
            throw NonConvergenceError("solver hit max_iterations=" + std::to_string(spec.max_iterations) +
                                      " with gap " + report::format_double(m.info.final_gap));
        bundle.model = std::move(m);
    });
    bundle.vocabulary = std::move(vocab);

    detail::stage("evaluate", [&] {
        std::vector<double> scores;
        std::vector<Sentiment> preds, truths;
        for (std::size_t i = 0; i < test_x.size(); ++i) {
            const double f = bundle.decision_value(test_x[i]);
            scores.push_back(f);
            preds.push_back(f >= 0.0 ? Sentiment::Positive : Sentiment::Negative);
            truths.push_back(parts.test[i].label);
        }
        out.report = eval::make_report(preds, scores, truths);
        out.roc = eval::roc_curve(scores, truths);
    });
    out.report.model = bundle.model_id();
    out.report.config_fingerprint = cfg.fingerprint();
    out.report.train_size = parts.train.size();
    out.report.synthetic_samples = synthetic;
    log << "evaluate accuracy=" << report::format_double(out.report.accuracy)
        << " minority_recall=" << report::format_double(out.report.minority.recall)
        << " auc=" << report::format_double(out.report.auc) << "\n";

    out.bundle = std::move(bundle);
    out.log = log.str();
    return out;
}

/// metrics.json, roc.csv, model.bundle and run.log under `dir`.
inline void write_artifacts(const RunResult& r, const std::filesystem::path& dir) {
    detail::stage("output", [&] {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoError(dir.string(), "cannot create output directory");
        csv::write_file((dir / "metrics.json").string(), report::metrics_json(r.report));
        csv::write_file((dir / "roc.csv").string(), report::roc_csv(r.roc));
        save_model(r.bundle, (dir / "model.bundle").string());
        csv::write_file((dir / "run.log").string(), r.log);
    });
}

struct Evaluation {
    eval::MetricsReport report;
    eval::RocCurve roc;
};

/// Scores a saved model on a labeled corpus.
inline Evaluation evaluate_bundle(const ModelBundle& bundle, const text::Preprocessor& pre, const Corpus& corpus) {
    std::vector<double> scores;
    std::vector<Sentiment> preds, truths;
    for (const auto& d : corpus) {
        const double f = bundle.decision_value(pre(d.body));
        scores.push_back(f);
        preds.push_back(f >= 0.0 ? Sentiment::Positive : Sentiment::Negative);
        truths.push_back(d.label);
    }
    Evaluation e{eval::make_report(preds, scores, truths), eval::roc_curve(scores, truths)};
    e.report.model = bundle.model_id();
    e.report.config_fingerprint = fingerprint_hex(fnv1a64(bundle.config_echo));
    return e;
}

/// Writes "row,label,decision_value" for every data row of a CSV with a
/// Review column, flushing after each row. Returns the number of rows.
inline std::size_t predict_csv(const ModelBundle& bundle, const text::Preprocessor& pre, std::string_view csv_text,
                               std::ostream& out) {
    const auto rows = csv::parse(csv_text);
    if (rows.empty()) return 0;
    const std::size_t col = csv::column_index(rows.front(), "Review");
    if (col == static_cast<std::size_t>(-1)) throw ValidationError("input CSV has no 'Review' column");
    out << "row,label,decision_value\n";
    std::size_t n = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() == 1 && row[0].empty()) continue;
        if (col >= row.size()) throw ParseError("row " + std::to_string(r + 1) + " has no Review field");
        const double f = bundle.decision_value(pre(row[col]));
        out << n << ',' << to_string(f >= 0.0 ? Sentiment::Positive : Sentiment::Negative) << ','
            << report::format_double(f) << '\n'
            << std::flush;
        ++n;
    }
    return n;
}

}  // namespace revsent::pipeline
