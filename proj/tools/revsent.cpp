#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "revsent.hpp"

namespace fs = std::filesystem;
using namespace revsent;

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string balance;
    bool quiet = false;

    std::string fixtures;
    std::string selectors;
    std::string model;
    std::string input;
};

pipeline::PipelineConfig load_with_overrides(const Options& o) {
    auto cfg = pipeline::load_config(o.config);
    if (o.seed) cfg.set_seed(*o.seed);
    if (o.balance == "on") cfg.set_balance(true);
    else if (o.balance == "off") cfg.set_balance(false);
    if (!o.out.empty()) cfg.out_dir = o.out;
    return cfg;
}

extract::PageSelectors load_selectors(const std::string& path) {
    extract::PageSelectors s;
    if (path.empty()) return s;
    const auto t = config::Table::load(path);
    s.review_container = t.get_string("selectors.review_container", s.review_container);
    s.bubble_class_prefix = t.get_string("selectors.bubble_class_prefix", s.bubble_class_prefix);
    s.date_class = t.get_string("selectors.date_class", s.date_class);
    s.title_class = t.get_string("selectors.title_class", s.title_class);
    s.body_class = t.get_string("selectors.body_class", s.body_class);
    if (const auto unused = t.unused_keys(); !unused.empty())
        throw ConfigError(path + ": unknown key '" + unused.front() + "'");
    try {
        s.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return s;
}

text::Preprocessor preprocessor_for(const Options& o) {
    if (o.config.empty()) return text::Preprocessor{};
    return pipeline::make_preprocessor(pipeline::load_config(o.config));
}

int cmd_extract(const Options& o) {
    const auto selectors = load_selectors(o.selectors);
    const auto result = extract::parse_fixture_directory(o.fixtures, selectors);
    const auto n = extract::write_corpus_csv(result.reviews, o.out);
    if (!o.quiet)
        std::cerr << "extracted " << n << " reviews from " << result.pages << " pages (" << result.skipped
                  << " blocks skipped) -> " << o.out << "\n";
    return 0;
}

int cmd_gen_synthetic(const Options& o) {
    const auto cfg = load_with_overrides(o);
    if (cfg.source != pipeline::CorpusSource::Synthetic) throw ConfigError("config does not describe a synthetic corpus");
    auto spec = cfg.synthetic;
    spec.seed = cfg.stage_seed("corpus");
    const Corpus corpus = generate_synthetic_corpus(spec);
    csv::write_file(o.out, corpus_csv_text(corpus));
    if (!o.quiet) std::cerr << "wrote " << corpus.size() << " reviews -> " << o.out << "\n";
    return 0;
}

void print_summary(const pipeline::RunResult& r, const fs::path& dir) {
    std::cerr << r.log;
    std::cerr << "artifacts -> " << dir.string() << "\n";
}

int cmd_train(const Options& o) {
    const auto cfg = load_with_overrides(o);
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = pipeline::run_pipeline(cfg);
    pipeline::write_artifacts(r, cfg.out_dir);
    if (!o.quiet) {
        print_summary(r, cfg.out_dir);
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        std::cerr << "elapsed " << std::fixed << std::setprecision(2) << dt.count() << " s\n";
    }
    return 0;
}

int cmd_evaluate(const Options& o) {
    const auto pre = preprocessor_for(o);
    const auto bundle = load_model(o.model, pre.fingerprint());
    const Corpus corpus = load_corpus_csv(o.input);
    const auto e = pipeline::evaluate_bundle(bundle, pre, corpus);
    if (!o.out.empty()) {
        fs::create_directories(o.out);
        csv::write_file((fs::path(o.out) / "metrics.json").string(), report::metrics_json(e.report));
        csv::write_file((fs::path(o.out) / "roc.csv").string(), report::roc_csv(e.roc));
    }
    if (!o.quiet) std::cout << report::metrics_json(e.report);
    return 0;
}

int cmd_predict(const Options& o) {
    const auto pre = preprocessor_for(o);
    const auto bundle = load_model(o.model, pre.fingerprint());
    const std::string text = csv::read_file(o.input);
    if (o.out.empty()) {
        pipeline::predict_csv(bundle, pre, text, std::cout);
        return 0;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw IoError(o.out, "cannot open for writing");
    const auto n = pipeline::predict_csv(bundle, pre, text, f);
    if (!o.quiet) std::cerr << "predicted " << n << " rows -> " << o.out << "\n";
    return 0;
}

int cmd_compare(const Options& o) {
    auto base = load_with_overrides(o);
    const fs::path root = base.out_dir;
    auto on = base, off = base;
    on.set_balance(true);
    off.set_balance(false);
    const auto r_off = pipeline::run_pipeline(off);
    pipeline::write_artifacts(r_off, root / "unbalanced");
    const auto r_on = pipeline::run_pipeline(on);
    pipeline::write_artifacts(r_on, root / "balanced");

    struct Row {
        const char* name;
        double off, on;
    };
    const Row rows[] = {
        {"accuracy", r_off.report.accuracy, r_on.report.accuracy},
        {"precision", r_off.report.positive.precision, r_on.report.positive.precision},
        {"recall", r_off.report.positive.recall, r_on.report.positive.recall},
        {"f1", r_off.report.positive.f1, r_on.report.positive.f1},
        {"minority_precision", r_off.report.minority.precision, r_on.report.minority.precision},
        {"minority_recall", r_off.report.minority.recall, r_on.report.minority.recall},
        {"minority_f1", r_off.report.minority.f1, r_on.report.minority.f1},
        {"auc", r_off.report.auc, r_on.report.auc},
    };
    std::cout << std::left << std::setw(20) << "metric" << std::right << std::setw(12) << "unbalanced" << std::setw(12)
              << "balanced" << std::setw(12) << "delta" << "\n";
    std::cout << std::fixed << std::setprecision(4);
    for (const auto& r : rows)
        std::cout << std::left << std::setw(20) << r.name << std::right << std::setw(12) << r.off << std::setw(12) << r.on
                  << std::setw(12) << std::showpos << (r.on - r.off) << std::noshowpos << "\n";
    std::cout << std::left << std::setw(20) << "synthetic_samples" << std::right << std::setw(12)
              << r_off.report.synthetic_samples << std::setw(12) << r_on.report.synthetic_samples << "\n";
    if (!o.quiet) std::cerr << "artifacts -> " << root.string() << "/{balanced,unbalanced}\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Review sentiment pipeline: extract, train, evaluate, predict"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", o.config, "Pipeline config (TOML)")->check(CLI::ExistingFile);
        if (needs_config) c->required();
        sub->add_option("--seed", o.seed, "Global seed (overrides the config)");
        sub->add_flag("--quiet", o.quiet, "Suppress progress output");
    };

    auto* extract_cmd = app.add_subcommand("extract", "Parse saved review pages into a CSV corpus");
    extract_cmd->add_option("--fixtures", o.fixtures, "Directory of .html pages")->required()->check(CLI::ExistingDirectory);
    extract_cmd->add_option("--selectors", o.selectors, "Selector config (TOML)")->check(CLI::ExistingFile);
    extract_cmd->add_option("--out", o.out, "Output CSV")->required();
    extract_cmd->add_flag("--quiet", o.quiet, "Suppress progress output");

    auto* gen_cmd = app.add_subcommand("gen-synthetic", "Write the synthetic corpus described by a config");
    add_common(gen_cmd, true);
    gen_cmd->add_option("--out", o.out, "Output CSV")->required();

    auto* train_cmd = app.add_subcommand("train", "Run the full pipeline and write artifacts");
    add_common(train_cmd, true);
    train_cmd->add_option("--out", o.out, "Output directory (overrides the config)");
    train_cmd->add_option("--balance", o.balance, "Oversample the minority class")->check(CLI::IsMember({"on", "off"}));

    auto* eval_cmd = app.add_subcommand("evaluate", "Score a saved model on a labeled CSV");
    add_common(eval_cmd, false);
    eval_cmd->add_option("--model", o.model, "model.bundle")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--input", o.input, "Labeled CSV (Score, Review)")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--out", o.out, "Directory for metrics.json and roc.csv");

    auto* predict_cmd = app.add_subcommand("predict", "Label each row of a CSV with a Review column");
    add_common(predict_cmd, false);
    predict_cmd->add_option("--model", o.model, "model.bundle")->required()->check(CLI::ExistingFile);
    predict_cmd->add_option("--input", o.input, "CSV with a Review column")->required()->check(CLI::ExistingFile);
    predict_cmd->add_option("--out", o.out, "Output CSV (default stdout)");

    auto* compare_cmd = app.add_subcommand("compare", "Train with and without oversampling and print the deltas");
    add_common(compare_cmd, true);
    compare_cmd->add_option("--out", o.out, "Output directory (overrides the config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : pipeline::kExitConfig;
    }

    try {
        if (*extract_cmd) return cmd_extract(o);
        if (*gen_cmd) return cmd_gen_synthetic(o);
        if (*train_cmd) return cmd_train(o);
        if (*eval_cmd) return cmd_evaluate(o);
        if (*predict_cmd) return cmd_predict(o);
        if (*compare_cmd) return cmd_compare(o);
    } catch (const StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return pipeline::kExitConfig;
    } catch (const NonConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return pipeline::kExitNonConvergence;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return pipeline::kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
