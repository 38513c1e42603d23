// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when
// any criterion fails or overruns its time budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles/qp_oracle.hpp"
#include "revsent.hpp"

using namespace revsent;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = REVSENT_SOURCE_DIR;
const fs::path kFixtures = REVSENT_FIXTURE_DIR;

struct Outcome {
    bool ok = true;
    std::string detail;
};

// Collects the first failing check and a short summary for the report line.
class Checker {
public:
    void require(bool cond, const std::string& what) {
        if (!cond && out_.ok) {
            out_.ok = false;
            out_.detail = what;
        }
    }
    void note(const std::string& s) {
        if (out_.ok) out_.detail = s;
    }
    Outcome result() const { return out_; }

private:
    Outcome out_;
};

std::string fmt(double v, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

SparseVector pt(std::initializer_list<double> xs) { return SparseVector::from_dense(std::vector<double>(xs)); }

// ---------------------------------------------------------------------------

Outcome benchmark_f1_rows() {
    struct Row {
        double p, r, f1;
    };
    const Row rows[] = {{0.971, 0.997, 0.983}, {0.946, 0.993, 0.968}, {0.92, 0.994, 0.955},
                        {0.901, 0.991, 0.942}, {0.927, 0.992, 0.957}};
    Checker c;
    double worst = 0.0;
    for (const auto& row : rows) {
        const double d = std::abs(eval::f1_score(row.p, row.r) - row.f1);
        worst = std::max(worst, d);
        c.require(d <= 0.002, "f1 " + fmt(eval::f1_score(row.p, row.r)) + " vs printed " + fmt(row.f1));
    }
    c.note("5 rows, max |f1 - printed| = " + fmt(worst, 3));
    return c.result();
}

Outcome tfidf_hand_corpus() {
    const std::vector<text::TokenSequence> docs{{"lake", "lake", "park"}, {"park", "tree"}, {"park", "bench", "tree"}};
    const auto vocab = Vocabulary::build(docs, {1, 1}, 1);
    const auto x = vectorize_all(docs, vocab, WeightingScheme::TfIdf);
    auto w = [&](std::size_t d, const char* term) { return x[d].at(*vocab.index_of(term)); };
    const double ln3 = std::log(3.0), ln15 = std::log(1.5);
    const struct {
        std::size_t doc;
        const char* term;
        double expect;
    } cases[] = {{0, "lake", 2 * ln3}, {0, "park", 0.0}, {1, "park", 0.0}, {2, "park", 0.0},
                 {1, "tree", ln15},    {2, "tree", ln15}, {2, "bench", ln3}, {1, "lake", 0.0}};
    Checker c;
    double worst = 0.0;
    for (const auto& k : cases) {
        const double d = std::abs(w(k.doc, k.term) - k.expect);
        worst = std::max(worst, d);
        c.require(d <= 1e-12, std::string("doc ") + std::to_string(k.doc) + " '" + k.term + "' = " + fmt(w(k.doc, k.term), 17));
    }
    c.note("lake = 2 ln 3 = " + fmt(w(0, "lake"), 6) + ", park = 0, max err " + fmt(worst, 3));
    return c.result();
}

Outcome oversampler_properties() {
    Checker c;
    std::mt19937_64 gen(777);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::size_t samples = 0;
    for (int run = 0; run < 100; ++run) {
        std::vector<SparseVector> m;
        for (int i = 0; i < 20; ++i) m.push_back(pt({u(gen), u(gen)}));
        const balance::OversampleSpec spec{5, 1.0, balance::InterpolationMode::Standard, derive_seed(run, "acceptance")};
        const auto out = balance::oversample(m, spec);
        c.require(out.size() == 20, "run " + std::to_string(run) + ": " + std::to_string(out.size()) + " samples");
        for (const auto& s : out) {
            ++samples;
            const auto& a = m[s.parent_index];
            const auto& b = m[s.neighbor_index];
            for (std::uint32_t d = 0; d < 2; ++d) {
                const double v = s.vector.at(d);
                c.require(v >= std::min(a.at(d), b.at(d)) && v <= std::max(a.at(d), b.at(d)),
                          "coordinate outside its parent/neighbor interval in run " + std::to_string(run));
            }
        }
        const auto again = balance::oversample(m, spec);
        bool same = again.size() == out.size();
        for (std::size_t i = 0; same && i < out.size(); ++i)
            same = again[i].vector.values() == out[i].vector.values() && again[i].vector.indices() == out[i].vector.indices();
        c.require(same, "seeded rerun differs in run " + std::to_string(run));
    }
    const auto lit = balance::synthesize_sample(pt({2, 2}), pt({0, 0}), 0.5, balance::InterpolationMode::Literal);
    c.require(lit.to_dense() == std::vector<double>{3, 3}, "literal mode gave (" + fmt(lit.at(0)) + "," + fmt(lit.at(1)) + ")");
    c.note("100 runs, " + std::to_string(samples) + " samples in bounds; literal (2,2)/(0,0)/0.5 -> (3,3)");
    return c.result();
}

oracle::Matrix gram(const std::vector<SparseVector>& xs, const svm::KernelSpec& k) {
    oracle::Matrix K(xs.size(), std::vector<double>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j) K[i][j] = svm::kernel_eval(k, xs[i], xs[j]);
    return K;
}

Outcome svm_solver() {
    Checker c;
    svm::TrainSpec tight;
    tight.tolerance = 1e-10;

    // (a) two points at -1 and +1.
    {
        svm::TrainSpec s = tight;
        s.C = 1000.0;
        const auto m = svm::train_svm({pt({-1}), pt({1})}, std::vector<int>{-1, 1}, s, {});
        c.require(m.multipliers.size() == 2 && std::abs(m.multipliers[0] - 0.5) <= 1e-8 &&
                      std::abs(m.multipliers[1] - 0.5) <= 1e-8,
                  "(a) multipliers not (0.5, 0.5)");
        c.require(std::abs(m.bias) <= 1e-8, "(a) bias " + fmt(m.bias, 17));
        for (double x = -2.0; x <= 2.0; x += 0.25)
            c.require(std::abs(svm::decision_value(m, pt({x})) - x) <= 1e-8, "(a) f(x) != x at " + fmt(x));
    }

    // (b)-(d) on random instances.
    std::mt19937_64 gen(4242);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<SparseVector> grid;
    for (double a = -3.0; a <= 3.0; a += 0.5)
        for (double b = -3.0; b <= 3.0; b += 0.5) grid.push_back(pt({a, b}));
    double worst_obj = 0.0, worst_f = 0.0;
    std::size_t steps = 0;
    for (int t = 0; t < 50; ++t) {
        const int n = 4 + static_cast<int>(gen() % 9);
        std::vector<SparseVector> xs;
        std::vector<int> y;
        for (int i = 0; i < n; ++i) {
            const int yi = i < 2 ? (i == 0 ? 1 : -1) : (gen() % 2 ? 1 : -1);
            y.push_back(yi);
            xs.push_back(pt({0.8 * yi + noise(gen), 0.5 * yi + noise(gen)}));
        }
        const svm::KernelSpec k = t % 2 ? svm::KernelSpec{svm::KernelKind::Rbf, 0.5, 3, 0.0} : svm::KernelSpec{};
        svm::TrainSpec s = tight;
        s.C = t % 3 == 0 ? 10.0 : 1.0;
        double last = 0.0;
        const auto m = svm::train_svm(xs, y, s, k, [&](const svm::StepView& v) {
            ++steps;
            double eq = 0.0, scale = 1.0;
            for (std::size_t i = 0; i < v.mu.size(); ++i) {
                c.require(v.mu[i] >= 0.0 && v.mu[i] <= v.upper_bounds[i], "(c) box constraint violated");
                eq += v.mu[i] * v.labels[i];
                scale += v.mu[i];
            }
            c.require(std::abs(eq) <= 1e-12 * scale, "(c) equality constraint off by " + fmt(eq, 3));
            c.require(v.objective >= last - 1e-12 * std::max(1.0, std::abs(last)), "(d) dual objective decreased");
            last = v.objective;
        });
        c.require(m.info.converged, "(b) instance " + std::to_string(t) + " did not converge");
        const std::vector<double> Cv(y.size(), s.C);
        const auto ref = oracle::projected_gradient(y, Cv, gram(xs, k));
        worst_obj = std::max(worst_obj, std::abs(m.info.objective - ref.objective));
        c.require(std::abs(m.info.objective - ref.objective) <= 1e-5, "(b) objective gap on instance " + std::to_string(t));
        for (const auto& p : grid) {
            double f = ref.bias;
            for (std::size_t i = 0; i < xs.size(); ++i) f += ref.mu[i] * y[i] * svm::kernel_eval(k, xs[i], p);
            const double d = std::abs(svm::decision_value(m, p) - f);
            worst_f = std::max(worst_f, d);
            c.require(d <= 1e-4, "(b) probe decision gap " + fmt(d, 3) + " on instance " + std::to_string(t));
        }
    }
    c.note("50 instances, max |dD| " + fmt(worst_obj, 2) + ", max |df| " + fmt(worst_f, 2) + ", " + std::to_string(steps) +
           " steps checked");
    return c.result();
}

Outcome auc_oracle() {
    Checker c;
    std::mt19937_64 gen(31337);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + gen() % 199;
        std::vector<double> s(n), neg(n);
        std::vector<Sentiment> y(n);
        std::vector<bool> pos(n);
        std::uniform_int_distribution<int> coarse(0, t % 4 == 0 ? 1 : 5);
        std::normal_distribution<double> fine(0.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            pos[i] = i == 0 || (i != 1 && gen() % 2 == 0);
            y[i] = pos[i] ? Sentiment::Positive : Sentiment::Negative;
            s[i] = t % 2 ? coarse(gen) : fine(gen);
            neg[i] = -s[i];
        }
        const double a = eval::auc(eval::roc_curve(s, y));
        const double d1 = std::abs(a - oracle::pairwise_auc(s, pos));
        const double d2 = std::abs(a + eval::auc(eval::roc_curve(neg, y)) - 1.0);
        worst = std::max({worst, d1, d2});
        c.require(d1 <= 1e-12, "set " + std::to_string(t) + ": trapezoid vs pairwise " + fmt(d1, 3));
        c.require(d2 <= 1e-12, "set " + std::to_string(t) + ": reversal symmetry " + fmt(d2, 3));
    }
    c.note("200 sets (half heavy-tie), max deviation " + fmt(worst, 2));
    return c.result();
}

Outcome balance_comparison() {
    Checker c;
    auto on = pipeline::load_config(kRoot / "configs" / "synthetic_default.toml");
    auto off = on;
    on.set_balance(true);
    off.set_balance(false);
    const auto r_off = pipeline::run_pipeline(off);
    const auto r_on = pipeline::run_pipeline(on);
    c.require(r_on.report.minority.recall > r_off.report.minority.recall,
              "minority recall balanced " + fmt(r_on.report.minority.recall) + " <= unbalanced " +
                  fmt(r_off.report.minority.recall));
    c.require(r_on.report.auc >= 0.95, "balanced AUC " + fmt(r_on.report.auc));
    c.require(r_on.test_ids == r_off.test_ids, "test sets differ between runs");
    c.note("minority recall " + fmt(r_off.report.minority.recall, 4) + " -> " + fmt(r_on.report.minority.recall, 4) +
           ", AUC " + fmt(r_off.report.auc, 4) + " -> " + fmt(r_on.report.auc, 4) + ", " +
           std::to_string(r_on.report.synthetic_samples) + " synthetic");
    return c.result();
}

Outcome extraction_golden() {
    Checker c;
    std::size_t pages = 0;
    for (const auto& row : csv::parse(csv::read_file((kFixtures / "golden" / "skip_counts.tsv").string()))) {
        // The TSV has one tab-separated field per line in CSV terms.
        std::istringstream line(row.empty() ? "" : row[0]);
        std::string name, reviews, skipped;
        std::getline(line, name, '\t');
        std::getline(line, reviews, '\t');
        std::getline(line, skipped, '\t');
        if (name == "page" || name.empty()) continue;
        ++pages;
        const auto r = extract::parse_review_page(csv::read_file((kFixtures / "html" / name).string()), {}, name);
        const auto stem = fs::path(name).stem().string();
        c.require(extract::corpus_csv_text(r.reviews) == csv::read_file((kFixtures / "golden" / (stem + ".csv")).string()),
                  name + " differs from its golden CSV");
        c.require(std::to_string(r.reviews.size()) == reviews && std::to_string(r.skipped) == skipped,
                  name + " review/skip counts differ");
    }
    const auto all = extract::parse_fixture_directory(kFixtures / "html", {});
    c.require(extract::corpus_csv_text(all.reviews) == csv::read_file((kFixtures / "golden" / "corpus.csv").string()),
              "combined corpus differs from golden");
    std::set<int> ratings;
    for (const auto& rev : all.reviews) ratings.insert(rev.rating);
    c.require(ratings == std::set<int>{1, 2, 3, 4, 5}, "not every rating decoded");
    c.require(all.skipped > 0, "skip path not exercised");
    c.require(pages == all.pages, "page count mismatch");
    c.note(std::to_string(all.pages) + " pages, " + std::to_string(all.reviews.size()) + " reviews, " +
           std::to_string(all.skipped) + " skipped, ratings 1-5");
    return c.result();
}

Outcome determinism() {
    Checker c;
    const auto cfg = pipeline::load_config(kRoot / "configs" / "synthetic_default.toml");
    const fs::path base = fs::temp_directory_path() / ("revsent_accept_" + std::to_string(std::random_device{}()));
    pipeline::write_artifacts(pipeline::run_pipeline(cfg), base / "a");
    pipeline::write_artifacts(pipeline::run_pipeline(cfg), base / "b");
    std::size_t bytes = 0;
    for (const char* f : {"metrics.json", "roc.csv", "model.bundle"}) {
        const auto a = csv::read_file((base / "a" / f).string());
        const auto b = csv::read_file((base / "b" / f).string());
        bytes += a.size();
        c.require(a == b, std::string(f) + " differs between runs");
    }
    fs::remove_all(base);
    c.note("metrics.json, roc.csv, model.bundle identical (" + std::to_string(bytes) + " bytes)");
    return c.result();
}

Outcome strawman() {
    Checker c;
    std::vector<Sentiment> truths(2714, Sentiment::Positive);
    truths.resize(3000, Sentiment::Negative);
    const std::vector<Sentiment> preds(3000, Sentiment::Positive);
    const auto cm = eval::confusion(preds, truths);
    const double acc = eval::accuracy(cm);
    const double minority_recall = eval::minority_precision_recall_f1(cm).recall;
    c.require(cm == eval::ConfusionMatrix{2714, 286, 0, 0}, "confusion cells wrong");
    c.require(std::abs(acc - 0.9047) <= 5e-5, "accuracy " + fmt(acc));
    c.require(minority_recall == 0.0, "minority recall " + fmt(minority_recall));
    c.note("accuracy " + fmt(acc, 4) + ", minority recall " + fmt(minority_recall));
    return c.result();
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {1, "f1 consistency of benchmark rows", 1, benchmark_f1_rows},
        {2, "tf-idf on the hand corpus", 1, tfidf_hand_corpus},
        {3, "oversampler properties", 5, oversampler_properties},
        {4, "svm solver vs oracle", 60, svm_solver},
        {5, "auc vs pairwise statistic", 10, auc_oracle},
        {6, "balanced vs unbalanced on synthetic corpus", 120, balance_comparison},
        {7, "extraction goldens", 1, extraction_golden},
        {8, "byte-identical reruns", 240, determinism},
        {9, "all-positive strawman", 1, strawman},
    };
    int failures = 0;
    for (const auto& cr : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = cr.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.ok && dt > cr.budget_s) {
            o.ok = false;
            o.detail += "; over time budget";
        }
        if (!o.ok) ++failures;
        std::printf("%s  %d  %-44s %7.2fs / %gs  %s\n", o.ok ? "PASS" : "FAIL", cr.id, cr.name, dt, cr.budget_s,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", 9 - failures, std::size(criteria));
    return failures == 0 ? 0 : 1;
}
