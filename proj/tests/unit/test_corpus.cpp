#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "revsent/corpus.hpp"

using namespace revsent;
namespace fs = std::filesystem;

namespace {

Corpus make_corpus(std::size_t pos, std::size_t neg) {
    Corpus c;
    for (std::size_t i = 0; i < pos + neg; ++i) {
        LabeledDocument d;
        d.id = i;
        d.rating = i < pos ? 5 : 1;
        d.label = label_review(d.rating);
        d.body = "doc " + std::to_string(i);
        c.push_back(d);
    }
    return c;
}

SyntheticCorpusSpec small_spec() {
    SyntheticCorpusSpec s;
    s.positive_lexicon = {"good", "great", "lovely"};
    s.negative_lexicon = {"bad", "awful", "dirty"};
    s.neutral_lexicon = {"park", "path", "lake"};
    s.seed = 99;
    return s;
}

std::string temp_file(const std::string& name, const std::string& content) {
    const auto p = (fs::temp_directory_path() / name).string();
    csv::write_file(p, content);
    return p;
}

}  // namespace

TEST(LabelReview, FourAndFiveArePositive) {
    EXPECT_EQ(label_review(5), Sentiment::Positive);
    EXPECT_EQ(label_review(4), Sentiment::Positive);
    EXPECT_EQ(label_review(3), Sentiment::Negative);
    EXPECT_EQ(label_review(2), Sentiment::Negative);
    EXPECT_EQ(label_review(1), Sentiment::Negative);
    EXPECT_THROW(label_review(0), ValidationError);
    EXPECT_THROW(label_review(6), ValidationError);
}

TEST(LoadCorpusCsv, SixRowFileSplitsThreeAndThree) {
    const Corpus c = load_corpus_csv(std::string(REVSENT_FIXTURE_DIR) + "/six_reviews.csv");
    ASSERT_EQ(c.size(), 6u);
    const auto counts = count_classes(c);
    EXPECT_EQ(counts.positive, 3u);
    EXPECT_EQ(counts.negative, 3u);
    const std::vector<int> ratings{5, 5, 4, 3, 1, 2};
    for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_EQ(c[i].id, i);
        EXPECT_EQ(c[i].rating, ratings[i]);
        EXPECT_EQ(c[i].label, label_review(ratings[i]));
    }
}

TEST(LoadCorpusCsv, HeaderOnlyIsEmpty) {
    EXPECT_TRUE(load_corpus_csv(temp_file("rs_header_only.csv", "Score,Date,Title,Review\r\n")).empty());
}

TEST(LoadCorpusCsv, OutOfRangeScoreNamesRow) {
    const auto p = temp_file("rs_bad_score.csv", "Score,Date,Title,Review\r\n5,d,t,ok\r\n6,d,t,bad\r\n");
    try {
        load_corpus_csv(p);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(load_corpus_csv(temp_file("rs_nan_score.csv", "Score,Review\r\nfive,x\r\n")), ValidationError);
    EXPECT_THROW(load_corpus_csv(temp_file("rs_short_row.csv", "Score,Review\r\n5\r\n")), ParseError);
    EXPECT_THROW(load_corpus_csv(temp_file("rs_no_review.csv", "Score,Body\r\n5,x\r\n")), ValidationError);
}

TEST(LoadCorpusCsv, ToleratesBomAndBlankLines) {
    const auto c = load_corpus_csv(temp_file("rs_bom.csv", "\xEF\xBB\xBFScore,Review\r\n4,a\r\n\r\n2,b\r\n"));
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[1].label, Sentiment::Negative);
}

TEST(ClassCounts, HeldOutCompositionMinorityShare) {
    const auto c = count_classes(make_corpus(2714, 286));
    EXPECT_NEAR(c.minority_share(), 286.0 / 3000.0, 1e-15);
    EXPECT_LT(c.minority_share(), 0.10);
    EXPECT_NEAR(c.minority_share(), 0.0953, 5e-5);
}

TEST(Split, StratifiedTenDocs) {
    const Corpus c = make_corpus(9, 1);
    SplitSpec s;
    s.test_fraction = 0.3;
    s.seed = 1;
    const auto parts = split(c, s);
    EXPECT_EQ(parts.test.size(), 3u);
    EXPECT_LE(count_classes(parts.test).negative, 1u);
}

TEST(Split, IsPartitionAndDeterministic) {
    const Corpus c = make_corpus(70, 30);
    for (bool stratified : {true, false}) {
        SplitSpec s;
        s.seed = 42;
        s.stratified = stratified;
        const auto a = split(c, s);
        const auto b = split(c, s);
        EXPECT_EQ(a.train, b.train);
        EXPECT_EQ(a.test, b.test);
        EXPECT_EQ(a.train.size() + a.test.size(), c.size());
        std::set<std::size_t> ids;
        for (const auto& d : a.train) ids.insert(d.id);
        for (const auto& d : a.test) EXPECT_TRUE(ids.insert(d.id).second) << "id in both halves";
        EXPECT_EQ(ids.size(), c.size());
        EXPECT_TRUE(std::is_sorted(a.test.begin(), a.test.end(), [](auto& x, auto& y) { return x.id < y.id; }));
    }
    SplitSpec other;
    other.seed = 43;
    EXPECT_NE(split(c, other).test, split(c, SplitSpec{0.3, std::nullopt, 42, true}).test);
}

TEST(Split, StratifiedProportionsWithinOneDocument) {
    for (std::size_t neg : {1u, 7u, 13u, 50u}) {
        for (double f : {0.1, 0.25, 0.3, 0.5}) {
            const Corpus c = make_corpus(100, neg);
            SplitSpec s;
            s.test_fraction = f;
            s.seed = neg;
            const auto parts = split(c, s);
            const double expected =
                static_cast<double>(parts.test.size()) * static_cast<double>(neg) / static_cast<double>(c.size());
            EXPECT_LE(std::abs(static_cast<double>(count_classes(parts.test).negative) - expected), 1.0)
                << "neg=" << neg << " f=" << f;
        }
    }
}

TEST(Split, InfeasibleSizesAreErrors) {
    const Corpus c = make_corpus(9, 1);
    SplitSpec s;
    s.test_fraction = 0.999;
    EXPECT_THROW(split(c, s), ValidationError);
    s.test_fraction.reset();
    s.test_count = 10;
    EXPECT_THROW(split(c, s), ValidationError);
    s.test_count = 4;
    EXPECT_EQ(split(c, s).test.size(), 4u);
    EXPECT_THROW(split(Corpus{}, SplitSpec{}), ValidationError);
    SplitSpec tiny;
    tiny.test_fraction = 0.01;
    EXPECT_THROW(split(c, tiny), ValidationError);
}

TEST(Synthetic, CountsFollowMinorityFraction) {
    SyntheticCorpusSpec s = small_spec();
    s.total = 2000;
    s.minority_fraction = 0.1;
    const Corpus c = generate_synthetic_corpus(s);
    ASSERT_EQ(c.size(), 2000u);
    const auto counts = count_classes(c);
    EXPECT_EQ(counts.negative, 200u);
    EXPECT_EQ(counts.positive, 1800u);
    for (const auto& d : c) EXPECT_EQ(d.label, label_review(d.rating));
}

TEST(Synthetic, ZeroNoiseUsesOnlyOwnAndNeutralWords) {
    SyntheticCorpusSpec s = small_spec();
    s.total = 300;
    s.noise_rate = 0.0;
    const Corpus c = generate_synthetic_corpus(s);
    const std::set<std::string> negative_allowed{"bad", "awful", "dirty", "park", "path", "lake"};
    for (const auto& d : c) {
        if (d.label != Sentiment::Negative) continue;
        std::string body = d.body;
        body.pop_back();  // trailing period
        std::size_t b = 0;
        while (b < body.size()) {
            const auto e = std::min(body.find(' ', b), body.size());
            EXPECT_TRUE(negative_allowed.count(body.substr(b, e - b))) << body;
            b = e + 1;
        }
    }
}

TEST(Synthetic, SameSeedSameBytes) {
    const auto s = small_spec();
    EXPECT_EQ(corpus_csv_text(generate_synthetic_corpus(s)), corpus_csv_text(generate_synthetic_corpus(s)));
    auto t = s;
    t.seed = 100;
    EXPECT_NE(corpus_csv_text(generate_synthetic_corpus(s)), corpus_csv_text(generate_synthetic_corpus(t)));
}

TEST(Synthetic, WordCountsRespectRange) {
    auto s = small_spec();
    s.words_min = 3;
    s.words_max = 5;
    for (const auto& d : generate_synthetic_corpus(s)) {
        const auto words = std::count(d.body.begin(), d.body.end(), ' ') + 1;
        EXPECT_GE(words, 3);
        EXPECT_LE(words, 5);
    }
}

TEST(Synthetic, InvalidSpecsRejected) {
    auto s = small_spec();
    s.negative_lexicon.clear();
    EXPECT_THROW(generate_synthetic_corpus(s), ValidationError);
    s = small_spec();
    s.neutral_lexicon.push_back("good");
    EXPECT_THROW(generate_synthetic_corpus(s), ValidationError);
    s = small_spec();
    s.minority_fraction = 0.5;
    EXPECT_THROW(generate_synthetic_corpus(s), ValidationError);
    s = small_spec();
    s.noise_rate = 1.5;
    EXPECT_THROW(generate_synthetic_corpus(s), ValidationError);
}

TEST(Synthetic, CsvRoundTripPreservesLabels) {
    auto s = small_spec();
    s.total = 50;
    const Corpus c = generate_synthetic_corpus(s);
    const Corpus back = load_corpus_csv(temp_file("rs_synth_rt.csv", corpus_csv_text(c)));
    EXPECT_EQ(back, c);
}
