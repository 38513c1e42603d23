#include <gtest/gtest.h>

#include <filesystem>

#include "revsent/pipeline.hpp"

using namespace revsent;
using namespace revsent::config;

namespace {

const std::filesystem::path kRoot = REVSENT_SOURCE_DIR;

pipeline::PipelineConfig from_raw(const std::string& text) {
    return pipeline::parse_config(Table::parse(text), kRoot, text);
}

// A valid corpus section so that each case fails only for its own reason.
pipeline::PipelineConfig from_text(const std::string& text) {
    return from_raw(text + "[corpus]\nsource = \"csv\"\npath = \"tests/fixtures/six_reviews.csv\"\n");
}

}  // namespace

TEST(Toml, ScalarTypes) {
    const auto t = Table::parse(
        "seed = 42\n"
        "name = \"a \\\"q\\\" b\"  # trailing comment\n"
        "lit = 'C:\\path'\n"
        "[svm]\n"
        "C = 1e-3\n"
        "neg = -7\n"
        "big = 1_000\n"
        "on = true\n");
    EXPECT_EQ(t.get_int("seed", 0), 42);
    EXPECT_EQ(t.get_string("name"), "a \"q\" b");
    EXPECT_EQ(t.get_string("lit"), "C:\\path");
    EXPECT_DOUBLE_EQ(t.get_double("svm.C", 0), 1e-3);
    EXPECT_EQ(t.get_int("svm.neg", 0), -7);
    EXPECT_EQ(t.get_int("svm.big", 0), 1000);
    EXPECT_TRUE(t.get_bool("svm.on", false));
    EXPECT_DOUBLE_EQ(t.get_double("seed", 0), 42.0);
    EXPECT_EQ(t.get_int("missing", 5), 5);
}

TEST(Toml, ArraysSpanLines) {
    const auto t = Table::parse(
        "words = [\n"
        "  \"a\", \"b\",  # first two\n"
        "  \"c\",\n"
        "]\n"
        "w = [1, 2.5]\r\n");
    EXPECT_EQ(t.get_string_array("words"), (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(t.get_number_array("w"), (std::vector<double>{1.0, 2.5}));
    EXPECT_TRUE(t.is_array("w"));
}

TEST(Toml, Errors) {
    EXPECT_THROW(Table::parse("a = 1\na = 2\n"), ConfigError);
    EXPECT_THROW(Table::parse("a = \"unterminated\n"), ConfigError);
    EXPECT_THROW(Table::parse("a = [1, 2\n"), ConfigError);
    EXPECT_THROW(Table::parse("= 3\n"), ConfigError);
    EXPECT_THROW(Table::parse("a = 1 2\n"), ConfigError);
    EXPECT_THROW(Table::parse("a = 1x\n"), ConfigError);
    try {
        Table::parse("a = 1\n\nb = oops\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(Toml, TypeMismatchAndUnused) {
    const auto t = Table::parse("a = \"x\"\nb = 1\nc = -1\n");
    EXPECT_THROW(t.get_int("a", 0), ConfigError);
    EXPECT_THROW(t.get_uint("c", 0), ConfigError);
    EXPECT_THROW(t.get_string_array("b"), ConfigError);
    EXPECT_EQ(t.unused_keys(), std::vector<std::string>{});
    const auto u = Table::parse("a = 1\nzz = 2\n");
    u.get_int("a", 0);
    EXPECT_EQ(u.unused_keys(), std::vector<std::string>{"zz"});
}

TEST(PipelineConfig, ShippedConfigLoads) {
    const auto c = pipeline::load_config(kRoot / "configs" / "synthetic_default.toml");
    EXPECT_EQ(c.source, pipeline::CorpusSource::Synthetic);
    EXPECT_EQ(c.synthetic.total, 2000u);
    EXPECT_DOUBLE_EQ(c.synthetic.minority_fraction, 0.1);
    EXPECT_DOUBLE_EQ(c.synthetic.noise_rate, 0.15);
    EXPECT_TRUE(c.balance);
    EXPECT_FALSE(c.rate.has_value());
    EXPECT_TRUE(std::filesystem::exists(c.stoplist_path));
    EXPECT_EQ(c.fingerprint().size(), 16u);
}

TEST(PipelineConfig, DefaultsWhenEmpty) {
    const auto c = from_text("");
    EXPECT_EQ(c.source, pipeline::CorpusSource::Csv);
    EXPECT_EQ(c.model, pipeline::ModelChoice::Svm);
    EXPECT_EQ(c.weights, pipeline::WeightMode::InverseFrequency);
    EXPECT_EQ(c.kernel.kind, svm::KernelKind::Linear);
    EXPECT_TRUE(c.stoplist_path.empty());
    EXPECT_DOUBLE_EQ(*c.split.test_fraction, 0.3);
}

TEST(PipelineConfig, ValueForms) {
    auto c = from_text("[balance]\nrate = 0.6\n[svm]\nclass_weights = [1, 3.5]\nkernel = \"rbf\"\ngamma = 0.25\n");
    EXPECT_DOUBLE_EQ(*c.rate, 0.6);
    EXPECT_EQ(c.weights, pipeline::WeightMode::Explicit);
    EXPECT_DOUBLE_EQ(c.train.class_weights.negative, 3.5);
    EXPECT_EQ(c.kernel.kind, svm::KernelKind::Rbf);
    c = from_text("[split]\ntest_count = 12\n[svm]\nclass_weights = \"none\"\n");
    EXPECT_EQ(*c.split.test_count, 12u);
    EXPECT_FALSE(c.split.test_fraction.has_value());
    EXPECT_EQ(c.weights, pipeline::WeightMode::None);
}

TEST(PipelineConfig, InvalidValuesAreConfigErrors) {
    const char* bad[] = {
        "[svm]\nC = -1.0\n",
        "[svm]\nC = 0\n",
        "[svm]\nkernel = \"pisa\"\n",
        "[svm]\nclass_weights = [1]\n",
        "[svm]\nclass_weights = \"sometimes\"\n",
        "[balance]\nrate = \"lots\"\n",
        "[balance]\nrate = -0.5\n",
        "[balance]\nk = 0\n",
        "[balance]\nmode = \"sideways\"\n",
        "[vectorize]\nscheme = \"bm25\"\n",
        "[vectorize]\nngram_min = 3\nngram_max = 2\n",
        "[vectorize]\nmin_df = 0\n",
        "[model]\ntype = \"forest\"\n",
        "[preprocess]\nstoplist = \"data/missing.txt\"\n",
        "[svm]\nCee = 1.0\n",
        "seed = \"abc\"\n",
    };
    for (const char* text : bad) EXPECT_THROW(from_text(text), ConfigError) << text;
    EXPECT_NO_THROW(from_text(""));

    const char* bad_corpus[] = {
        "[corpus]\nsource = \"web\"\n",
        "[corpus]\nsource = \"csv\"\n",
        "[corpus]\nsource = \"csv\"\npath = \"no/such/file.csv\"\n",
        "[corpus]\nsource = \"synthetic\"\n",
        "[synthetic]\nminority_fraction = 1.5\npositive_lexicon = [\"a\"]\nnegative_lexicon = [\"b\"]\nneutral_rate = 0.0\n",
    };
    for (const char* text : bad_corpus) EXPECT_THROW(from_raw(text), ConfigError) << text;
    EXPECT_NO_THROW(from_raw("[synthetic]\npositive_lexicon = [\"a\"]\nnegative_lexicon = [\"b\"]\nneutral_rate = 0.0\n"));
}

TEST(PipelineConfig, UnknownKeyNamed) {
    try {
        from_text("[svm]\nC = 1.0\ntolerence = 0.1\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("svm.tolerence"), std::string::npos);
    }
}

TEST(PipelineConfig, LoadMissingFileIsConfigError) {
    EXPECT_THROW(pipeline::load_config(kRoot / "configs" / "nope.toml"), ConfigError);
}

TEST(PipelineConfig, OverridesChangeFingerprintAndStageSeeds) {
    auto a = from_text("seed = 1\n");
    auto b = a;
    b.set_balance(false);
    EXPECT_NE(a.fingerprint(), b.fingerprint());
    EXPECT_EQ(a.stage_seed("split"), b.stage_seed("split"));
    EXPECT_NE(a.stage_seed("split"), a.stage_seed("balance"));
    b.set_seed(2);
    EXPECT_NE(a.stage_seed("split"), b.stage_seed("split"));
    EXPECT_EQ(b.seed, 2u);
}

TEST(PipelineConfig, PreprocessorFromShippedListsMatchesBuiltin) {
    const auto c = pipeline::load_config(kRoot / "configs" / "synthetic_default.toml");
    EXPECT_EQ(pipeline::make_preprocessor(c).fingerprint(), text::Preprocessor{}.fingerprint());
}
