#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "revsent/csv.hpp"

using namespace revsent;

TEST(Csv, QuotesOnlyWhenNeeded) {
    EXPECT_EQ(csv::format_row({"5", "plain", ""}), "5,plain,\r\n");
    EXPECT_EQ(csv::format_row({"a,b"}), "\"a,b\"\r\n");
    EXPECT_EQ(csv::format_row({"say \"hi\""}), "\"say \"\"hi\"\"\"\r\n");
    EXPECT_EQ(csv::format_row({"two\nlines"}), "\"two\nlines\"\r\n");
}

TEST(Csv, ParsesQuotedFieldsAndBothLineEndings) {
    const auto rows = csv::parse("a,\"b,c\",\"d\"\"e\"\r\nf,g,h\nlast,,");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], (csv::Row{"a", "b,c", "d\"e"}));
    EXPECT_EQ(rows[1], (csv::Row{"f", "g", "h"}));
    EXPECT_EQ(rows[2], (csv::Row{"last", "", ""}));
}

TEST(Csv, EmptyDocumentHasNoRows) { EXPECT_TRUE(csv::parse("").empty()); }

TEST(Csv, ErrorsNameTheRecord) {
    try {
        csv::parse("h1,h2\r\nok,row\r\n\"open,field\r\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("record 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(csv::parse("a\"b,c\r\n"), ParseError);
    EXPECT_THROW(csv::parse("\"a\"b,c\r\n"), ParseError);
}

TEST(Csv, RoundTripProperty) {
    std::mt19937_64 gen(7);
    const std::string alphabet = "abc XYZ,\"\r\n\t;'\xC3\xA9";
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<csv::Row> rows(1 + gen() % 5);
        const std::size_t cols = 2 + gen() % 4;
        std::string text;
        for (auto& r : rows) {
            for (std::size_t c = 0; c < cols; ++c) {
                std::string f;
                const std::size_t len = gen() % 8;
                for (std::size_t k = 0; k < len; ++k) f.push_back(alphabet[gen() % alphabet.size()]);
                r.push_back(f);
            }
            text += csv::format_row(r);
        }
        ASSERT_EQ(csv::parse(text), rows) << "trial " << trial;
    }
}

TEST(Csv, FileIoReportsPath) {
    const auto path = (std::filesystem::temp_directory_path() / "revsent_csv_test.csv").string();
    csv::write_file(path, "x,y\r\n");
    EXPECT_EQ(csv::read_file(path), "x,y\r\n");
    std::filesystem::remove(path);
    try {
        csv::read_file(path);
        FAIL();
    } catch (const IoError& e) {
        EXPECT_EQ(e.path(), path);
    }
}

TEST(Csv, ColumnIndex) {
    const csv::Row header{"Score", "Date", "Title", "Review"};
    EXPECT_EQ(csv::column_index(header, "Review"), 3u);
    EXPECT_EQ(csv::column_index(header, "review"), static_cast<std::size_t>(-1));
}
