#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "revsent/csv.hpp"
#include "revsent/error.hpp"
#include "revsent/html.hpp"

namespace revsent::extract {

/// One scraped review. `rating` is the 1..5 bubble score.
struct RawReview {
    int rating = 0;
    std::string date;
    std::string title;
    std::string body;
    std::string source_page;

    bool operator==(const RawReview&) const = default;
};

/// Class names that locate the review fields in a page. The defaults match
/// the review-site markup the extractor was written against; they drift
/// often, so callers normally load them from a config file.
struct PageSelectors {
    std::string review_container = "Dq9MAugU T870kzTX LnVzGwUB";
    std::string bubble_class_prefix = "ui_bubble_rating bubble_";
    std::string date_class = "_34Xs-BQm";
    std::string title_class = "glasR4aX";
    std::string body_class = "IRsGHoPm";

    void validate() const {
        const std::pair<const char*, const std::string*> fields[] = {
            {"review_container", &review_container}, {"bubble_class_prefix", &bubble_class_prefix},
            {"date_class", &date_class},             {"title_class", &title_class},
            {"body_class", &body_class}};
        for (const auto& [name, value] : fields)
            if (value->empty()) throw ValidationError(std::string("selector '") + name + "' is empty");
    }
};

struct PageParseResult {
    std::vector<RawReview> reviews;
    std::size_t skipped = 0;
    std::vector<std::string> skip_reasons;  // one per skipped container
};

/// Maps a class attribute such as "ui_bubble_rating bubble_50" to 5.
///
/// The score is the numeric suffix of the first whitespace-separated token
/// of the form bubble_NN; only NN in {10, 20, 30, 40, 50} is accepted.
inline int decode_bubble_score(std::string_view class_attribute) {
    std::size_t pos = 0;
    while (pos < class_attribute.size()) {
        while (pos < class_attribute.size() && std::isspace(static_cast<unsigned char>(class_attribute[pos]))) ++pos;
        std::size_t end = pos;
        while (end < class_attribute.size() && !std::isspace(static_cast<unsigned char>(class_attribute[end]))) ++end;
        const std::string_view token = class_attribute.substr(pos, end - pos);
        pos = end;
        constexpr std::string_view kPrefix = "bubble_";
        if (token.size() <= kPrefix.size() || token.substr(0, kPrefix.size()) != kPrefix) continue;
        const std::string_view suffix = token.substr(kPrefix.size());
        if (suffix == "10") return 1;
        if (suffix == "20") return 2;
        if (suffix == "30") return 3;
        if (suffix == "40") return 4;
        if (suffix == "50") return 5;
        throw DecodeError("unknown bubble score suffix '" + std::string(suffix) + "' in class attribute '" +
                          std::string(class_attribute) + "'");
    }
    throw DecodeError("no bubble_NN token in class attribute '" + std::string(class_attribute) + "'");
}

inline std::string replace_newlines(std::string s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\r') {
            out.push_back(' ');
            if (i + 1 < s.size() && s[i + 1] == '\n') ++i;
        } else if (s[i] == '\n') {
            out.push_back(' ');
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

/// Extracts every review container of a page, in document order. Containers
/// missing a field (or carrying an undecodable bubble) are skipped and
/// counted rather than aborting the page.
inline PageParseResult parse_review_page(std::string_view html_text, const PageSelectors& selectors,
                                         std::string_view source_page = {}) {
    selectors.validate();
    const html::Document doc = html::Document::parse(html_text);

    auto class_is = [](const std::string& wanted) {
        return [&wanted](const html::Node& n) { return html::normalized_class(n) == wanted; };
    };
    const auto containers = doc.find_all(html::Document::root(), class_is(selectors.review_container));

    PageParseResult result;
    for (std::size_t c : containers) {
        auto skip = [&](std::string why) {
            ++result.skipped;
            result.skip_reasons.push_back(std::move(why));
        };
        const auto bubble = doc.find_first(c, [&](const html::Node& n) {
            const std::string* cls = n.attribute("class");
            return cls && cls->find(selectors.bubble_class_prefix) != std::string::npos;
        });
        const auto date = doc.find_first(c, class_is(selectors.date_class));
        const auto title = doc.find_first(c, class_is(selectors.title_class));
        const auto body = doc.find_first(c, class_is(selectors.body_class));
        if (!bubble) { skip("missing bubble rating element"); continue; }
        if (!date) { skip("missing date element"); continue; }
        if (!title) { skip("missing title element"); continue; }
        if (!body) { skip("missing body element"); continue; }
        const std::string* date_attr = doc.node(*date).attribute("title");
        if (!date_attr) { skip("date element has no title attribute"); continue; }

        RawReview r;
        try {
            r.rating = decode_bubble_score(*doc.node(*bubble).attribute("class"));
        } catch (const DecodeError& e) {
            skip(e.what());
            continue;
        }
        r.date = *date_attr;
        r.title = replace_newlines(doc.text_content(*title));
        r.body = replace_newlines(doc.text_content(*body));
        r.source_page = std::string(source_page);
        result.reviews.push_back(std::move(r));
    }
    return result;
}

inline std::string corpus_csv_text(const std::vector<RawReview>& reviews) {
    std::string out = csv::format_row({"Score", "Date", "Title", "Review"});
    for (const auto& r : reviews) out += csv::format_row({std::to_string(r.rating), r.date, r.title, r.body});
    return out;
}

/// Writes the Score,Date,Title,Review corpus file. Returns rows written.
inline std::size_t write_corpus_csv(const std::vector<RawReview>& reviews, const std::string& path) {
    csv::write_file(path, corpus_csv_text(reviews));
    return reviews.size();
}

struct FixtureParseResult {
    std::vector<RawReview> reviews;
    std::size_t pages = 0;
    std::size_t skipped = 0;
};

/// Parses every *.html / *.htm file in a directory, in filename order.
inline FixtureParseResult parse_fixture_directory(const std::filesystem::path& dir, const PageSelectors& selectors) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IoError(dir.string(), "not a directory");
    std::vector<fs::path> pages;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if (ext == ".html" || ext == ".htm") pages.push_back(entry.path());
    }
    std::sort(pages.begin(), pages.end());
    FixtureParseResult out;
    for (const auto& page : pages) {
        const std::string text = csv::read_file(page.string());
        PageParseResult r;
        try {
            r = parse_review_page(text, selectors, page.filename().string());
        } catch (const ParseError& e) {
            throw ParseError(page.filename().string() + ": " + e.what());
        }
        out.skipped += r.skipped;
        ++out.pages;
        for (auto& rev : r.reviews) out.reviews.push_back(std::move(rev));
    }
    return out;
}

}  // namespace revsent::extract
