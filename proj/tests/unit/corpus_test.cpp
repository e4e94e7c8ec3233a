#include "semnet/corpus.hpp"
#include "semnet/error.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace semnet;
using namespace semnet::corpus;

namespace {

const std::string kFixtures = SEMNET_FIXTURE_DIR;

Document doc(std::string id, int year, std::vector<std::string> author_kw, std::vector<std::string> index_kw = {}) {
    Document d;
    d.id = std::move(id);
    d.title = "Title " + d.id;
    d.abstract_text = "Abstract of " + d.id;
    d.year = year;
    d.author_keywords = std::move(author_kw);
    d.index_keywords = std::move(index_kw);
    d.language = "English";
    d.doc_type = "Article";
    return d;
}

}  // namespace

TEST(Ingest, ThreeRowScopusFixture) {
    auto res = ingest(kFixtures + "/scopus_three.csv", Profile::ScopusCsv);
    EXPECT_EQ(res.documents.size(), 3u);
    EXPECT_EQ(res.rejected, 0u);
    const auto& d = res.documents[1];
    EXPECT_EQ(d.id, "2-s2.0-101");
    EXPECT_EQ(d.year, 2020);
    EXPECT_EQ(d.author_keywords, (std::vector<std::string>{"LCA", "building", "sustainability"}));
    EXPECT_NE(d.abstract_text.find("\"cradle-to-grave\""), std::string::npos);
    EXPECT_EQ(res.documents[2].doc_type, "Conference Paper");
    ASSERT_TRUE(res.documents[0].venue);
    EXPECT_EQ(*res.documents[0].venue, "Energy and Buildings");
}

TEST(Ingest, MissingAbstractIsRejected) {
    auto res = ingest(kFixtures + "/scopus_missing_abstract.csv", Profile::ScopusCsv);
    EXPECT_EQ(res.documents.size(), 2u);
    EXPECT_EQ(res.rejected, 1u);
}

TEST(Ingest, EmptyFileHasZeroValidRecords) {
    try {
        ingest(kFixtures + "/empty.csv", Profile::ScopusCsv);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("zero valid records"), std::string::npos);
    }
}

TEST(Ingest, UnreadableFileAndUnknownProfile) {
    EXPECT_THROW(ingest(kFixtures + "/does_not_exist.csv", Profile::ScopusCsv), IoError);
    EXPECT_THROW(parse_profile("bibtex"), ParseError);
}

TEST(Ingest, JsonlRoundTripAndDedup) {
    const auto first = ingest(kFixtures + "/scopus_three.csv", Profile::ScopusCsv).documents;
    const auto jsonl = first.to_jsonl();
    const auto again = ingest_text(jsonl + jsonl, Profile::GenericJsonl).documents;
    EXPECT_EQ(again.documents(), first.documents());
    EXPECT_EQ(again.content_hash(), first.content_hash());
    const auto doubled = ingest_text(jsonl + jsonl, Profile::GenericJsonl);
    EXPECT_EQ(doubled.duplicates, 3u);
}

TEST(Ingest, DedupByTitleAndYearWhenIdMissing) {
    const std::string text =
        R"({"title":"Same Title","abstract":"a","year":2001})" "\n"
        R"({"title":"same  title","abstract":"b","year":2001})" "\n"
        R"({"title":"Same Title","abstract":"c","year":2002})" "\n";
    auto res = ingest_text(text, Profile::GenericJsonl);
    EXPECT_EQ(res.documents.size(), 2u);
    EXPECT_EQ(res.duplicates, 1u);
    EXPECT_EQ(res.documents[0].id.rfind("doc-", 0), 0u);
}

TEST(Ingest, YearOutOfRangeRejected) {
    const std::string text = R"({"id":"a","title":"t","abstract":"a","year":1850})" "\n"
                             R"({"id":"b","title":"t","abstract":"a","year":2000})" "\n";
    auto res = ingest_text(text, Profile::GenericJsonl);
    EXPECT_EQ(res.documents.size(), 1u);
    EXPECT_EQ(res.rejected, 1u);
}

TEST(Filter, FourOfTenCarryBothTerms) {
    std::vector<Document> docs;
    for (int i = 0; i < 10; ++i) {
        std::vector<std::string> kw{"energy"};
        if (i % 2 == 0) kw.push_back("Green Building design");
        if (i % 3 == 0 || i == 4) kw.push_back("sustainability assessment");
        docs.push_back(doc("d" + std::to_string(i), 2000 + i, kw));
    }
    // 0, 4 and 6 carry both; 8 gets the second term through its index keywords.
    docs[8].index_keywords.push_back("SUSTAINABILITY");
    DocumentSet set(docs, {});
    KeywordQuery q;
    q.required_terms = {{"building"}, {"sustainability"}};
    const auto kept = filter_query(set, q);
    EXPECT_EQ(kept.size(), 4u);
    // Linear-scan oracle.
    std::size_t expected = 0;
    for (const auto& d : docs) {
        bool b = false, s = false;
        for (const auto* list : {&d.author_keywords, &d.index_keywords}) {
            for (auto k : *list) {
                for (auto& c : k) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
                b = b || k.find("building") != std::string::npos;
                s = s || k.find("sustainability") != std::string::npos;
            }
        }
        expected += b && s;
    }
    EXPECT_EQ(kept.size(), expected);
    EXPECT_EQ(kept.provenance().size(), 1u);
}

TEST(Filter, YearLanguageTypeAndFields) {
    std::vector<Document> docs{doc("a", 1995, {"building"}), doc("b", 2000, {"building"}), doc("c", 2000, {"x"})};
    docs[1].language = "German";
    docs[2].title = "Building physics";
    DocumentSet set(docs, {});
    KeywordQuery q;
    q.required_terms = {{"building"}};
    q.min_year = 1996;
    EXPECT_EQ(filter_query(set, q).size(), 1u);  // b only
    q.language = "english";
    EXPECT_EQ(filter_query(set, q).size(), 0u);
    q.search_fields.push_back(SearchField::Title);
    EXPECT_EQ(filter_query(set, q).size(), 1u);  // c via title
    q.doc_types = {"Review"};
    EXPECT_EQ(filter_query(set, q).size(), 0u);
}

TEST(Filter, QueryJsonRoundTripAndValidation) {
    auto q = query_from_json(R"({"required_terms":[["building"],["sustainability","sustainable"]],
        "year_range":[1996,2022],"language":"English","doc_types":["Article"]})");
    EXPECT_EQ(q.required_terms.size(), 2u);
    EXPECT_EQ(q.min_year, 1996);
    auto q2 = query_from_json(query_to_json(q));
    EXPECT_EQ(query_to_json(q2), query_to_json(q));
    EXPECT_THROW(query_from_json(R"({"required_terms":[]})"), ParseError);
    EXPECT_THROW(query_from_json(R"({"required_terms":[["a"]],"year_range":[2000,1990]})"), ParseError);
}

TEST(Filter, PropertyIdempotentAndMonotone) {
    std::mt19937_64 rng(5);
    const std::vector<std::string> vocab{"building", "energy", "solar", "timber", "lca", "retrofit"};
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    std::uniform_int_distribution<int> year(1990, 2022), nkw(0, 4);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Document> docs;
        for (int i = 0; i < 30; ++i) {
            std::vector<std::string> kw;
            for (int k = nkw(rng); k > 0; --k) kw.push_back(vocab[pick(rng)]);
            docs.push_back(doc("d" + std::to_string(i), year(rng), kw));
        }
        DocumentSet set(docs, {});
        KeywordQuery q;
        q.required_terms = {{vocab[pick(rng)]}};
        const auto once = filter_query(set, q);
        EXPECT_EQ(filter_query(once, q).documents(), once.documents());
        auto narrower = q;
        narrower.required_terms.push_back({vocab[pick(rng)]});
        EXPECT_LE(filter_query(set, narrower).size(), once.size());
        const auto counts = count_by_year(set);
        const auto total = std::accumulate(counts.begin(), counts.end(), std::size_t{0},
                                           [](std::size_t acc, const auto& kv) { return acc + kv.second; });
        EXPECT_EQ(total, set.size());
    }
}

TEST(CountByYear, EmptySetAndGaps) {
    EXPECT_TRUE(count_by_year(DocumentSet{}).empty());
    DocumentSet set({doc("a", 2000, {}), doc("b", 2000, {}), doc("c", 2002, {})}, {});
    const auto counts = count_by_year(set);
    EXPECT_EQ(counts, (std::map<int, std::size_t>{{2000, 2}, {2001, 0}, {2002, 1}}));
}
