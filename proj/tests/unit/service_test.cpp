#include "oracles.hpp"

#include "semnet/error.hpp"
#include "semnet/io.hpp"
#include "semnet/lexicon.hpp"
#include "semnet/service.hpp"

#include <gtest/gtest.h>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>

using namespace semnet;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = SEMNET_FIXTURE_DIR;

class ServiceTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("semnet-service-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) +
                "-" + std::to_string(::getpid()));
        fs::remove_all(dir_);
        boot(1);
    }
    void TearDown() override {
        client_.reset();
        svc_.reset();
        fs::remove_all(dir_);
    }

    void boot(unsigned workers) {
        client_.reset();
        svc_.reset();
        svc_.emplace(service::ServiceOptions{dir_, workers, 1});
        port_ = svc_->start("127.0.0.1", 0);
        client_.emplace("127.0.0.1", port_);
    }

    json body(const httplib::Result& r) { return json::parse(r->body); }

    std::string post_lexicon(const std::string& text) {
        auto r = client_->Post("/lexicons", text, "application/json");
        EXPECT_EQ(r->status, 201) << r->body;
        return body(r)["id"];
    }

    std::string post_corpus(const corpus::DocumentSet& docs) {
        auto r = client_->Post("/corpora?profile=generic-jsonl", docs.to_jsonl(), "application/x-ndjson");
        EXPECT_EQ(r->status, 201) << r->body;
        return body(r)["id"];
    }

    fs::path dir_;
    int port_ = 0;
    std::optional<service::Service> svc_;
    std::optional<httplib::Client> client_;
};

}  // namespace

TEST_F(ServiceTest, LexiconRoundTripIsCanonical) {
    const auto text = io::read_file(kFixtures / "building_lexicon.json");
    const auto id = post_lexicon(text);
    auto r = client_->Get("/lexicons/" + id);
    ASSERT_EQ(r->status, 200);
    EXPECT_EQ(r->body, lexicon::to_json(lexicon::from_json(text)));
    EXPECT_EQ(client_->Get("/lexicons/" + id + "?version=2")->status, 404);
    EXPECT_EQ(client_->Get("/lexicons/nope")->status, 404);
}

TEST_F(ServiceTest, CollidingLexiconNamesToken) {
    auto r = client_->Post("/lexicons", io::read_file(kFixtures / "colliding_lexicon.json"), "application/json");
    ASSERT_EQ(r->status, 422);
    const auto j = body(r);
    EXPECT_EQ(j["code"], "invalid-lexicon");
    EXPECT_EQ(j["details"]["token"], "retrofit");
}

TEST_F(ServiceTest, OptimisticLexiconEdits) {
    const auto id = post_lexicon(io::read_file(kFixtures / "building_lexicon.json"));
    const json edit{{"base_version", 1}, {"cluster", "Materials"}, {"add", {"glulam"}}};
    auto r = client_->Put("/lexicons/" + id, edit.dump(), "application/json");
    ASSERT_EQ(r->status, 200) << r->body;
    EXPECT_EQ(body(r)["version"], 2);

    // Same base again is stale and is not merged.
    const json stale{{"base_version", 1}, {"cluster", "Materials"}, {"add", {"brick"}}};
    r = client_->Put("/lexicons/" + id, stale.dump(), "application/json");
    ASSERT_EQ(r->status, 409);
    EXPECT_EQ(body(r)["code"], "version-conflict");
    EXPECT_EQ(body(r)["details"]["latest_version"], 2);
    const auto latest = lexicon::from_json(client_->Get("/lexicons/" + id)->body);
    EXPECT_TRUE(latest.find("Materials")->keywords.count("glulam"));
    EXPECT_FALSE(latest.find("Materials")->keywords.count("brick"));

    r = client_->Put("/lexicons/" + id, json{{"cluster", "Materials"}}.dump(), "application/json");
    EXPECT_EQ(r->status, 400);
    r = client_->Put("/lexicons/" + id, json{{"base_version", 2}, {"cluster", "Materials"}, {"add", {"retrofit"}}}.dump(),
                     "application/json");
    EXPECT_EQ(r->status, 422);
    EXPECT_EQ(body(r)["details"]["token"], "retrofit");
}

TEST_F(ServiceTest, CorpusUploadStatsAndFilter) {
    auto r = client_->Post("/corpora?profile=scopus-csv", io::read_file(kFixtures / "scopus_three.csv"), "text/csv");
    ASSERT_EQ(r->status, 201) << r->body;
    const std::string id = body(r)["id"];
    r = client_->Get("/corpora/" + id + "/stats");
    ASSERT_EQ(r->status, 200);
    EXPECT_EQ(body(r)["documents"], 3);

    r = client_->Post("/corpora/" + id + "/filter", R"({"required_terms": [["sustainability"]]})", "application/json");
    ASSERT_EQ(r->status, 201) << r->body;
    EXPECT_NE(body(r)["id"], id);
    EXPECT_EQ(body(r)["parent"], id);

    r = client_->Post("/corpora?profile=scopus-csv", "not,a\nheader,row\n", "text/csv");
    EXPECT_EQ(r->status, 422);
    EXPECT_EQ(body(r)["code"], "invalid-corpus");
    EXPECT_EQ(client_->Get("/corpora/c-0000/stats")->status, 404);
}

TEST_F(ServiceTest, Suggestions) {
    auto r = client_->Get("/suggest?term=house&provider=external&k=3");
    ASSERT_EQ(r->status, 200) << r->body;
    EXPECT_LE(json::parse(r->body).size(), 3u);
    EXPECT_EQ(client_->Get("/suggest?term=house&provider=oracle")->status, 400);
    EXPECT_EQ(client_->Get("/suggest")->status, 400);
    const auto cid = post_corpus(oracles::rising_cluster_corpus());
    r = client_->Get("/suggest?term=photovoltaic&provider=cooccurrence-pmi&k=5&corpus=" + cid);
    EXPECT_EQ(r->status, 200) << r->body;
}

TEST_F(ServiceTest, BadLexiconVersionIsConflict) {
    const auto cid = post_corpus(oracles::rising_cluster_corpus());
    const auto lid = post_lexicon(lexicon::to_json(oracles::rising_cluster_lexicon()));
    auto r = client_->Post("/runs", json{{"corpus_id", cid}, {"lexicon_id", lid}, {"lexicon_version", 7}}.dump(),
                           "application/json");
    ASSERT_EQ(r->status, 409);
    EXPECT_EQ(body(r)["code"], "version-conflict");
    r = client_->Post("/runs", json{{"corpus_id", cid}, {"lexicon_id", lid}}.dump(), "application/json");
    EXPECT_EQ(r->status, 400);
    r = client_->Post("/runs", json{{"corpus_id", "c-nope"}, {"lexicon_id", lid}, {"lexicon_version", 1}}.dump(),
                      "application/json");
    EXPECT_EQ(r->status, 404);
    r = client_->Post("/runs",
                      json{{"corpus_id", cid}, {"lexicon_id", lid}, {"lexicon_version", 1}, {"config", {{"wndow", 1}}}}
                          .dump(),
                      "application/json");
    EXPECT_EQ(r->status, 400);
}

TEST_F(ServiceTest, RunLifecycleAcrossRestart) {
    boot(0);  // runs queue up without executing
    const auto cid = post_corpus(oracles::rising_cluster_corpus());
    const auto lid = post_lexicon(lexicon::to_json(oracles::rising_cluster_lexicon()));
    auto r = client_->Post("/runs",
                           json{{"corpus_id", cid}, {"lexicon_id", lid}, {"lexicon_version", 1}, {"seed", 5}}.dump(),
                           "application/json");
    ASSERT_EQ(r->status, 202) << r->body;
    const std::string run = body(r)["id"];
    EXPECT_EQ(body(r)["status"], "pending");
    EXPECT_EQ(body(r)["parameters"]["seed"], 5);

    r = client_->Get("/runs/" + run + "/results/sbs_timeseries.csv");
    ASSERT_EQ(r->status, 200);
    EXPECT_EQ(body(r), (json{{"status", "running"}}));
    r = client_->Get("/runs/" + run + "/bundle");
    EXPECT_EQ(r->status, 409);
    EXPECT_EQ(body(r)["code"], "not-ready");

    boot(1);  // restart: the pending run is picked up again
    svc_->wait_idle();
    r = client_->Get("/runs/" + run);
    ASSERT_EQ(r->status, 200);
    EXPECT_EQ(body(r)["status"], "done") << r->body;
    r = client_->Get("/runs/" + run + "/results/sbs_timeseries.csv");
    ASSERT_EQ(r->status, 200);
    EXPECT_EQ(r->body.rfind("period,cluster,prevalence,diversity,connectivity,sbs\n", 0), 0u);
    EXPECT_EQ(client_->Get("/runs/" + run + "/results/secret.txt")->status, 404);
    r = client_->Get("/runs/" + run + "/bundle");
    ASSERT_EQ(r->status, 200);
    EXPECT_EQ(r->body.substr(0, 4), std::string("PK\x03\x04", 4));
    EXPECT_EQ(client_->Get("/runs/run-999")->status, 404);
}

TEST_F(ServiceTest, FailedRunReportsRunFailed) {
    boot(0);
    const auto cid = post_corpus(oracles::rising_cluster_corpus());
    const auto lid = post_lexicon(lexicon::to_json(oracles::rising_cluster_lexicon()));
    auto r = client_->Post("/runs", json{{"corpus_id", cid}, {"lexicon_id", lid}, {"lexicon_version", 1}}.dump(),
                           "application/json");
    ASSERT_EQ(r->status, 202);
    const std::string run = body(r)["id"];
    // The stored corpus goes bad before the queued run executes.
    io::write_file_atomic(dir_ / "corpora" / (cid + ".jsonl"), "{not json\n");
    boot(1);
    svc_->wait_idle();
    EXPECT_EQ(body(client_->Get("/runs/" + run))["status"], "failed");
    r = client_->Get("/runs/" + run + "/results/topics.json");
    EXPECT_EQ(r->status, 409);
    EXPECT_EQ(body(r)["code"], "run-failed");
    EXPECT_EQ(body(client_->Get("/runs/" + run + "/bundle"))["code"], "run-failed");
}

TEST_F(ServiceTest, RetriesWithSameRequestIdAreIdempotent) {
    const auto text = io::read_file(kFixtures / "building_lexicon.json");
    httplib::Headers h{{"Idempotency-Key", "abc"}};
    auto a = client_->Post("/lexicons", h, text, "application/json");
    auto b = client_->Post("/lexicons", h, text, "application/json");
    ASSERT_EQ(a->status, 201);
    EXPECT_EQ(a->status, b->status);
    EXPECT_EQ(a->body, b->body);
    EXPECT_NE(body(client_->Post("/lexicons", text, "application/json"))["id"], body(a)["id"]);

    const auto cid = post_corpus(oracles::rising_cluster_corpus());
    const auto lid = body(a)["id"].get<std::string>();
    const auto req = json{{"corpus_id", cid}, {"lexicon_id", lid}, {"lexicon_version", 1}, {"request_id", "run-req-1"}};
    auto r1 = client_->Post("/runs", req.dump(), "application/json");
    boot(1);  // replay survives a restart
    auto r2 = client_->Post("/runs", req.dump(), "application/json");
    EXPECT_EQ(body(r1)["id"], body(r2)["id"]);

    const json edit{{"base_version", 1}, {"cluster", "Materials"}, {"add", {"glulam"}}, {"request_id", "e1"}};
    auto e1 = client_->Put("/lexicons/" + lid, edit.dump(), "application/json");
    auto e2 = client_->Put("/lexicons/" + lid, edit.dump(), "application/json");
    EXPECT_EQ(e1->status, 200);
    EXPECT_EQ(e2->status, 200);
    EXPECT_EQ(e1->body, e2->body);
    svc_->wait_idle();
}

TEST_F(ServiceTest, PortInUseAndUnknownRoutes) {
    service::Service other({dir_ / "other", 1, 1});
    EXPECT_THROW(other.start("127.0.0.1", port_), IoError);
    auto r = client_->Get("/nothing/here");
    EXPECT_EQ(r->status, 404);
    EXPECT_EQ(body(r)["code"], "not-found");
}
