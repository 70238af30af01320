#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <chrono>
#include <thread>

#include "httplib.h"

#include "ivq/errors.hpp"
#include "ivq/eval.hpp"

using namespace ivq;

namespace {

const std::array<std::string, 4> kOptions = {
    "The red cube is to the left of the blue cone.",
    "The red cube is above the blue cone.",
    "18 times",
    "image2, image3, image1",
};

GoldItem gold_item(const std::string& id, Category cat, char answer) {
    GoldItem g;
    g.id = id;
    g.category = cat;
    g.answer = answer;
    g.options = kOptions;
    return g;
}

} // namespace

TEST_CASE("rule 1: standalone key letters with token boundaries") {
    CHECK(match_answer("The answer is (B).", kOptions).key == 'B');
    CHECK(match_answer("B", kOptions).key == 'B');
    CHECK(match_answer("b.", kOptions).key == 'B');
    CHECK(match_answer("I pick D", kOptions).key == 'D');
    CHECK(match_answer("grade", kOptions).key == std::nullopt); // letters inside words
    CHECK(match_answer("b12 is not a key", kOptions).key == std::nullopt);
    CHECK(match_answer("Either A or B", kOptions).key == std::nullopt); // ambiguous
    CHECK(match_answer("Either A or B", kOptions).method == MatchMethod::unmatched);
    CHECK(match_answer("A. A. A.", kOptions).key == 'A'); // repeated single key is fine
}

TEST_CASE("rule 2: unique option-text containment") {
    auto r = match_answer(kOptions[2], kOptions); // raw equals option C verbatim
    CHECK(r.key == 'C');
    CHECK(r.method == MatchMethod::rule);

    CHECK(match_answer("my final ordering would be image2, image3, image1 indeed", kOptions).key ==
          'D');

    // two option texts contained -> unmatched
    std::string both = kOptions[0] + " " + kOptions[1];
    CHECK(match_answer(both, kOptions).key == std::nullopt);

    CHECK(match_answer("no option text here", kOptions).key == std::nullopt);
}

TEST_CASE("match_answer is total and deterministic") {
    for (const std::string raw : {"", "garbage", "AB", "(C)", "a b c d", "18 times"}) {
        auto r1 = match_answer(raw, kOptions);
        auto r2 = match_answer(raw, kOptions);
        CHECK(r1.key == r2.key);
        CHECK(r1.method == r2.method);
        bool valid = !r1.key.has_value() || (*r1.key >= 'A' && *r1.key <= 'D');
        CHECK(valid);
    }
}

TEST_CASE("score aggregates per category and overall") {
    std::vector<GoldItem> gold = {
        gold_item("q1", Category::spatial, 'A'), gold_item("q2", Category::spatial, 'B'),
        gold_item("q3", Category::sequential, 'C'), gold_item("q4", Category::sequential, 'D')};
    std::vector<Prediction> preds;
    auto add = [&](const std::string& id, std::optional<char> key) {
        Prediction p;
        p.question_id = id;
        p.match.key = key;
        p.match.method = key.has_value() ? MatchMethod::rule : MatchMethod::unmatched;
        preds.push_back(p);
    };
    add("q1", 'A');
    add("q2", 'B');
    add("q3", 'D'); // wrong
    // q4 missing -> unmatched

    ScoreReport report = score(preds, gold);
    CHECK(report.per_category["spatial"].correct == 2);
    CHECK(report.per_category["spatial"].accuracy() == doctest::Approx(1.0));
    CHECK(report.per_category["sequential"].correct == 0);
    CHECK(report.overall.correct == 2);
    CHECK(report.overall.total == 4);
    CHECK(report.overall.accuracy() == doctest::Approx(0.5));
    CHECK(report.unmatched == 1);

    // permutation invariance
    std::reverse(preds.begin(), preds.end());
    ScoreReport again = score(preds, gold);
    CHECK(again.overall.correct == report.overall.correct);
    CHECK(again.unmatched == report.unmatched);

    // cross-check: overall = sum of per-category
    std::size_t sum = 0;
    for (const auto& [name, cat] : report.per_category) sum += cat.correct;
    CHECK(sum == report.overall.correct);
}

TEST_CASE("predictions for unknown questions are rejected") {
    std::vector<GoldItem> gold = {gold_item("q1", Category::spatial, 'A')};
    Prediction p;
    p.question_id = "nope";
    CHECK_THROWS_AS(score({p}, gold), UnknownQuestionId);
}

TEST_CASE("report JSON and table carry the same numbers") {
    std::vector<GoldItem> gold = {gold_item("q1", Category::analytical, 'C')};
    Prediction p;
    p.question_id = "q1";
    p.match.key = 'C';
    p.match.method = MatchMethod::rule;
    ScoreReport report = score({p}, gold);

    auto j = report_to_json(report);
    CHECK(j["overall"]["correct"] == 1);
    CHECK(j["per_category"]["analytical"]["accuracy"] == doctest::Approx(1.0));
    CHECK(j["unmatched"] == 0);

    std::string table = report_table(report);
    CHECK(table.find("analytical") != std::string::npos);
    CHECK(table.find("overall") != std::string::npos);
}

TEST_CASE("external matcher: contract, none, fallback paths") {
    httplib::Server server;
    std::atomic<int> mode{0}; // 0: key D, 1: none, 2: malformed, 3: slow
    server.Post("/match", [&](const httplib::Request& req, httplib::Response& res) {
        auto body = nlohmann::json::parse(req.body);
        REQUIRE(body.contains("question"));
        REQUIRE(body.contains("options"));
        REQUIRE(body.contains("raw_output"));
        switch (mode.load()) {
            case 0: res.set_content(R"({"key":"D"})", "application/json"); break;
            case 1: res.set_content(R"({"key":"none"})", "application/json"); break;
            case 2: res.set_content("not json at all", "application/json"); break;
            default:
                std::this_thread::sleep_for(std::chrono::milliseconds(1500));
                res.set_content(R"({"key":"D"})", "application/json");
                break;
        }
    });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread server_thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    MatcherConfig config;
    config.url = "http://127.0.0.1:" + std::to_string(port) + "/match";
    config.timeout_ms = 500;
    config.question = "which option?";

    auto r = match_answer_external("free text without keys", kOptions, config);
    CHECK(r.key == 'D');
    CHECK(r.method == MatchMethod::external);

    mode = 1;
    r = match_answer_external("free text without keys", kOptions, config);
    CHECK(!r.key.has_value());
    CHECK(r.method == MatchMethod::unmatched);

    mode = 2; // malformed body falls back to the rule result
    r = match_answer_external("The answer is (B).", kOptions, config);
    CHECK(r.key == 'B');
    CHECK(r.method == MatchMethod::rule);

    mode = 3; // timeout falls back too
    r = match_answer_external("The answer is (B).", kOptions, config);
    CHECK(r.key == 'B');
    CHECK(r.method == MatchMethod::rule);

    server.stop();
    server_thread.join();
}

TEST_CASE("external matcher falls back when the endpoint is unreachable") {
    MatcherConfig config;
    config.url = "http://127.0.0.1:1/match"; // nothing listens here
    config.timeout_ms = 200;
    auto r = match_answer_external("The answer is (B).", kOptions, config);
    CHECK(r.key == 'B');
    CHECK(r.method == MatchMethod::rule);
}
