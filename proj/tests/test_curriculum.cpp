#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "ivq/curriculum.hpp"
#include "ivq/errors.hpp"
#include "ivq/jsonl.hpp"

using namespace ivq;

namespace {

Instance make_instance(const std::string& id) {
    Instance inst;
    inst.id = id;
    inst.category = Category::analytical;
    inst.task = "scale-chain";
    inst.images = {"images/" + id + "_img1.png", "images/" + id + "_img2.png"};
    inst.mcq.question = "How many times as tall as the palm (image1) is the truck (image2)?";
    inst.mcq.options = {"18 times", "12 times", "27 times", "1.5 times"};
    inst.mcq.answer_index = 0;
    inst.reasoning.summary = "s1 text for " + id;
    inst.reasoning.caption = "s2: image1 shows the palm. image2 shows the truck.";
    inst.reasoning.text2region = "s3 binds palm to image1 and truck to image2.";
    inst.reasoning.region2region = "s4 states the chained ratios.";
    inst.reasoning.conclusion = "s5 concludes 18 times.";
    return inst;
}

} // namespace

TEST_CASE("difficulty classification follows the >= 0.7 rule") {
    std::vector<TrialLog> logs = {{"a", 10, 7}, {"b", 10, 6}, {"c", 10, 0}, {"d", 10, 10}};
    auto records = classify_difficulty(logs);
    REQUIRE(records.size() == 4);
    CHECK(records[0].cls == DifficultyClass::simple);      // 7/10: boundary is Simple
    CHECK(records[1].cls == DifficultyClass::challenging); // 6/10
    CHECK(records[2].cls == DifficultyClass::challenging); // 0/10
    CHECK(records[3].cls == DifficultyClass::simple);      // 10/10
}

TEST_CASE("classification is exact for every c with n = 10") {
    for (int c = 0; c <= 10; ++c) {
        auto records = classify_difficulty({{"q", 10, c}});
        bool simple = records[0].cls == DifficultyClass::simple;
        CHECK(simple == (c >= 7));
    }
}

TEST_CASE("raising the threshold never moves Challenging to Simple") {
    std::vector<TrialLog> logs;
    for (int c = 0; c <= 10; ++c) logs.push_back({"q" + std::to_string(c), 10, c});
    std::set<std::string> previously_simple;
    for (int t = 1; t <= 10; ++t) {
        auto records = classify_difficulty(logs, Rational(t, 10));
        std::set<std::string> simple;
        for (const auto& r : records) {
            if (r.cls == DifficultyClass::simple) simple.insert(r.question_id);
        }
        if (t > 1) {
            for (const auto& id : simple) CHECK(previously_simple.count(id) == 1);
        }
        previously_simple = simple;
    }
}

TEST_CASE("duplicate question ids are rejected") {
    CHECK_THROWS_AS(classify_difficulty({{"a", 10, 7}, {"a", 10, 3}}), DuplicateQuestionId);
}

TEST_CASE("trial log aggregation counts trials and correct answers") {
    namespace fs = std::filesystem;
    fs::path path = fs::temp_directory_path() / "ivq_trials.jsonl";
    {
        JsonlWriter out(path.string());
        for (int t = 0; t < 10; ++t) {
            out.write({{"question_id", "a"},
                       {"model_id", "m"},
                       {"trial_index", t},
                       {"predicted", t < 7 ? "A" : "B"},
                       {"correct", t < 7}});
        }
        for (int t = 0; t < 4; ++t) {
            out.write({{"question_id", "b"},
                       {"model_id", "m"},
                       {"trial_index", t},
                       {"predicted", "C"},
                       {"correct", t == 0}});
        }
    }
    auto logs = aggregate_trial_logs(path.string());
    REQUIRE(logs.size() == 2);
    CHECK(logs[0].question_id == "a");
    CHECK(logs[0].trials == 10);
    CHECK(logs[0].correct == 7);
    CHECK(logs[1].trials == 4);
    CHECK(logs[1].correct == 1);
    fs::remove(path);
}

TEST_CASE("figure-scheme stage transform: k steps move to the target") {
    Instance inst = make_instance("q1");
    std::string q = question_block(inst);

    auto s1 = stage_transform(inst, 1);
    CHECK(s1.input.rfind(q, 0) == 0);
    CHECK(s1.input.find("[SUMMARY]") != std::string::npos);
    CHECK(s1.input.find("[REGION2REGION]") != std::string::npos);
    CHECK(s1.input.find("[CONCLUSION]") == std::string::npos);
    CHECK(s1.target.rfind("[CONCLUSION]", 0) == 0);

    auto s3 = stage_transform(inst, 3);
    CHECK(s3.input.find("[SUMMARY]") != std::string::npos);
    CHECK(s3.input.find("[CAPTION]") != std::string::npos);
    CHECK(s3.input.find("[TEXT2REGION]") == std::string::npos);
    CHECK(s3.target.rfind("[TEXT2REGION]", 0) == 0);
    CHECK(s3.target.find("[REGION2REGION]") != std::string::npos);
    CHECK(s3.target.find("[CONCLUSION]") != std::string::npos);

    auto s5 = stage_transform(inst, 5);
    CHECK(s5.input == q); // bare question, no step text
    CHECK(s5.target.rfind("[SUMMARY]", 0) == 0);
    CHECK(s5.images == inst.images);
}

TEST_CASE("stage partition reconstructs s1..s5 for every k") {
    Instance inst = make_instance("q2");
    std::string q = question_block(inst);
    std::string full;
    for (int i = 0; i < kReasoningStepCount; ++i) {
        if (!full.empty()) full += "\n";
        full += step_header(i) + " " + reasoning_step(inst.reasoning, i);
    }
    for (int k = 1; k <= kStageCount; ++k) {
        auto sample = stage_transform(inst, k);
        REQUIRE(sample.input.rfind(q, 0) == 0);
        std::string input_steps = sample.input.substr(q.size());
        if (!input_steps.empty() && input_steps.front() == '\n') input_steps.erase(0, 1);
        std::string rebuilt = input_steps.empty() ? sample.target
                                                  : input_steps + "\n" + sample.target;
        CHECK(rebuilt == full);

        // counts: 5-k headers in the input, k in the target
        auto count_headers = [](const std::string& text) {
            int n = 0;
            for (int i = 0; i < kReasoningStepCount; ++i) {
                if (text.find(step_header(i)) != std::string::npos) ++n;
            }
            return n;
        };
        CHECK(count_headers(input_steps) == kStageCount - k);
        CHECK(count_headers(sample.target) == k);
    }
}

TEST_CASE("equation-scheme stage transform follows the literal equations") {
    Instance inst = make_instance("q3");
    std::string answer = answer_statement(inst);

    auto s1 = stage_transform(inst, 1, StageScheme::equation);
    CHECK(s1.input.find("[CONCLUSION]") != std::string::npos); // all steps in the input
    CHECK(s1.target == answer);

    auto s2 = stage_transform(inst, 2, StageScheme::equation);
    CHECK(s2.input.find("[REGION2REGION]") != std::string::npos);
    CHECK(s2.input.find("[CONCLUSION]") == std::string::npos);
    CHECK(s2.target.rfind(answer, 0) == 0); // answer first, then the moved step
    CHECK(s2.target.find("[CONCLUSION]") != std::string::npos);
}

TEST_CASE("missing step raises MissingStep") {
    Instance inst = make_instance("q4");
    inst.reasoning.region2region.clear();
    CHECK_THROWS_AS(stage_transform(inst, 2), MissingStep);
}

TEST_CASE("sample size is round(fraction * pool) with distinct ids") {
    Rational fraction(2, 5);
    for (std::size_t n = 1; n <= 200; ++n) {
        std::vector<std::string> pool;
        for (std::size_t i = 0; i < n; ++i) pool.push_back("id" + std::to_string(i));
        auto sample = sample_stage_pool(pool, fraction, 9, 1);
        CHECK(sample.size() == static_cast<std::size_t>(std::lround(0.4 * static_cast<double>(n))));
        std::set<std::string> unique(sample.begin(), sample.end());
        CHECK(unique.size() == sample.size()); // without replacement
    }
    CHECK_THROWS_AS(sample_stage_pool({}, fraction, 9, 1), EmptyPool);
}

TEST_CASE("half-up rounding on fractions with .5 remainders") {
    CHECK(sample_size(5, Rational(1, 2)) == 3);  // 2.5 rounds away from zero
    CHECK(sample_size(2, Rational(1, 4)) == 1);  // 0.5 rounds up
    CHECK(sample_size(10, Rational(2, 5)) == 4);
    CHECK(sample_size(0, Rational(2, 5)) == 0);
}

TEST_CASE("stage sampling is deterministic and stage-dependent") {
    std::vector<std::string> pool;
    for (int i = 0; i < 100; ++i) pool.push_back("id" + std::to_string(i));
    auto a = sample_stage_pool(pool, Rational(2, 5), 5, 2);
    auto b = sample_stage_pool(pool, Rational(2, 5), 5, 2);
    CHECK(a == b);
    auto c = sample_stage_pool(pool, Rational(2, 5), 5, 3);
    CHECK(a != c);

    auto whole = sample_stage_pool(pool, Rational(1, 1), 5, 1);
    CHECK(whole.size() == pool.size());
    CHECK(std::set<std::string>(whole.begin(), whole.end()) ==
          std::set<std::string>(pool.begin(), pool.end()));
    CHECK(whole != pool); // fraction 1.0 still shuffles
}

TEST_CASE("build_stage_files partitions 60 Simple / 40 Challenging") {
    namespace fs = std::filesystem;
    std::vector<Instance> instances;
    std::vector<DifficultyRecord> records;
    for (int i = 0; i < 100; ++i) {
        std::string id = "q" + std::to_string(i);
        instances.push_back(make_instance(id));
        DifficultyRecord rec;
        rec.question_id = id;
        rec.trials = 10;
        rec.correct = i < 60 ? 8 : 2;
        rec.cls = i < 60 ? DifficultyClass::simple : DifficultyClass::challenging;
        records.push_back(rec);
    }

    fs::path dir = fs::temp_directory_path() / "ivq_stages";
    fs::remove_all(dir);
    auto report = build_stage_files(instances, records, dir.string(), Rational(2, 5), 3);
    CHECK(report.rows_per_stage[0] == 60);
    for (int k = 1; k <= kStageCount; ++k) {
        CHECK(report.rows_per_stage[static_cast<std::size_t>(k)] == 16);
        auto rows = read_jsonl((dir / ("stage" + std::to_string(k) + ".jsonl")).string());
        CHECK(rows.size() == 16);
        for (const auto& row : rows) CHECK(row.at("stage").get<int>() == k);
    }
    CHECK(report.warnings.empty());

    // stage 0 rows are untransformed question -> answer pairs
    auto stage0 = read_jsonl((dir / "stage0.jsonl").string());
    REQUIRE(stage0.size() == 60);
    CHECK(stage0[0].at("input").get<std::string>().rfind(
              "How many times as tall as the palm", 0) == 0);
    CHECK(stage0[0].at("target").get<std::string>() == "The answer is A: 18 times");
    fs::remove_all(dir);
}

TEST_CASE("all-Simple datasets leave stages 1-5 empty with a warning") {
    namespace fs = std::filesystem;
    std::vector<Instance> instances = {make_instance("q0"), make_instance("q1")};
    std::vector<DifficultyRecord> records;
    for (const auto& inst : instances) {
        records.push_back({inst.id, 10, 9, DifficultyClass::simple});
    }
    fs::path dir = fs::temp_directory_path() / "ivq_stages_simple";
    fs::remove_all(dir);
    auto report = build_stage_files(instances, records, dir.string(), Rational(2, 5), 3);
    CHECK(report.rows_per_stage[0] == 2);
    for (int k = 1; k <= kStageCount; ++k) {
        CHECK(report.rows_per_stage[static_cast<std::size_t>(k)] == 0);
        CHECK(fs::exists(dir / ("stage" + std::to_string(k) + ".jsonl")));
    }
    REQUIRE(report.warnings.size() == 1);
    fs::remove_all(dir);
}

TEST_CASE("instances without difficulty records are rejected") {
    namespace fs = std::filesystem;
    std::vector<Instance> instances = {make_instance("q0"), make_instance("q1")};
    std::vector<DifficultyRecord> records = {{"q0", 10, 9, DifficultyClass::simple}};
    fs::path dir = fs::temp_directory_path() / "ivq_stages_uncov";
    CHECK_THROWS_AS(
        build_stage_files(instances, records, dir.string(), Rational(2, 5), 3),
        UncoveredInstance);
    fs::remove_all(dir);
}

TEST_CASE("difficulty records round-trip through JSONL") {
    namespace fs = std::filesystem;
    fs::path path = fs::temp_directory_path() / "ivq_records.jsonl";
    std::vector<DifficultyRecord> records = {{"a", 10, 7, DifficultyClass::simple},
                                             {"b", 10, 2, DifficultyClass::challenging}};
    {
        JsonlWriter out(path.string());
        for (const auto& r : records) out.write(difficulty_record_to_json(r));
    }
    auto back = load_difficulty_records(path.string());
    REQUIRE(back.size() == 2);
    CHECK(back[0].question_id == "a");
    CHECK(back[0].cls == DifficultyClass::simple);
    CHECK(back[1].cls == DifficultyClass::challenging);
    fs::remove(path);
}
