#include "ivq/curriculum.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "ivq/errors.hpp"
#include "ivq/jsonl.hpp"
#include "ivq/rng.hpp"

namespace ivq {

const char* difficulty_name(DifficultyClass c) {
    return c == DifficultyClass::simple ? "Simple" : "Challenging";
}

std::vector<TrialLog> aggregate_trial_logs(const std::string& jsonl_path) {
    std::vector<TrialLog> logs;
    std::vector<std::string> order;
    std::map<std::string, TrialLog> by_id;
    for (const auto& j : read_jsonl(jsonl_path)) {
        std::string id = j.at("question_id").get<std::string>();
        auto [it, inserted] = by_id.try_emplace(id, TrialLog{id, 0, 0});
        if (inserted) order.push_back(id);
        it->second.trials += 1;
        if (j.at("correct").get<bool>()) it->second.correct += 1;
    }
    for (const auto& id : order) logs.push_back(by_id.at(id));
    return logs;
}

std::vector<DifficultyRecord> classify_difficulty(const std::vector<TrialLog>& logs,
                                                  const Rational& threshold) {
    if (logs.empty()) throw ValidationFailure("no trial logs to classify");
    std::set<std::string> seen;
    std::vector<DifficultyRecord> records;
    for (const auto& log : logs) {
        if (!seen.insert(log.question_id).second) {
            throw DuplicateQuestionId("duplicate trial log for " + log.question_id);
        }
        if (log.trials < 1 || log.correct < 0 || log.correct > log.trials) {
            throw ValidationFailure("trial counts out of range for " + log.question_id);
        }
        DifficultyRecord rec;
        rec.question_id = log.question_id;
        rec.trials = log.trials;
        rec.correct = log.correct;
        rec.cls = ratio_at_least(log.correct, log.trials, threshold)
                      ? DifficultyClass::simple
                      : DifficultyClass::challenging;
        records.push_back(std::move(rec));
    }
    return records;
}

StageScheme stage_scheme_from_string(const std::string& name) {
    if (name == "figure") return StageScheme::figure;
    if (name == "equation") return StageScheme::equation;
    throw ConfigInvalid("unknown stage scheme: " + name);
}

std::string step_header(int step_index) {
    static const char* headers[5] = {"[SUMMARY]", "[CAPTION]", "[TEXT2REGION]",
                                     "[REGION2REGION]", "[CONCLUSION]"};
    return headers[step_index];
}

std::string answer_statement(const Instance& instance) {
    return std::string("The answer is ") + instance.mcq.answer_key() + ": " +
           instance.mcq.answer_text();
}

namespace {

std::string step_text(const Instance& instance, int index) {
    const std::string& text = reasoning_step(instance.reasoning, index);
    if (text.empty()) {
        throw MissingStep(std::string("reasoning step missing: ") +
                          reasoning_step_names()[static_cast<std::size_t>(index)]);
    }
    return step_header(index) + " " + text;
}

} // namespace

StageSample stage_transform(const Instance& instance, int stage, StageScheme scheme) {
    if (stage < 1 || stage > kStageCount) {
        throw ConfigInvalid("stage must be in 1..5");
    }
    StageSample sample;
    sample.stage = stage;
    sample.id = instance.id;
    sample.images = instance.images;
    sample.input = question_block(instance);

    if (scheme == StageScheme::figure) {
        // input Q + s1..s(5-k); target s(5-k+1)..s5, conclusion carries the answer
        int input_steps = kStageCount - stage;
        for (int i = 0; i < input_steps; ++i) sample.input += "\n" + step_text(instance, i);
        for (int i = input_steps; i < kStageCount; ++i) {
            if (!sample.target.empty()) sample.target += "\n";
            sample.target += step_text(instance, i);
        }
    } else {
        // stage 1: input Q + s1..s5, target = answer statement; later stages
        // move trailing steps behind the answer statement
        int input_steps = stage == 1 ? kStageCount : kStageCount + 1 - stage;
        for (int i = 0; i < input_steps; ++i) sample.input += "\n" + step_text(instance, i);
        sample.target = answer_statement(instance);
        for (int i = input_steps; i < kStageCount; ++i) {
            sample.target += "\n" + step_text(instance, i);
        }
    }
    return sample;
}

std::int64_t sample_size(std::size_t pool_size, const Rational& fraction) {
    // round half away from zero, exactly: floor((2*n*num + den) / (2*den))
    std::int64_t n = static_cast<std::int64_t>(pool_size);
    return (2 * n * fraction.num + fraction.den) / (2 * fraction.den);
}

std::vector<std::string> sample_stage_pool(const std::vector<std::string>& pool,
                                           const Rational& fraction, std::uint64_t seed,
                                           int stage) {
    if (fraction.num <= 0 || Rational(1) < fraction) {
        throw ConfigInvalid("sampling fraction must be in (0, 1]");
    }
    if (pool.empty()) throw EmptyPool("challenging pool is empty");

    std::vector<std::string> ids = pool;
    Rng rng(derive_seed(seed, 0x57A6E000ULL + static_cast<std::uint64_t>(stage)));
    rng.shuffle(ids);
    ids.resize(static_cast<std::size_t>(sample_size(pool.size(), fraction)));
    return ids;
}

StageFileReport build_stage_files(const std::vector<Instance>& instances,
                                  const std::vector<DifficultyRecord>& records,
                                  const std::string& out_dir, const Rational& fraction,
                                  std::uint64_t seed, StageScheme scheme) {
    std::map<std::string, const DifficultyRecord*> by_id;
    for (const auto& rec : records) by_id[rec.question_id] = &rec;

    std::map<std::string, const Instance*> instances_by_id;
    std::vector<const Instance*> simple;
    std::vector<std::string> challenging;
    for (const auto& inst : instances) {
        auto it = by_id.find(inst.id);
        if (it == by_id.end()) {
            throw UncoveredInstance("no difficulty record for instance " + inst.id);
        }
        instances_by_id[inst.id] = &inst;
        if (it->second->cls == DifficultyClass::simple) {
            simple.push_back(&inst);
        } else {
            challenging.push_back(inst.id);
        }
    }

    std::filesystem::create_directories(out_dir);
    StageFileReport report;
    report.rows_per_stage.assign(kStageCount + 1, 0);

    {
        JsonlWriter out(out_dir + "/stage0.jsonl");
        for (const Instance* inst : simple) {
            StageSample sample;
            sample.stage = 0;
            sample.id = inst->id;
            sample.input = question_block(*inst);
            sample.target = answer_statement(*inst);
            sample.images = inst->images;
            out.write(stage_sample_to_json(sample));
            report.rows_per_stage[0] += 1;
        }
    }

    for (int stage = 1; stage <= kStageCount; ++stage) {
        JsonlWriter out(out_dir + "/stage" + std::to_string(stage) + ".jsonl");
        if (challenging.empty()) continue;
        for (const auto& id : sample_stage_pool(challenging, fraction, seed, stage)) {
            out.write(stage_sample_to_json(
                stage_transform(*instances_by_id.at(id), stage, scheme)));
            report.rows_per_stage[static_cast<std::size_t>(stage)] += 1;
        }
    }

    if (challenging.empty()) {
        report.warnings.push_back("challenging pool is empty; stages 1-5 are empty");
        std::cerr << "warning: " << report.warnings.back() << "\n";
    }
    return report;
}

nlohmann::ordered_json stage_sample_to_json(const StageSample& sample) {
    nlohmann::ordered_json j;
    j["id"] = sample.id;
    j["stage"] = sample.stage;
    j["input"] = sample.input;
    j["target"] = sample.target;
    j["images"] = sample.images;
    return j;
}

nlohmann::ordered_json difficulty_record_to_json(const DifficultyRecord& record) {
    nlohmann::ordered_json j;
    j["question_id"] = record.question_id;
    j["trials"] = record.trials;
    j["correct"] = record.correct;
    j["p"] = record.p();
    j["class"] = difficulty_name(record.cls);
    return j;
}

std::vector<DifficultyRecord> load_difficulty_records(const std::string& jsonl_path) {
    std::vector<DifficultyRecord> records;
    for (const auto& j : read_jsonl(jsonl_path)) {
        DifficultyRecord rec;
        rec.question_id = j.at("question_id").get<std::string>();
        rec.trials = j.at("trials").get<int>();
        rec.correct = j.at("correct").get<int>();
        rec.cls = j.at("class").get<std::string>() == "Simple" ? DifficultyClass::simple
                                                               : DifficultyClass::challenging;
        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace ivq
