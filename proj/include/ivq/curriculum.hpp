#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ivq/qa.hpp"
#include "ivq/rational.hpp"

namespace ivq {

struct TrialLog {
    std::string question_id;
    int trials = 0;  // n
    int correct = 0; // c
};

enum class DifficultyClass { simple, challenging };
const char* difficulty_name(DifficultyClass c);

struct DifficultyRecord {
    std::string question_id;
    int trials = 0;
    int correct = 0;
    DifficultyClass cls = DifficultyClass::challenging;

    double p() const { return static_cast<double>(correct) / trials; }
};

// Raw per-trial rows {question_id, model_id, trial_index, predicted, correct}
// aggregated to one TrialLog per question.
std::vector<TrialLog> aggregate_trial_logs(const std::string& jsonl_path);

// Simple iff c/n >= threshold (exact rational comparison; the boundary is
// Simple). Throws DuplicateQuestionId on repeated ids.
std::vector<DifficultyRecord> classify_difficulty(const std::vector<TrialLog>& logs,
                                                  const Rational& threshold = {7, 10});

struct StageSample {
    int stage = 0;
    std::string id;
    std::string input;
    std::string target;
    std::vector<std::string> images;
};

inline constexpr int kStageCount = 5;

// figure: stage k moves the last k steps into the target; the conclusion is
//   never part of the input and stage 5 trains from the bare question.
// equation: stage 1 packs all steps into the input with the answer statement
//   as target; later stages move steps to the target behind the answer.
enum class StageScheme { figure, equation };
StageScheme stage_scheme_from_string(const std::string& name);

// Concatenation uses one newline plus a fixed step-name header per step so
// the input/target partition stays machine-checkable.
std::string step_header(int step_index);
std::string answer_statement(const Instance& instance);

// Throws MissingStep when a reasoning step is empty.
StageSample stage_transform(const Instance& instance, int stage,
                            StageScheme scheme = StageScheme::figure);

// round(fraction * |pool|) ids without replacement; an independent seeded
// draw per stage. Throws EmptyPool on an empty pool.
std::vector<std::string> sample_stage_pool(const std::vector<std::string>& pool,
                                           const Rational& fraction, std::uint64_t seed,
                                           int stage);

std::int64_t sample_size(std::size_t pool_size, const Rational& fraction);

struct StageFileReport {
    std::vector<std::size_t> rows_per_stage; // index 0 = stage0 file
    std::vector<std::string> warnings;
};

// stage0.jsonl holds every Simple instance as a plain question->answer pair;
// stage1..5.jsonl hold sampled Challenging instances through stage_transform.
// Throws UncoveredInstance when an instance has no difficulty record.
StageFileReport build_stage_files(const std::vector<Instance>& instances,
                                  const std::vector<DifficultyRecord>& records,
                                  const std::string& out_dir, const Rational& fraction,
                                  std::uint64_t seed, StageScheme scheme = StageScheme::figure);

nlohmann::ordered_json stage_sample_to_json(const StageSample& sample);
nlohmann::ordered_json difficulty_record_to_json(const DifficultyRecord& record);
std::vector<DifficultyRecord> load_difficulty_records(const std::string& jsonl_path);

} // namespace ivq
