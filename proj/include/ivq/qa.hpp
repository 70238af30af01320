#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "ivq/taskgen.hpp"
#include "ivq/templates.hpp"

namespace ivq {

struct Mcq {
    std::string question;
    std::array<std::string, 4> options; // keyed A-D by position
    int answer_index = 0;

    char answer_key() const { return static_cast<char>('A' + answer_index); }
    const std::string& answer_text() const {
        return options[static_cast<std::size_t>(answer_index)];
    }
};

struct ReasoningSteps {
    std::string summary;
    std::string caption;
    std::string text2region;
    std::string region2region;
    std::string conclusion;
};

inline constexpr int kReasoningStepCount = 5;

// step name + accessor, in chain order s1..s5
const std::array<const char*, 5>& reasoning_step_names();
const std::string& reasoning_step(const ReasoningSteps& steps, int index);

struct Segment {
    enum class Kind { text, image };
    Kind kind = Kind::text;
    std::string text;     // text segments
    int image_index = 0;  // 1-based, image segments
    std::string image_path;
};

struct Instance {
    std::string id;
    Category category = Category::spatial;
    std::string task;
    std::vector<Segment> segments;
    std::vector<std::string> images; // relative paths, in image-index order
    Mcq mcq;
    ReasoningSteps reasoning;
    nlohmann::ordered_json provenance;
};

// ---------------------------------------------------------------------------
// MCQ construction: correct option from ground truth, three provably wrong
// distractors, seeded Fisher-Yates option order.
// ---------------------------------------------------------------------------

Mcq build_mcq(const SpatialTaskFacts& facts, const QuestionTemplate& tmpl, std::uint64_t seed);
Mcq build_mcq(const SequenceTaskFacts& facts, const QuestionTemplate& tmpl, std::uint64_t seed);
Mcq build_mcq(const ScaleChainFacts& facts, const QuestionTemplate& tmpl, std::uint64_t seed);

// option sentence for one relation fact, used by MCQ construction and tests
std::string relation_sentence(const RelationFact& fact, const Scene& scene,
                              const QuestionTemplate& tmpl);

// "image2, image3, image1" for a chronological order given as displayed
// image indices (0-based)
std::string ordering_text(const std::vector<int>& order);

// per-image caption sentences, in image-index order
std::vector<std::string> image_descriptions(const SpatialTaskFacts& facts);
std::vector<std::string> image_descriptions(const SequenceTaskFacts& facts);
std::vector<std::string> image_descriptions(const ScaleChainFacts& facts);

ReasoningSteps annotate_reasoning(const SpatialTaskFacts& facts, const Mcq& mcq);
ReasoningSteps annotate_reasoning(const SequenceTaskFacts& facts, const Mcq& mcq);
ReasoningSteps annotate_reasoning(const ScaleChainFacts& facts, const Mcq& mcq);

// ---------------------------------------------------------------------------
// assembly & serialization
// ---------------------------------------------------------------------------

// Interleaves one caption-derived lead-in per image with the images in index
// order, appends the question text, then validates every Instance invariant.
// Throws ValidationFailure naming the violated invariant.
Instance assemble_instance(Category category, const std::string& task,
                           const std::vector<std::string>& lead_ins,
                           const std::vector<std::string>& image_paths, const Mcq& mcq,
                           const ReasoningSteps& reasoning, const std::string& id,
                           nlohmann::ordered_json provenance);

void validate_instance(const Instance& instance);

nlohmann::ordered_json instance_to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& j);

// question plus canonical A-D option block; the "Q" of curriculum staging
std::string question_block(const Instance& instance);

} // namespace ivq
