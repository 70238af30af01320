#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ivq/templates.hpp"

namespace ivq {

enum class MatchMethod { rule, external, unmatched };
const char* match_method_name(MatchMethod m);

struct MatchResult {
    std::optional<char> key; // 'A'..'D'
    MatchMethod method = MatchMethod::unmatched;
};

// Rule cascade: (1) a standalone key-letter token ("B", "(b)", "B."),
// case-insensitive with token boundaries; (2) unique option-text containment;
// (3) unmatched. Two different keys claimed at a step -> unmatched.
MatchResult match_answer(const std::string& raw, const std::array<std::string, 4>& options);

struct MatcherConfig {
    std::string url;     // http(s)://host[:port]/path
    std::string api_key; // sent as a bearer token when non-empty
    int timeout_ms = 5000;
    std::string question; // forwarded for context
};

// POSTs {question, options, raw_output} and expects {"key": "A".."D"|"none"}.
// Transport failures and malformed replies fall back to the rule result with
// a warning on stderr.
MatchResult match_answer_external(const std::string& raw,
                                  const std::array<std::string, 4>& options,
                                  const MatcherConfig& config);

struct GoldItem {
    std::string id;
    Category category = Category::spatial;
    char answer = 'A';
    std::array<std::string, 4> options;
};

struct Prediction {
    std::string question_id;
    std::string raw_output;
    MatchResult match;
};

struct CategoryScore {
    std::size_t correct = 0;
    std::size_t total = 0;
    double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

struct ScoreReport {
    std::map<std::string, CategoryScore> per_category;
    CategoryScore overall;
    std::size_t unmatched = 0;
};

// Missing predictions count as unmatched and incorrect; an id absent from
// gold raises UnknownQuestionId.
ScoreReport score(const std::vector<Prediction>& predictions, const std::vector<GoldItem>& gold);

std::vector<GoldItem> load_gold(const std::string& instances_jsonl);
std::vector<std::pair<std::string, std::string>> load_predictions(const std::string& jsonl_path);

nlohmann::ordered_json report_to_json(const ScoreReport& report);
std::string report_table(const ScoreReport& report);

} // namespace ivq
