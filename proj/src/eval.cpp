#include "ivq/eval.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "ivq/errors.hpp"
#include "ivq/jsonl.hpp"

namespace ivq {

const char* match_method_name(MatchMethod m) {
    switch (m) {
        case MatchMethod::rule: return "rule";
        case MatchMethod::external: return "external";
        case MatchMethod::unmatched: return "unmatched";
    }
    return "";
}

namespace {

std::string lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

MatchResult match_answer(const std::string& raw, const std::array<std::string, 4>& options) {
    // rule 1: standalone key-letter tokens
    std::set<char> claimed;
    std::size_t i = 0;
    while (i < raw.size()) {
        if (!std::isalnum(static_cast<unsigned char>(raw[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < raw.size() && std::isalnum(static_cast<unsigned char>(raw[i]))) ++i;
        if (i - start == 1) {
            char c = static_cast<char>(std::toupper(static_cast<unsigned char>(raw[start])));
            if (c >= 'A' && c <= 'D') claimed.insert(c);
        }
    }
    if (claimed.size() == 1) return {*claimed.begin(), MatchMethod::rule};
    if (claimed.size() > 1) return {std::nullopt, MatchMethod::unmatched};

    // rule 2: unique option-text containment (case-insensitive)
    std::string raw_lower = lower(raw);
    std::optional<char> found;
    for (int k = 0; k < 4; ++k) {
        const std::string& opt = options[static_cast<std::size_t>(k)];
        if (opt.empty()) continue;
        if (raw_lower.find(lower(opt)) != std::string::npos) {
            if (found.has_value()) return {std::nullopt, MatchMethod::unmatched};
            found = static_cast<char>('A' + k);
        }
    }
    if (found.has_value()) return {found, MatchMethod::rule};
    return {std::nullopt, MatchMethod::unmatched};
}

ScoreReport score(const std::vector<Prediction>& predictions,
                  const std::vector<GoldItem>& gold) {
    std::map<std::string, const GoldItem*> gold_by_id;
    for (const auto& g : gold) gold_by_id[g.id] = &g;

    std::map<std::string, const Prediction*> pred_by_id;
    for (const auto& p : predictions) {
        if (gold_by_id.find(p.question_id) == gold_by_id.end()) {
            throw UnknownQuestionId("prediction for unknown question " + p.question_id);
        }
        pred_by_id.emplace(p.question_id, &p); // first prediction per id wins
    }

    ScoreReport report;
    for (const auto& g : gold) {
        CategoryScore& cat = report.per_category[category_name(g.category)];
        cat.total += 1;
        report.overall.total += 1;

        auto it = pred_by_id.find(g.id);
        if (it == pred_by_id.end() || !it->second->match.key.has_value()) {
            report.unmatched += 1;
            continue;
        }
        if (*it->second->match.key == g.answer) {
            cat.correct += 1;
            report.overall.correct += 1;
        }
    }
    return report;
}

std::vector<GoldItem> load_gold(const std::string& instances_jsonl) {
    std::vector<GoldItem> gold;
    for (const auto& j : read_jsonl(instances_jsonl)) {
        GoldItem g;
        g.id = j.at("id").get<std::string>();
        g.category = category_from_string(j.at("category").get<std::string>());
        g.answer = j.at("answer").get<std::string>().at(0);
        for (int k = 0; k < 4; ++k) {
            g.options[static_cast<std::size_t>(k)] =
                j.at("options").at(std::string(1, static_cast<char>('A' + k))).get<std::string>();
        }
        gold.push_back(std::move(g));
    }
    return gold;
}

std::vector<std::pair<std::string, std::string>> load_predictions(const std::string& jsonl_path) {
    std::vector<std::pair<std::string, std::string>> preds;
    for (const auto& j : read_jsonl(jsonl_path)) {
        preds.emplace_back(j.at("question_id").get<std::string>(),
                           j.at("output").get<std::string>());
    }
    return preds;
}

nlohmann::ordered_json report_to_json(const ScoreReport& report) {
    nlohmann::ordered_json j;
    j["overall"] = {{"correct", report.overall.correct},
                    {"total", report.overall.total},
                    {"accuracy", report.overall.accuracy()}};
    nlohmann::ordered_json cats;
    for (const auto& [name, cat] : report.per_category) {
        cats[name] = {{"correct", cat.correct}, {"total", cat.total}, {"accuracy", cat.accuracy()}};
    }
    j["per_category"] = std::move(cats);
    j["unmatched"] = report.unmatched;
    return j;
}

std::string report_table(const ScoreReport& report) {
    std::ostringstream out;
    out << std::left << std::setw(14) << "category" << std::right << std::setw(9) << "correct"
        << std::setw(8) << "total" << std::setw(10) << "accuracy" << "\n";
    auto row = [&](const std::string& name, const CategoryScore& s) {
        out << std::left << std::setw(14) << name << std::right << std::setw(9) << s.correct
            << std::setw(8) << s.total << std::setw(10) << std::fixed << std::setprecision(4)
            << s.accuracy() << "\n";
    };
    for (const auto& [name, cat] : report.per_category) row(name, cat);
    row("overall", report.overall);
    out << std::left << std::setw(14) << "unmatched" << std::right << std::setw(9)
        << report.unmatched << "\n";
    return out.str();
}

} // namespace ivq
