#include "ivq/qa.hpp"

#include <algorithm>
#include <set>

#include "ivq/errors.hpp"
#include "ivq/rng.hpp"

namespace ivq {

namespace {

std::string fmt_num(double v) {
    long long i = static_cast<long long>(v);
    if (static_cast<double>(i) == v) return std::to_string(i);
    std::string s = std::to_string(v);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

std::string point_text(const Vec2& p) {
    return "(" + fmt_num(p.x) + ", " + fmt_num(p.y) + ")";
}

std::string image_ref(int index) { return "image" + std::to_string(index); }

// "image1, image2 and image3"
std::string image_list_text(int count) {
    std::string out;
    for (int k = 1; k <= count; ++k) {
        if (k > 1) out += (k == count) ? " and " : ", ";
        out += image_ref(k);
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

const char* relation_phrase(Relation r) {
    switch (r) {
        case Relation::left_of: return "to the left of";
        case Relation::right_of: return "to the right of";
        case Relation::above: return "above";
        case Relation::below: return "below";
        case Relation::in_front_of: return "in front of";
        case Relation::behind: return "behind";
        case Relation::occludes_in_view: return "partially covering";
    }
    return "";
}

// Shuffles [correct, d1, d2, d3] into A-D deterministically.
Mcq finalize_mcq(std::string question, const std::string& correct,
                 std::vector<std::string> distractors, std::uint64_t seed) {
    std::vector<std::string> all;
    all.push_back(correct);
    for (auto& d : distractors) all.push_back(std::move(d));
    std::set<std::string> unique(all.begin(), all.end());
    if (unique.size() != 4) {
        throw DistractorCollision("MCQ options are not pairwise distinct");
    }

    std::vector<int> order = {0, 1, 2, 3};
    Rng rng(derive_seed(seed, 0x0517));
    rng.shuffle(order);

    Mcq mcq;
    mcq.question = std::move(question);
    for (int pos = 0; pos < 4; ++pos) {
        mcq.options[static_cast<std::size_t>(pos)] = all[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])];
        if (order[static_cast<std::size_t>(pos)] == 0) mcq.answer_index = pos;
    }
    return mcq;
}

} // namespace

std::string relation_sentence(const RelationFact& fact, const Scene& scene,
                              const QuestionTemplate& tmpl) {
    const Primitive* subject = scene.find(fact.subject);
    const Primitive* object = scene.find(fact.object);
    if (subject == nullptr || object == nullptr) {
        throw ValidationFailure("relation fact references unknown primitive");
    }
    if (fact.relation == Relation::occludes_in_view) {
        return fill_template(tmpl.option_occlusion, {{"subject", subject->label},
                                                     {"object", object->label},
                                                     {"view", view_name(*fact.view)}});
    }
    return fill_template(tmpl.option_axis, {{"subject", subject->label},
                                            {"object", object->label},
                                            {"relation", relation_phrase(fact.relation)}});
}

std::string ordering_text(const std::vector<int>& order) {
    std::vector<std::string> refs;
    for (int idx : order) refs.push_back(image_ref(idx + 1));
    return join(refs, ", ");
}

Mcq build_mcq(const SpatialTaskFacts& facts, const QuestionTemplate& tmpl, std::uint64_t seed) {
    const Primitive* subject = facts.scene.find(facts.queried.subject);
    const Primitive* object = facts.scene.find(facts.queried.object);
    std::string question = fill_template(tmpl.question, {{"images", image_list_text(facts.n_images())},
                                                         {"subject", subject->label},
                                                         {"object", object->label}});
    std::string correct = relation_sentence(facts.queried, facts.scene, tmpl);
    std::vector<std::string> distractors;
    for (const auto& d : facts.distractors)
        distractors.push_back(relation_sentence(d, facts.scene, tmpl));
    return finalize_mcq(std::move(question), correct, std::move(distractors), seed);
}

Mcq build_mcq(const SequenceTaskFacts& facts, const QuestionTemplate& tmpl, std::uint64_t seed) {
    std::string question = fill_template(
        tmpl.question, {{"images", image_list_text(static_cast<int>(facts.frames.size()))}});

    std::vector<int> correct_order = facts.inverse_shuffle();
    std::string correct = fill_template(tmpl.option, {{"ordering", ordering_text(correct_order)}});

    Rng rng(derive_seed(seed, 0x5E9));
    std::vector<std::string> distractors;
    std::set<std::vector<int>> used = {correct_order};
    std::vector<int> identity(facts.frames.size());
    for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = static_cast<int>(i);

    int budget = 1000;
    while (distractors.size() < 3 && budget-- > 0) {
        std::vector<int> perm = identity;
        rng.shuffle(perm);
        if (perm == identity || used.count(perm) > 0) continue;
        used.insert(perm);
        distractors.push_back(fill_template(tmpl.option, {{"ordering", ordering_text(perm)}}));
    }
    if (distractors.size() != 3) {
        throw DistractorCollision("could not draw 3 distinct wrong orderings");
    }
    return finalize_mcq(std::move(question), correct, std::move(distractors), seed);
}

Mcq build_mcq(const ScaleChainFacts& facts, const QuestionTemplate& tmpl, std::uint64_t seed) {
    std::string question = fill_template(
        tmpl.question,
        {{"images", image_list_text(facts.n_images())},
         {"source", facts.query.first},
         {"target", facts.query.second},
         {"source_image", "1"},
         {"target_image", std::to_string(facts.links.back().image_index)}});

    const Rational& m = facts.multiplier;
    std::string correct = fill_template(tmpl.option, {{"value", m.to_string()}});

    // x2/3, x3/2, one link ratio alone, then widening fallbacks
    std::vector<Rational> candidates = {m * Rational(2, 3), m * Rational(3, 2),
                                        facts.links.front().ratio, m * Rational(2, 1),
                                        m * Rational(1, 2), m * Rational(3, 1),
                                        m * Rational(1, 3), m * Rational(5, 4)};
    std::vector<std::string> distractors;
    std::set<std::string> used = {correct};
    for (const auto& c : candidates) {
        if (distractors.size() == 3) break;
        if (c == m) continue;
        std::string text = fill_template(tmpl.option, {{"value", c.to_string()}});
        if (used.count(text) > 0) continue;
        used.insert(text);
        distractors.push_back(std::move(text));
    }
    if (distractors.size() != 3) {
        throw DistractorCollision("could not derive 3 distinct wrong multipliers");
    }
    return finalize_mcq(std::move(question), correct, std::move(distractors), seed);
}

// ---------------------------------------------------------------------------
// captions
// ---------------------------------------------------------------------------

std::vector<std::string> image_descriptions(const SpatialTaskFacts& facts) {
    std::vector<std::string> labels;
    for (const auto& p : facts.scene.primitives) labels.push_back(p.label);
    std::string contents = join(labels, ", ");

    std::vector<std::string> out;
    int index = 1;
    for (View v : facts.views) {
        out.push_back(image_ref(index++) + " shows the " + view_name(v) +
                      " view of the arrangement (" + contents + ").");
    }
    for (const auto& id : facts.closeup_ids) {
        out.push_back(image_ref(index++) + " is a close-up of the " +
                      facts.scene.find(id)->label + " alone.");
    }
    return out;
}

std::vector<std::string> image_descriptions(const SequenceTaskFacts& facts) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < facts.frames.size(); ++k) {
        const Vec2& p = facts.frames[static_cast<std::size_t>(facts.shuffle[k])];
        out.push_back(image_ref(static_cast<int>(k) + 1) + " shows the " +
                      color_name(facts.marker) + " marker at " + point_text(p) + ".");
    }
    return out;
}

std::vector<std::string> image_descriptions(const ScaleChainFacts& facts) {
    std::vector<std::string> out;
    int index = 1;
    for (const auto& link : facts.links) {
        out.push_back(image_ref(index++) + " shows the " + link.smaller + " beside the " +
                      link.larger + "; the " + link.larger + " is " + link.ratio.to_string() +
                      " times as tall as the " + link.smaller + ".");
    }
    for (int obj : facts.closeup_objects) {
        out.push_back(image_ref(index++) + " is a close-up of the " +
                      facts.objects[static_cast<std::size_t>(obj)].label + " alone.");
    }
    return out;
}

// ---------------------------------------------------------------------------
// reasoning steps
// ---------------------------------------------------------------------------

namespace {

std::string caption_step(const std::vector<std::string>& descriptions) {
    return join(descriptions, " ");
}

std::string conclusion_step(const std::string& derivation, const Mcq& mcq) {
    return derivation + " The answer is " + mcq.answer_key() + ": " + mcq.answer_text();
}

} // namespace

ReasoningSteps annotate_reasoning(const SpatialTaskFacts& facts, const Mcq& mcq) {
    ReasoningSteps steps;
    const Primitive* subject = facts.scene.find(facts.queried.subject);
    const Primitive* object = facts.scene.find(facts.queried.object);

    steps.summary = "The question asks how the " + subject->label + " and the " + object->label +
                    " are positioned relative to each other, using " +
                    image_list_text(facts.n_images()) + " of the same arrangement.";
    steps.caption = caption_step(image_descriptions(facts));

    std::vector<std::string> view_refs;
    for (std::size_t i = 0; i < facts.views.size(); ++i)
        view_refs.push_back(image_ref(static_cast<int>(i) + 1));
    std::string view_list = join(view_refs, " and ");
    std::string binding = "'" + subject->label + "' refers to the " +
                          shape_name(subject->shape) + " silhouette visible in " + view_list +
                          "; '" + object->label + "' refers to the " +
                          shape_name(object->shape) + " silhouette in the same views.";
    for (std::size_t c = 0; c < facts.closeup_ids.size(); ++c) {
        const Primitive* prim = facts.scene.find(facts.closeup_ids[c]);
        binding += " " + image_ref(static_cast<int>(facts.views.size() + c) + 1) +
                   " isolates the " + prim->label + ".";
    }
    steps.text2region = binding;

    steps.region2region = "Comparing the projected regions across the views: " +
                          mcq.answer_text() + " The three alternative placements contradict "
                          "the projected coordinates.";
    steps.conclusion = conclusion_step("The coordinate comparison confirms the relation.", mcq);
    return steps;
}

ReasoningSteps annotate_reasoning(const SequenceTaskFacts& facts, const Mcq& mcq) {
    ReasoningSteps steps;
    int t_count = static_cast<int>(facts.frames.size());
    steps.summary = "The question asks for the chronological order of " +
                    image_list_text(t_count) + ", shuffled frames of one marker moving with " +
                    std::string(facts.motion == MotionLaw::linear
                                    ? "constant velocity."
                                    : "a piecewise-constant velocity.");
    steps.caption = caption_step(image_descriptions(facts));

    std::vector<std::string> bindings;
    for (std::size_t k = 0; k < facts.frames.size(); ++k) {
        const Vec2& p = facts.frames[static_cast<std::size_t>(facts.shuffle[k])];
        bindings.push_back("the marker region in " + image_ref(static_cast<int>(k) + 1) +
                           " sits at " + point_text(p));
    }
    steps.text2region = "The 'marker' of the question is the " +
                        std::string(color_name(facts.marker)) + " disc: " +
                        join(bindings, "; ") + ".";

    std::vector<std::string> moves;
    for (std::size_t t = 0; t < facts.offsets.size(); ++t) {
        moves.push_back("step " + std::to_string(t + 1) + " displaces the marker by " +
                        point_text(facts.offsets[t]));
    }
    steps.region2region = "Relating consecutive positions in time order: " + join(moves, "; ") +
                          ".";
    steps.conclusion = conclusion_step(
        "Chaining the displacements orders the frames as " +
            ordering_text(facts.inverse_shuffle()) + ".",
        mcq);
    return steps;
}

ReasoningSteps annotate_reasoning(const ScaleChainFacts& facts, const Mcq& mcq) {
    ReasoningSteps steps;
    steps.summary = "The question asks how many times as tall as the " + facts.query.first +
                    " the " + facts.query.second + " is, combining the size relations stated in " +
                    image_list_text(facts.n_images()) + ".";
    steps.caption = caption_step(image_descriptions(facts));

    std::vector<std::string> bindings;
    bindings.push_back("'" + facts.query.first + "' appears in " +
                       image_ref(facts.links.front().image_index));
    for (std::size_t i = 0; i + 1 < facts.links.size(); ++i) {
        bindings.push_back("the pivot '" + facts.links[i].larger + "' appears in " +
                           image_ref(facts.links[i].image_index) + " and " +
                           image_ref(facts.links[i + 1].image_index));
    }
    bindings.push_back("'" + facts.query.second + "' appears in " +
                       image_ref(facts.links.back().image_index));
    for (std::size_t c = 0; c < facts.closeup_objects.size(); ++c) {
        bindings.push_back(
            image_ref(static_cast<int>(facts.links.size() + c) + 1) + " isolates the " +
            facts.objects[static_cast<std::size_t>(facts.closeup_objects[c])].label);
    }
    steps.text2region = "Grounding the mentioned objects: " + join(bindings, "; ") + ".";

    std::vector<std::string> ratios;
    for (const auto& link : facts.links) {
        ratios.push_back(image_ref(link.image_index) + " states the " + link.larger + " is " +
                         link.ratio.to_string() + " times as tall as the " + link.smaller);
    }
    steps.region2region = "Linking the regions across images: " + join(ratios, "; ") + ".";

    std::vector<std::string> factors;
    for (const auto& link : facts.links) factors.push_back(link.ratio.to_string());
    steps.conclusion = conclusion_step(
        "Multiplying the chained ratios " + join(factors, " x ") + " gives " +
            facts.multiplier.to_string() + ".",
        mcq);
    return steps;
}

// ---------------------------------------------------------------------------
// assembly, validation, serialization
// ---------------------------------------------------------------------------

const std::array<const char*, 5>& reasoning_step_names() {
    static const std::array<const char*, 5> names = {"summary", "caption", "text2region",
                                                     "region2region", "conclusion"};
    return names;
}

const std::string& reasoning_step(const ReasoningSteps& steps, int index) {
    switch (index) {
        case 0: return steps.summary;
        case 1: return steps.caption;
        case 2: return steps.text2region;
        case 3: return steps.region2region;
        default: return steps.conclusion;
    }
}

namespace {

bool mentions_image(const std::string& text, int index) {
    std::string token = "image" + std::to_string(index);
    std::size_t pos = 0;
    while ((pos = text.find(token, pos)) != std::string::npos) {
        char before = pos == 0 ? ' ' : text[pos - 1];
        std::size_t after_pos = pos + token.size();
        char after = after_pos < text.size() ? text[after_pos] : ' ';
        if (!std::isalnum(static_cast<unsigned char>(before)) &&
            !std::isdigit(static_cast<unsigned char>(after))) {
            return true;
        }
        pos += token.size();
    }
    return false;
}

} // namespace

void validate_instance(const Instance& instance) {
    if (instance.id.empty()) throw ValidationFailure("id empty");
    if (instance.images.size() < 2) throw ValidationFailure("fewer than 2 images");

    std::set<std::string> unique_options;
    for (const auto& opt : instance.mcq.options) {
        if (opt.empty()) throw ValidationFailure("empty option");
        unique_options.insert(opt);
    }
    if (unique_options.size() != 4) throw ValidationFailure("options not distinct");
    if (instance.mcq.answer_index < 0 || instance.mcq.answer_index > 3) {
        throw ValidationFailure("answer key out of range");
    }
    if (instance.mcq.question.empty()) throw ValidationFailure("question empty");

    for (int i = 0; i < kReasoningStepCount; ++i) {
        if (reasoning_step(instance.reasoning, i).empty()) {
            throw ValidationFailure(std::string("reasoning.") + reasoning_step_names()[static_cast<std::size_t>(i)] +
                                    " empty");
        }
    }
    // conclusion states the keyed answer's content
    if (instance.reasoning.conclusion.find(instance.mcq.answer_text()) == std::string::npos) {
        throw ValidationFailure("conclusion does not state the keyed answer");
    }

    for (std::size_t k = 1; k <= instance.images.size(); ++k) {
        if (!mentions_image(instance.reasoning.caption, static_cast<int>(k)) &&
            !mentions_image(instance.reasoning.text2region, static_cast<int>(k))) {
            throw ValidationFailure("image " + std::to_string(k) +
                                    " not referenced in caption or text2region");
        }
    }
    if (instance.mcq.question.find("image") == std::string::npos) {
        throw ValidationFailure("question does not reference images");
    }

    // segments: [text, image1, text, image2, ..., question-text]
    if (instance.segments.size() != 2 * instance.images.size() + 1) {
        throw ValidationFailure("segment pattern broken");
    }
    for (std::size_t k = 0; k < instance.images.size(); ++k) {
        const Segment& lead = instance.segments[2 * k];
        const Segment& img = instance.segments[2 * k + 1];
        if (lead.kind != Segment::Kind::text || lead.text.empty()) {
            throw ValidationFailure("segment pattern broken");
        }
        if (img.kind != Segment::Kind::image ||
            img.image_index != static_cast<int>(k) + 1 ||
            img.image_path != instance.images[k]) {
            throw ValidationFailure("image segments not consecutive from 1");
        }
    }
    const Segment& tail = instance.segments.back();
    if (tail.kind != Segment::Kind::text || tail.text != instance.mcq.question) {
        throw ValidationFailure("final segment must be the question text");
    }
}

Instance assemble_instance(Category category, const std::string& task,
                           const std::vector<std::string>& lead_ins,
                           const std::vector<std::string>& image_paths, const Mcq& mcq,
                           const ReasoningSteps& reasoning, const std::string& id,
                           nlohmann::ordered_json provenance) {
    if (lead_ins.size() != image_paths.size()) {
        throw ValidationFailure("one lead-in text required per image");
    }
    Instance instance;
    instance.id = id;
    instance.category = category;
    instance.task = task;
    instance.images = image_paths;
    instance.mcq = mcq;
    instance.reasoning = reasoning;
    instance.provenance = std::move(provenance);

    for (std::size_t k = 0; k < image_paths.size(); ++k) {
        Segment lead;
        lead.kind = Segment::Kind::text;
        lead.text = lead_ins[k];
        instance.segments.push_back(std::move(lead));

        Segment img;
        img.kind = Segment::Kind::image;
        img.image_index = static_cast<int>(k) + 1;
        img.image_path = image_paths[k];
        instance.segments.push_back(std::move(img));
    }
    Segment question;
    question.kind = Segment::Kind::text;
    question.text = mcq.question;
    instance.segments.push_back(std::move(question));

    validate_instance(instance);
    return instance;
}

nlohmann::ordered_json instance_to_json(const Instance& instance) {
    nlohmann::ordered_json j;
    j["id"] = instance.id;
    j["category"] = category_name(instance.category);
    j["task"] = instance.task;
    j["segments"] = nlohmann::ordered_json::array();
    for (const auto& seg : instance.segments) {
        nlohmann::ordered_json sj;
        if (seg.kind == Segment::Kind::text) {
            sj["type"] = "text";
            sj["text"] = seg.text;
        } else {
            sj["type"] = "image";
            sj["index"] = seg.image_index;
            sj["path"] = seg.image_path;
        }
        j["segments"].push_back(std::move(sj));
    }
    j["images"] = instance.images;
    j["question"] = instance.mcq.question;
    nlohmann::ordered_json options;
    for (int i = 0; i < 4; ++i) {
        options[std::string(1, static_cast<char>('A' + i))] = instance.mcq.options[static_cast<std::size_t>(i)];
    }
    j["options"] = std::move(options);
    j["answer"] = std::string(1, instance.mcq.answer_key());
    j["reasoning"] = {{"summary", instance.reasoning.summary},
                      {"caption", instance.reasoning.caption},
                      {"text2region", instance.reasoning.text2region},
                      {"region2region", instance.reasoning.region2region},
                      {"conclusion", instance.reasoning.conclusion}};
    j["provenance"] = instance.provenance;
    return j;
}

Instance instance_from_json(const nlohmann::json& j) {
    Instance instance;
    instance.id = j.at("id").get<std::string>();
    instance.category = category_from_string(j.at("category").get<std::string>());
    instance.task = j.at("task").get<std::string>();
    for (const auto& sj : j.at("segments")) {
        Segment seg;
        if (sj.at("type") == "text") {
            seg.kind = Segment::Kind::text;
            seg.text = sj.at("text").get<std::string>();
        } else {
            seg.kind = Segment::Kind::image;
            seg.image_index = sj.at("index").get<int>();
            seg.image_path = sj.at("path").get<std::string>();
        }
        instance.segments.push_back(std::move(seg));
    }
    instance.images = j.at("images").get<std::vector<std::string>>();
    instance.mcq.question = j.at("question").get<std::string>();
    std::string answer = j.at("answer").get<std::string>();
    for (int i = 0; i < 4; ++i) {
        std::string key(1, static_cast<char>('A' + i));
        instance.mcq.options[static_cast<std::size_t>(i)] = j.at("options").at(key).get<std::string>();
        if (key == answer) instance.mcq.answer_index = i;
    }
    const auto& rj = j.at("reasoning");
    instance.reasoning.summary = rj.at("summary").get<std::string>();
    instance.reasoning.caption = rj.at("caption").get<std::string>();
    instance.reasoning.text2region = rj.at("text2region").get<std::string>();
    instance.reasoning.region2region = rj.at("region2region").get<std::string>();
    instance.reasoning.conclusion = rj.at("conclusion").get<std::string>();
    if (j.contains("provenance")) instance.provenance = j.at("provenance");
    return instance;
}

std::string question_block(const Instance& instance) {
    std::string out = instance.mcq.question;
    for (int i = 0; i < 4; ++i) {
        out += "\n";
        out += static_cast<char>('A' + i);
        out += ") " + instance.mcq.options[static_cast<std::size_t>(i)];
    }
    return out;
}

} // namespace ivq
