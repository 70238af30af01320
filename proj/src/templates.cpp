#include "ivq/templates.hpp"

#include <fstream>

#include "json.hpp"

#include "ivq/errors.hpp"

namespace ivq {

const char* category_name(Category c) {
    switch (c) {
        case Category::spatial: return "spatial";
        case Category::sequential: return "sequential";
        case Category::analytical: return "analytical";
    }
    return "";
}

Category category_from_string(const std::string& name) {
    if (name == "spatial") return Category::spatial;
    if (name == "sequential") return Category::sequential;
    if (name == "analytical") return Category::analytical;
    throw ConfigInvalid("unknown category: " + name);
}

const std::vector<QuestionTemplate>& TemplateCatalog::for_category(Category c) const {
    switch (c) {
        case Category::spatial: return spatial;
        case Category::sequential: return sequential;
        case Category::analytical: return analytical;
    }
    return spatial;
}

const QuestionTemplate& TemplateCatalog::by_id(const std::string& id) const {
    for (const auto* list : {&spatial, &sequential, &analytical}) {
        for (const auto& t : *list) {
            if (t.id == id) return t;
        }
    }
    throw ConfigInvalid("unknown template id: " + id);
}

namespace {

// Mirror of data/templates.json; a unit test keeps the two in sync.
constexpr const char* kBuiltinCatalog = R"JSON(
{
  "spatial": [
    {
      "id": "spatial/relation-v1",
      "question": "Considering {images}, which statement about the {subject} and the {object} is correct?",
      "option_axis": "The {subject} is {relation} the {object}.",
      "option_occlusion": "The {subject} partially covers the {object} in the {view} view."
    },
    {
      "id": "spatial/relation-v2",
      "question": "Across {images}, how are the {subject} and the {object} arranged?",
      "option_axis": "The {subject} is {relation} the {object}.",
      "option_occlusion": "The {subject} partially covers the {object} in the {view} view."
    }
  ],
  "sequential": [
    {
      "id": "sequential/reorder-v1",
      "question": "{images} show the same moving marker, but the frames have been shuffled. Which ordering restores the chronological sequence?",
      "option": "{ordering}"
    },
    {
      "id": "sequential/reorder-v2",
      "question": "The frames in {images} are out of order. In which order were they actually captured?",
      "option": "{ordering}"
    }
  ],
  "analytical": [
    {
      "id": "analytical/scale-v1",
      "question": "Using the size relations stated across {images}, how many times as tall as the {source} (image{source_image}) is the {target} (image{target_image})?",
      "option": "{value} times"
    },
    {
      "id": "analytical/scale-v2",
      "question": "Combining the comparisons given in {images}, the {target} in image{target_image} is how many times the height of the {source} in image{source_image}?",
      "option": "{value} times"
    }
  ]
}
)JSON";

TemplateCatalog parse_catalog(const nlohmann::json& j) {
    TemplateCatalog catalog;
    auto read_list = [&](const char* key, std::vector<QuestionTemplate>& out) {
        if (!j.contains(key)) throw ConfigInvalid(std::string("template catalog missing ") + key);
        for (const auto& tj : j.at(key)) {
            QuestionTemplate t;
            t.id = tj.at("id").get<std::string>();
            t.question = tj.at("question").get<std::string>();
            t.option = tj.value("option", "");
            t.option_axis = tj.value("option_axis", "");
            t.option_occlusion = tj.value("option_occlusion", "");
            out.push_back(std::move(t));
        }
        if (out.empty()) throw ConfigInvalid(std::string("no templates for ") + key);
    };
    read_list("spatial", catalog.spatial);
    read_list("sequential", catalog.sequential);
    read_list("analytical", catalog.analytical);
    return catalog;
}

} // namespace

TemplateCatalog builtin_template_catalog() {
    return parse_catalog(nlohmann::json::parse(kBuiltinCatalog));
}

TemplateCatalog load_template_catalog(const std::string& path) {
    if (path.empty()) return builtin_template_catalog();
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open template catalog: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigInvalid("template catalog is not valid JSON: " + std::string(e.what()));
    }
    return parse_catalog(j);
}

std::string fill_template(const std::string& text,
                          const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t open = text.find('{', pos);
        if (open == std::string::npos) {
            out.append(text, pos, std::string::npos);
            break;
        }
        std::size_t close = text.find('}', open);
        if (close == std::string::npos) {
            out.append(text, pos, std::string::npos);
            break;
        }
        out.append(text, pos, open - pos);
        std::string key = text.substr(open + 1, close - open - 1);
        auto it = values.find(key);
        if (it == values.end()) {
            throw ConfigInvalid("template placeholder {" + key + "} has no value");
        }
        out += it->second;
        pos = close + 1;
    }
    return out;
}

} // namespace ivq
