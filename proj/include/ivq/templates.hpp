#pragma once

#include <map>
#include <string>
#include <vector>

namespace ivq {

enum class Category { spatial, sequential, analytical };
const char* category_name(Category c);
Category category_from_string(const std::string& name);

struct QuestionTemplate {
    std::string id;
    std::string question;
    std::string option;           // sequential / analytical option format
    std::string option_axis;      // spatial only
    std::string option_occlusion; // spatial only
};

struct TemplateCatalog {
    std::vector<QuestionTemplate> spatial;
    std::vector<QuestionTemplate> sequential;
    std::vector<QuestionTemplate> analytical;

    const std::vector<QuestionTemplate>& for_category(Category c) const;
    const QuestionTemplate& by_id(const std::string& id) const;
};

// Built-in catalog; identical to data/templates.json in the repo.
TemplateCatalog builtin_template_catalog();

// Empty path loads the built-in catalog.
TemplateCatalog load_template_catalog(const std::string& path);

// "{key}" placeholder substitution.
std::string fill_template(const std::string& text,
                          const std::map<std::string, std::string>& values);

} // namespace ivq
