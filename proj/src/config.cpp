#include "ivq/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ivq/errors.hpp"

namespace ivq {

namespace {

Rational rational_from_json(const nlohmann::json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    // numbers go through their shortest decimal text so 0.7 becomes 7/10
    return parse_rational(j.dump());
}

} // namespace

PipelineConfig config_from_json(const nlohmann::json& j) {
    PipelineConfig c;
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("count")) c.count = j.at("count").get<int>();
    if (j.contains("mix")) {
        const auto& m = j.at("mix");
        c.mix = {m.at("spatial").get<double>(), m.at("sequential").get<double>(),
                 m.at("analytical").get<double>()};
    }
    if (j.contains("images_per_instance")) {
        c.images_per_instance.clear();
        for (const auto& [key, value] : j.at("images_per_instance").items()) {
            c.images_per_instance[std::stoi(key)] = value.get<double>();
        }
    }
    if (j.contains("raster_size")) c.raster_size = j.at("raster_size").get<int>();
    if (j.contains("image_format"))
        c.format = image_format_from_string(j.at("image_format").get<std::string>());
    if (j.contains("threshold")) c.threshold = rational_from_json(j.at("threshold"));
    if (j.contains("stage_fraction"))
        c.stage_fraction = rational_from_json(j.at("stage_fraction"));
    if (j.contains("stage_scheme"))
        c.stage_scheme = stage_scheme_from_string(j.at("stage_scheme").get<std::string>());
    if (j.contains("template_catalog"))
        c.template_catalog_path = j.at("template_catalog").get<std::string>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    if (j.contains("render_images")) c.render_images = j.at("render_images").get<bool>();

    if (j.contains("scene")) {
        const auto& s = j.at("scene");
        if (s.contains("count_min")) c.scene.count_min = s.at("count_min").get<int>();
        if (s.contains("count_max")) c.scene.count_max = s.at("count_max").get<int>();
        if (s.contains("min_separation"))
            c.scene.min_separation = s.at("min_separation").get<double>();
        if (s.contains("size_min")) c.scene.size_min = s.at("size_min").get<double>();
        if (s.contains("size_max")) c.scene.size_max = s.at("size_max").get<double>();
        if (s.contains("bounds")) {
            const auto& b = s.at("bounds");
            c.scene.bounds = {{b.at(0).get<double>(), b.at(0).get<double>(), b.at(0).get<double>()},
                              {b.at(1).get<double>(), b.at(1).get<double>(), b.at(1).get<double>()}};
        }
        if (s.contains("shape_weights")) {
            const auto& w = s.at("shape_weights");
            for (int i = 0; i < 3; ++i) c.scene.shape_weights[i] = w.at(static_cast<std::size_t>(i)).get<double>();
        }
    }
    if (j.contains("sequence")) {
        const auto& s = j.at("sequence");
        if (s.contains("motion")) c.sequence_motion = s.at("motion").get<std::string>();
        if (s.contains("speed_min")) c.speed_min = s.at("speed_min").get<int>();
        if (s.contains("speed_max")) c.speed_max = s.at("speed_max").get<int>();
    }
    if (j.contains("chain")) {
        const auto& s = j.at("chain");
        if (s.contains("length_min")) c.chain_min = s.at("length_min").get<int>();
        if (s.contains("length_max")) c.chain_max = s.at("length_max").get<int>();
    }
    validate_config(c);
    return c;
}

PipelineConfig load_config(const std::string& path) {
    if (path.empty()) {
        PipelineConfig c;
        validate_config(c);
        return c;
    }
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigInvalid("config is not valid JSON: " + std::string(e.what()));
    }
    return config_from_json(j);
}

void validate_config(const PipelineConfig& c) {
    if (c.count < 1) throw ConfigInvalid("count must be >= 1");
    double mix_sum = c.mix[0] + c.mix[1] + c.mix[2];
    if (std::abs(mix_sum - 1.0) > 1e-9) throw ConfigInvalid("mix proportions must sum to 1");
    for (double m : c.mix) {
        if (m < 0) throw ConfigInvalid("mix proportions must be non-negative");
    }
    if (c.images_per_instance.empty()) throw ConfigInvalid("images_per_instance is empty");
    double weight_sum = 0;
    for (const auto& [n, w] : c.images_per_instance) {
        if (n < 2) throw ConfigInvalid("images_per_instance keys must be >= 2");
        if (n < 3 && c.mix[1] > 0) {
            throw ConfigInvalid("images_per_instance keys must be >= 3 for sequential tasks");
        }
        if (w < 0) throw ConfigInvalid("images_per_instance weights must be non-negative");
        weight_sum += w;
    }
    if (weight_sum <= 0) throw ConfigInvalid("images_per_instance weights sum to zero");
    if (c.raster_size < 16 || c.raster_size > 4096)
        throw ConfigInvalid("raster_size must be in 16..4096");
    if (c.threshold.num <= 0 || Rational(1) < c.threshold)
        throw ConfigInvalid("threshold must be in (0, 1]");
    if (c.stage_fraction.num <= 0 || Rational(1) < c.stage_fraction)
        throw ConfigInvalid("stage_fraction must be in (0, 1]");
    if (c.threads < 0) throw ConfigInvalid("threads must be >= 0");
    if (c.scene.count_min < 2 || c.scene.count_max < c.scene.count_min)
        throw ConfigInvalid("scene count range invalid");
    if (c.scene.min_separation < 0) throw ConfigInvalid("scene min_separation must be >= 0");
    if (c.sequence_motion != "linear" && c.sequence_motion != "piecewise" &&
        c.sequence_motion != "mixed") {
        throw ConfigInvalid("sequence motion must be linear, piecewise or mixed");
    }
    if (c.speed_min < 1 || c.speed_max < c.speed_min)
        throw ConfigInvalid("speed range invalid");
    if (c.chain_min < 2 || c.chain_max < c.chain_min)
        throw ConfigInvalid("chain length range invalid");
}

nlohmann::ordered_json config_to_json(const PipelineConfig& c) {
    nlohmann::ordered_json j;
    j["seed"] = c.seed;
    j["count"] = c.count;
    j["mix"] = {{"spatial", c.mix[0]}, {"sequential", c.mix[1]}, {"analytical", c.mix[2]}};
    nlohmann::ordered_json dist;
    for (const auto& [n, w] : c.images_per_instance) dist[std::to_string(n)] = w;
    j["images_per_instance"] = std::move(dist);
    j["raster_size"] = c.raster_size;
    j["image_format"] = image_extension(c.format);
    j["threshold"] = std::to_string(c.threshold.num) + "/" + std::to_string(c.threshold.den);
    j["stage_fraction"] =
        std::to_string(c.stage_fraction.num) + "/" + std::to_string(c.stage_fraction.den);
    j["stage_scheme"] = c.stage_scheme == StageScheme::figure ? "figure" : "equation";
    j["template_catalog"] = c.template_catalog_path;
    j["render_images"] = c.render_images;
    j["scene"] = {{"count_min", c.scene.count_min},
                  {"count_max", c.scene.count_max},
                  {"min_separation", c.scene.min_separation},
                  {"size_min", c.scene.size_min},
                  {"size_max", c.scene.size_max},
                  {"bounds", {c.scene.bounds.min.x, c.scene.bounds.max.x}},
                  {"shape_weights",
                   {c.scene.shape_weights[0], c.scene.shape_weights[1], c.scene.shape_weights[2]}}};
    j["sequence"] = {{"motion", c.sequence_motion},
                     {"speed_min", c.speed_min},
                     {"speed_max", c.speed_max}};
    j["chain"] = {{"length_min", c.chain_min}, {"length_max", c.chain_max}};
    return j;
}

std::array<int, 3> category_counts(int count, const std::array<double, 3>& mix) {
    std::array<int, 3> counts{};
    std::array<double, 3> exact{};
    int assigned = 0;
    for (int i = 0; i < 3; ++i) {
        exact[static_cast<std::size_t>(i)] = count * mix[static_cast<std::size_t>(i)];
        counts[static_cast<std::size_t>(i)] = static_cast<int>(std::floor(exact[static_cast<std::size_t>(i)]));
        assigned += counts[static_cast<std::size_t>(i)];
    }
    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        double ra = exact[static_cast<std::size_t>(a)] - std::floor(exact[static_cast<std::size_t>(a)]);
        double rb = exact[static_cast<std::size_t>(b)] - std::floor(exact[static_cast<std::size_t>(b)]);
        if (ra != rb) return ra > rb;
        if (mix[static_cast<std::size_t>(a)] != mix[static_cast<std::size_t>(b)]) {
            return mix[static_cast<std::size_t>(a)] > mix[static_cast<std::size_t>(b)];
        }
        return a < b;
    });
    for (int i = 0; assigned < count; ++i, ++assigned) {
        counts[static_cast<std::size_t>(order[static_cast<std::size_t>(i % 3)])] += 1;
    }
    return counts;
}

} // namespace ivq
