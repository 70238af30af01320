#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "json.hpp"

#include "ivq/curriculum.hpp"
#include "ivq/image_io.hpp"
#include "ivq/rational.hpp"
#include "ivq/scene.hpp"

namespace ivq {

struct PipelineConfig {
    std::uint64_t seed = 1;
    int count = 100;
    // spatial, sequential, analytical; must sum to 1 (+/- 1e-9)
    std::array<double, 3> mix = {0.42, 0.245, 0.335};
    // images per instance -> probability; drawn once per instance
    std::map<int, double> images_per_instance = {{4, 0.1}, {5, 0.2}, {6, 0.4}, {7, 0.2}, {8, 0.1}};
    int raster_size = 512;
    ImageFormat format = ImageFormat::png;
    Rational threshold{7, 10};      // difficulty filter
    Rational stage_fraction{2, 5};  // challenging-pool sampling
    StageScheme stage_scheme = StageScheme::figure;
    std::string template_catalog_path; // empty = built-in catalog
    int threads = 0;                   // 0 = hardware concurrency
    bool render_images = true;

    SceneSpec scene;
    std::string sequence_motion = "mixed"; // linear | piecewise | mixed
    int speed_min = 1;
    int speed_max = 5;
    int chain_min = 2;
    int chain_max = 4;
};

// Defaults for every field; a bare {"count": 50, "seed": 1} document works.
PipelineConfig config_from_json(const nlohmann::json& j);
PipelineConfig load_config(const std::string& path); // empty path = defaults

// Throws ConfigInvalid naming the offending field.
void validate_config(const PipelineConfig& config);

// Snapshot stored in the manifest; feeding it back reproduces the dataset.
nlohmann::ordered_json config_to_json(const PipelineConfig& config);

// Largest-remainder apportionment of count over the category mix; remainder
// ties go to the larger proportion.
std::array<int, 3> category_counts(int count, const std::array<double, 3>& mix);

} // namespace ivq
