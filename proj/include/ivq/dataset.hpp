#pragma once

#include <string>
#include <vector>

#include "ivq/config.hpp"
#include "ivq/qa.hpp"
#include "ivq/templates.hpp"

namespace ivq {

struct Manifest {
    std::string dataset_id;
    nlohmann::ordered_json config;
    std::array<std::size_t, 3> per_category{}; // spatial, sequential, analytical
    std::size_t total_images = 0;
    double mean_images_per_instance = 0.0;
    std::string instances_sha256;

    nlohmann::ordered_json to_json() const;
    static Manifest from_json(const nlohmann::json& j);
};

struct BuiltInstance {
    Instance instance;
    std::vector<RasterImage> images; // empty when rendering is disabled
};

// One instance, fully deterministic from (config.seed, index).
BuiltInstance build_instance(const PipelineConfig& config, const TemplateCatalog& catalog,
                             Category category, int index, bool render);

// Category of each instance index under the largest-remainder plan.
std::vector<Category> category_plan(const PipelineConfig& config);

// Writes <out_dir>/{instances.jsonl, images/, manifest.json}.
Manifest generate_dataset(const PipelineConfig& config, const std::string& out_dir);

struct DatasetStats {
    std::size_t total_instances = 0;
    std::array<std::size_t, 3> per_category{};
    std::size_t total_images_listed = 0;
    std::size_t image_files_on_disk = 0;
    double mean_images_per_instance = 0.0;
    double mean_annotation_chars = 0.0;
};

// Recomputes everything from instances.jsonl (re-validating each instance)
// and cross-checks the manifest; mismatches raise ManifestMismatch(field).
DatasetStats compute_stats(const std::string& dataset_dir);

std::string stats_table(const DatasetStats& stats);

std::vector<Instance> load_instances(const std::string& instances_jsonl);
Manifest load_manifest(const std::string& dataset_dir);

} // namespace ivq
