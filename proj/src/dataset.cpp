#include "ivq/dataset.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "ivq/errors.hpp"
#include "ivq/hash.hpp"
#include "ivq/image_io.hpp"
#include "ivq/jsonl.hpp"
#include "ivq/rng.hpp"
#include "ivq/taskgen.hpp"

namespace fs = std::filesystem;

namespace ivq {

nlohmann::ordered_json Manifest::to_json() const {
    nlohmann::ordered_json j;
    j["dataset_id"] = dataset_id;
    j["config"] = config;
    j["per_category"] = {{"spatial", per_category[0]},
                         {"sequential", per_category[1]},
                         {"analytical", per_category[2]}};
    j["total_images"] = total_images;
    j["mean_images_per_instance"] = mean_images_per_instance;
    j["instances_sha256"] = instances_sha256;
    return j;
}

Manifest Manifest::from_json(const nlohmann::json& j) {
    Manifest m;
    m.dataset_id = j.at("dataset_id").get<std::string>();
    m.config = j.at("config");
    m.per_category = {j.at("per_category").at("spatial").get<std::size_t>(),
                      j.at("per_category").at("sequential").get<std::size_t>(),
                      j.at("per_category").at("analytical").get<std::size_t>()};
    m.total_images = j.at("total_images").get<std::size_t>();
    m.mean_images_per_instance = j.at("mean_images_per_instance").get<double>();
    m.instances_sha256 = j.at("instances_sha256").get<std::string>();
    return m;
}

namespace {

std::string instance_id(int index) {
    std::ostringstream out;
    out << "q" << std::setfill('0') << std::setw(6) << index;
    return out.str();
}

int draw_image_count(const PipelineConfig& config, Rng& rng) {
    std::vector<int> keys;
    std::vector<double> weights;
    for (const auto& [n, w] : config.images_per_instance) {
        keys.push_back(n);
        weights.push_back(w);
    }
    return keys[rng.pick_weighted(weights)];
}

} // namespace

std::vector<Category> category_plan(const PipelineConfig& config) {
    auto counts = category_counts(config.count, config.mix);
    std::vector<Category> plan;
    plan.reserve(static_cast<std::size_t>(config.count));
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < counts[static_cast<std::size_t>(c)]; ++i) {
            plan.push_back(static_cast<Category>(c));
        }
    }
    return plan;
}

BuiltInstance build_instance(const PipelineConfig& config, const TemplateCatalog& catalog,
                             Category category, int index, bool render) {
    const std::uint64_t iseed = derive_seed(config.seed, static_cast<std::uint64_t>(index));
    Rng rng(derive_seed(iseed, 0));
    const int n_images = draw_image_count(config, rng);

    const auto& templates = catalog.for_category(category);
    const QuestionTemplate& tmpl = templates[rng.index(templates.size())];
    const std::uint64_t facts_seed = derive_seed(iseed, 1);
    const std::uint64_t mcq_seed = derive_seed(iseed, 2);

    std::string id = instance_id(index);
    std::vector<std::string> paths;
    BuiltInstance built;

    auto make_paths = [&](int count, ImageFormat format) {
        for (int k = 1; k <= count; ++k) {
            paths.push_back("images/" + id + "_img" + std::to_string(k) + "." +
                            image_extension(format));
        }
    };

    nlohmann::ordered_json provenance;
    provenance["generator"] = "ivqgen";
    provenance["master_seed"] = config.seed;
    provenance["index"] = index;
    provenance["instance_seed"] = iseed;
    provenance["template"] = tmpl.id;

    switch (category) {
        case Category::spatial: {
            SpatialSpec spec;
            spec.scene = config.scene;
            spec.n_images = n_images;
            SpatialTaskFacts facts = gen_spatial(spec, facts_seed);
            Mcq mcq = build_mcq(facts, tmpl, mcq_seed);
            ReasoningSteps reasoning = annotate_reasoning(facts, mcq);
            make_paths(facts.n_images(), config.format);
            built.instance =
                assemble_instance(category, "multi-view-relation", image_descriptions(facts),
                                  paths, mcq, reasoning, id, std::move(provenance));
            if (render) built.images = render_spatial_images(facts, config.raster_size);
            break;
        }
        case Category::sequential: {
            SequenceSpec spec;
            spec.frames = n_images;
            spec.speed_min = config.speed_min;
            spec.speed_max = config.speed_max;
            if (config.sequence_motion == "linear") {
                spec.motion = MotionLaw::linear;
            } else if (config.sequence_motion == "piecewise") {
                spec.motion = MotionLaw::piecewise;
            } else {
                spec.motion = rng.next_double() < 0.5 ? MotionLaw::linear : MotionLaw::piecewise;
            }
            SequenceTaskFacts facts = gen_sequence(spec, facts_seed);
            Mcq mcq = build_mcq(facts, tmpl, mcq_seed);
            ReasoningSteps reasoning = annotate_reasoning(facts, mcq);
            make_paths(static_cast<int>(facts.frames.size()), config.format);
            built.instance =
                assemble_instance(category, "frame-reordering", image_descriptions(facts), paths,
                                  mcq, reasoning, id, std::move(provenance));
            if (render) built.images = render_sequence_images(facts, config.raster_size);
            break;
        }
        case Category::analytical: {
            ChainSpec spec;
            spec.length_min = config.chain_min;
            spec.length_max = config.chain_max;
            spec.n_images = n_images;
            spec.raster_size = config.raster_size;
            ScaleChainFacts facts = gen_scale_chain(spec, facts_seed);
            Mcq mcq = build_mcq(facts, tmpl, mcq_seed);
            ReasoningSteps reasoning = annotate_reasoning(facts, mcq);
            make_paths(facts.n_images(), config.format);
            built.instance =
                assemble_instance(category, "scale-chain", image_descriptions(facts), paths, mcq,
                                  reasoning, id, std::move(provenance));
            if (render) built.images = render_chain_images(facts);
            break;
        }
    }
    return built;
}

Manifest generate_dataset(const PipelineConfig& config, const std::string& out_dir) {
    validate_config(config);
    TemplateCatalog catalog = load_template_catalog(config.template_catalog_path);
    std::vector<Category> plan = category_plan(config);

    fs::create_directories(out_dir);
    if (config.render_images) fs::create_directories(fs::path(out_dir) / "images");

    const int count = config.count;
    std::vector<std::string> rows(static_cast<std::size_t>(count));
    std::vector<std::size_t> image_counts(static_cast<std::size_t>(count), 0);

    unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                            : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(count));

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            int index = next.fetch_add(1);
            if (index >= count || failed.load()) break;
            try {
                BuiltInstance built =
                    build_instance(config, catalog, plan[static_cast<std::size_t>(index)], index,
                                   config.render_images);
                if (config.render_images) {
                    for (std::size_t k = 0; k < built.images.size(); ++k) {
                        emit_image(built.images[k], config.format,
                                   (fs::path(out_dir) / built.instance.images[k]).string());
                    }
                }
                image_counts[static_cast<std::size_t>(index)] = built.instance.images.size();
                rows[static_cast<std::size_t>(index)] = instance_to_json(built.instance).dump();
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) first_error = e.what();
            }
        }
    };

    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (unsigned t = 0; t < n_threads; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    if (failed.load()) throw ValidationFailure("instance generation failed: " + first_error);

    const std::string instances_path = (fs::path(out_dir) / "instances.jsonl").string();
    {
        JsonlWriter out(instances_path);
        for (const auto& row : rows) out.write_line(row);
    }

    Manifest manifest;
    manifest.config = config_to_json(config);
    manifest.dataset_id = "ds-" + sha256_hex(manifest.config.dump()).substr(0, 12);
    auto counts = category_counts(count, config.mix);
    manifest.per_category = {static_cast<std::size_t>(counts[0]),
                             static_cast<std::size_t>(counts[1]),
                             static_cast<std::size_t>(counts[2])};
    std::size_t total_images = 0;
    for (std::size_t n : image_counts) total_images += n;
    manifest.total_images = total_images;
    manifest.mean_images_per_instance = static_cast<double>(total_images) / count;
    manifest.instances_sha256 = sha256_file_hex(instances_path);

    std::ofstream mf(fs::path(out_dir) / "manifest.json");
    if (!mf) throw IoFailure("cannot write manifest.json");
    mf << manifest.to_json().dump(2) << "\n";
    return manifest;
}

std::vector<Instance> load_instances(const std::string& instances_jsonl) {
    std::vector<Instance> instances;
    for (const auto& j : read_jsonl(instances_jsonl)) {
        instances.push_back(instance_from_json(j));
    }
    return instances;
}

Manifest load_manifest(const std::string& dataset_dir) {
    fs::path path = fs::path(dataset_dir) / "manifest.json";
    std::ifstream in(path);
    if (!in) throw ManifestMismatch("missing manifest");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ManifestMismatch("manifest is not valid JSON: " + std::string(e.what()));
    }
    return Manifest::from_json(j);
}

DatasetStats compute_stats(const std::string& dataset_dir) {
    Manifest manifest = load_manifest(dataset_dir);
    const std::string instances_path = (fs::path(dataset_dir) / "instances.jsonl").string();

    DatasetStats stats;
    std::size_t annotation_chars = 0;
    std::vector<Instance> instances = load_instances(instances_path);
    for (const auto& inst : instances) {
        validate_instance(inst);
        stats.total_instances += 1;
        stats.per_category[static_cast<std::size_t>(inst.category)] += 1;
        stats.total_images_listed += inst.images.size();
        for (int s = 0; s < kReasoningStepCount; ++s) {
            annotation_chars += reasoning_step(inst.reasoning, s).size();
        }
    }
    if (stats.total_instances == 0) throw ManifestMismatch("instances file is empty");
    stats.mean_images_per_instance =
        static_cast<double>(stats.total_images_listed) / stats.total_instances;
    stats.mean_annotation_chars =
        static_cast<double>(annotation_chars) / stats.total_instances;

    bool rendered = manifest.config.value("render_images", true);
    if (rendered) {
        fs::path images_dir = fs::path(dataset_dir) / "images";
        if (fs::exists(images_dir)) {
            for (const auto& entry : fs::directory_iterator(images_dir)) {
                if (entry.is_regular_file()) stats.image_files_on_disk += 1;
            }
        }
    }

    if (stats.per_category[0] != manifest.per_category[0] ||
        stats.per_category[1] != manifest.per_category[1] ||
        stats.per_category[2] != manifest.per_category[2]) {
        throw ManifestMismatch("per-category counts");
    }
    if (stats.total_images_listed != manifest.total_images) {
        throw ManifestMismatch("total images");
    }
    if (rendered && stats.image_files_on_disk != manifest.total_images) {
        throw ManifestMismatch("total images");
    }
    if (std::abs(stats.mean_images_per_instance - manifest.mean_images_per_instance) > 1e-12) {
        throw ManifestMismatch("mean images per instance");
    }
    if (sha256_file_hex(instances_path) != manifest.instances_sha256) {
        throw ManifestMismatch("content hash");
    }
    return stats;
}

std::string stats_table(const DatasetStats& stats) {
    std::ostringstream out;
    out << std::left << std::setw(26) << "instances" << stats.total_instances << "\n";
    const char* names[3] = {"spatial", "sequential", "analytical"};
    for (int c = 0; c < 3; ++c) {
        double frac = stats.total_instances == 0
                          ? 0.0
                          : static_cast<double>(stats.per_category[static_cast<std::size_t>(c)]) /
                                stats.total_instances;
        out << std::left << std::setw(26) << (std::string("  ") + names[c])
            << stats.per_category[static_cast<std::size_t>(c)] << "  (" << std::fixed
            << std::setprecision(3) << frac << ")\n";
    }
    out << std::left << std::setw(26) << "images listed" << stats.total_images_listed << "\n";
    out << std::left << std::setw(26) << "image files on disk" << stats.image_files_on_disk
        << "\n";
    out << std::left << std::setw(26) << "mean images/instance" << std::fixed
        << std::setprecision(3) << stats.mean_images_per_instance << "\n";
    out << std::left << std::setw(26) << "mean annotation chars" << std::fixed
        << std::setprecision(1) << stats.mean_annotation_chars << "\n";
    return out.str();
}

} // namespace ivq
