// ivqgen: synthesizes multi-image interleaved reasoning datasets with exact
// ground truth, filters them by difficulty, emits curriculum stage files and
// scores MCQ predictions.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"

#include "ivq/curriculum.hpp"
#include "ivq/dataset.hpp"
#include "ivq/errors.hpp"
#include "ivq/eval.hpp"
#include "ivq/image_io.hpp"
#include "ivq/jsonl.hpp"

namespace fs = std::filesystem;
using namespace ivq;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitExternal = 3;

struct GenerateArgs {
    std::string config_path;
    std::string out_dir;
    int count = -1;
    std::int64_t seed = -1;
    int raster = -1;
    std::string format;
    int threads = -1;
    bool no_render = false;
    std::string templates;
};

PipelineConfig resolve_config(const GenerateArgs& args) {
    PipelineConfig config = load_config(args.config_path);
    if (args.count >= 0) config.count = args.count;
    if (args.seed >= 0) config.seed = static_cast<std::uint64_t>(args.seed);
    if (args.raster >= 0) config.raster_size = args.raster;
    if (!args.format.empty()) config.format = image_format_from_string(args.format);
    if (args.threads >= 0) config.threads = args.threads;
    if (args.no_render) config.render_images = false;
    if (!args.templates.empty()) config.template_catalog_path = args.templates;
    validate_config(config);
    return config;
}

int cmd_generate(const GenerateArgs& args) {
    PipelineConfig config = resolve_config(args);
    Manifest manifest = generate_dataset(config, args.out_dir);
    std::cout << "dataset " << manifest.dataset_id << " written to " << args.out_dir << "\n"
              << "  instances: " << config.count << " (spatial " << manifest.per_category[0]
              << ", sequential " << manifest.per_category[1] << ", analytical "
              << manifest.per_category[2] << ")\n"
              << "  images:    " << manifest.total_images << " (mean "
              << manifest.mean_images_per_instance << " per instance)\n"
              << "  sha256:    " << manifest.instances_sha256 << "\n";
    return kExitOk;
}

int cmd_stats(const std::string& dataset_dir) {
    DatasetStats stats = compute_stats(dataset_dir);
    std::cout << stats_table(stats);
    std::cout << "manifest checks passed\n";
    return kExitOk;
}

int cmd_filter(const std::string& dataset_dir, const std::string& logs_path,
               const std::string& threshold_text, std::string out_path) {
    Rational threshold = parse_rational(threshold_text);
    std::set<std::string> known;
    for (const auto& inst :
         load_instances((fs::path(dataset_dir) / "instances.jsonl").string())) {
        known.insert(inst.id);
    }
    std::vector<TrialLog> logs = aggregate_trial_logs(logs_path);
    for (const auto& log : logs) {
        if (known.count(log.question_id) == 0) {
            throw UnknownQuestionId("trial log references unknown question " + log.question_id);
        }
    }
    auto records = classify_difficulty(logs, threshold);
    if (out_path.empty()) out_path = (fs::path(dataset_dir) / "difficulty.jsonl").string();
    JsonlWriter out(out_path);
    std::size_t simple = 0;
    for (const auto& rec : records) {
        out.write(difficulty_record_to_json(rec));
        if (rec.cls == DifficultyClass::simple) ++simple;
    }
    std::cout << "classified " << records.size() << " questions: " << simple << " Simple, "
              << records.size() - simple << " Challenging -> " << out_path << "\n";
    return kExitOk;
}

int cmd_stage(const std::string& dataset_dir, const std::string& records_path,
              const std::string& fraction_text, std::int64_t seed, std::string out_dir,
              const std::string& scheme_name) {
    auto instances = load_instances((fs::path(dataset_dir) / "instances.jsonl").string());
    auto records = load_difficulty_records(records_path);
    if (out_dir.empty()) out_dir = (fs::path(dataset_dir) / "stages").string();
    StageFileReport report = build_stage_files(
        instances, records, out_dir, parse_rational(fraction_text),
        static_cast<std::uint64_t>(seed), stage_scheme_from_string(scheme_name));
    for (std::size_t s = 0; s < report.rows_per_stage.size(); ++s) {
        std::cout << "stage" << s << ".jsonl: " << report.rows_per_stage[s] << " rows\n";
    }
    return kExitOk;
}

int cmd_eval(const std::string& gold_path, const std::string& preds_path,
             const std::string& report_path, bool external, std::string matcher_url,
             int timeout_ms) {
    auto gold = load_gold(gold_path);
    std::map<std::string, const GoldItem*> gold_by_id;
    for (const auto& g : gold) gold_by_id[g.id] = &g;

    if (external && matcher_url.empty()) {
        const char* env = std::getenv("IVQ_MATCHER_URL");
        if (env != nullptr) matcher_url = env;
        if (matcher_url.empty()) {
            throw ExternalServiceError("--external requires --matcher-url or IVQ_MATCHER_URL");
        }
    }
    const char* key_env = std::getenv("IVQ_MATCHER_KEY");

    std::vector<Prediction> predictions;
    for (const auto& [id, raw] : load_predictions(preds_path)) {
        auto it = gold_by_id.find(id);
        if (it == gold_by_id.end()) {
            throw UnknownQuestionId("prediction for unknown question " + id);
        }
        Prediction pred;
        pred.question_id = id;
        pred.raw_output = raw;
        if (external) {
            MatcherConfig mc;
            mc.url = matcher_url;
            mc.api_key = key_env != nullptr ? key_env : "";
            mc.timeout_ms = timeout_ms;
            pred.match = match_answer_external(raw, it->second->options, mc);
        } else {
            pred.match = match_answer(raw, it->second->options);
        }
        predictions.push_back(std::move(pred));
    }

    ScoreReport report = score(predictions, gold);
    std::cout << report_table(report);
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw IoFailure("cannot write report: " + report_path);
        out << report_to_json(report).dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_render_preview(const std::string& out_dir, std::int64_t seed, int raster,
                       const std::string& format_name, const std::string& config_path) {
    PipelineConfig config = load_config(config_path);
    if (raster > 0) config.raster_size = raster;
    if (!format_name.empty()) config.format = image_format_from_string(format_name);

    Scene scene = generate_scene(config.scene, static_cast<std::uint64_t>(seed));
    fs::create_directories(out_dir);
    for (View view : {View::front, View::side, View::top}) {
        auto img = rasterize(project(scene, view), config.raster_size, config.raster_size,
                             view_window(scene.bounds, view));
        std::string path = (fs::path(out_dir) / (std::string("preview_") + view_name(view) +
                                                 "." + image_extension(config.format)))
                               .string();
        emit_image(img, config.format, path);
        std::cout << "wrote " << path << "\n";
    }
    std::ofstream sj(fs::path(out_dir) / "preview_scene.json");
    sj << scene_to_json(scene).dump(2) << "\n";
    std::cout << "wrote " << (fs::path(out_dir) / "preview_scene.json").string() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-image interleaved reasoning dataset pipeline"};
    app.require_subcommand(1);

    GenerateArgs gen_args;
    auto* generate = app.add_subcommand("generate", "synthesize a dataset directory");
    generate->add_option("--out", gen_args.out_dir, "output dataset directory")->required();
    generate->add_option("--config", gen_args.config_path, "pipeline config JSON");
    generate->add_option("--count", gen_args.count, "number of instances");
    generate->add_option("--seed", gen_args.seed, "master seed");
    generate->add_option("--raster", gen_args.raster, "raster size in pixels");
    generate->add_option("--format", gen_args.format, "image format: ppm or png");
    generate->add_option("--threads", gen_args.threads, "worker threads (0 = auto)");
    generate->add_flag("--no-render", gen_args.no_render, "skip writing image files");
    generate->add_option("--templates", gen_args.templates, "question template catalog JSON");

    std::string stats_dir;
    auto* stats = app.add_subcommand("stats", "recompute statistics and verify the manifest");
    stats->add_option("--dataset", stats_dir, "dataset directory")->required();

    std::string filter_dataset, filter_logs, filter_out;
    std::string filter_threshold = "0.7";
    auto* filter = app.add_subcommand("filter", "classify questions by trial success rate");
    filter->add_option("--dataset", filter_dataset, "dataset directory")->required();
    filter->add_option("--logs", filter_logs, "trial logs JSONL")->required();
    filter->add_option("--threshold", filter_threshold, "Simple threshold (default 0.7)");
    filter->add_option("--out", filter_out, "records output path");

    std::string stage_dataset, stage_records, stage_out;
    std::string stage_fraction = "0.4";
    std::string stage_scheme = "figure";
    std::int64_t stage_seed = 1;
    auto* stage = app.add_subcommand("stage", "emit curriculum stage files");
    stage->add_option("--dataset", stage_dataset, "dataset directory")->required();
    stage->add_option("--records", stage_records, "difficulty records JSONL")->required();
    stage->add_option("--fraction", stage_fraction, "challenging sample fraction");
    stage->add_option("--seed", stage_seed, "sampling seed");
    stage->add_option("--out", stage_out, "stage files directory");
    stage->add_option("--scheme", stage_scheme, "stage scheme: figure or equation");

    std::string eval_gold, eval_preds, eval_report, eval_matcher;
    bool eval_external = false;
    int eval_timeout = 5000;
    auto* eval = app.add_subcommand("eval", "score MCQ predictions against gold instances");
    eval->add_option("--gold", eval_gold, "gold instances JSONL")->required();
    eval->add_option("--preds", eval_preds, "predictions JSONL")->required();
    eval->add_option("--report", eval_report, "write the JSON report here");
    eval->add_flag("--external", eval_external, "use the external matching service");
    eval->add_option("--matcher-url", eval_matcher, "matcher endpoint (or IVQ_MATCHER_URL)");
    eval->add_option("--timeout-ms", eval_timeout, "external matcher timeout");

    std::string preview_out, preview_format, preview_config;
    std::int64_t preview_seed = 1;
    int preview_raster = -1;
    auto* preview = app.add_subcommand("render-preview", "write one scene's three views");
    preview->add_option("--out", preview_out, "output directory")->required();
    preview->add_option("--seed", preview_seed, "scene seed");
    preview->add_option("--raster", preview_raster, "raster size in pixels");
    preview->add_option("--format", preview_format, "image format: ppm or png");
    preview->add_option("--config", preview_config, "pipeline config JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cmd_generate(gen_args);
        if (stats->parsed()) return cmd_stats(stats_dir);
        if (filter->parsed())
            return cmd_filter(filter_dataset, filter_logs, filter_threshold, filter_out);
        if (stage->parsed())
            return cmd_stage(stage_dataset, stage_records, stage_fraction, stage_seed, stage_out,
                             stage_scheme);
        if (eval->parsed())
            return cmd_eval(eval_gold, eval_preds, eval_report, eval_external, eval_matcher,
                            eval_timeout);
        if (preview->parsed())
            return cmd_render_preview(preview_out, preview_seed, preview_raster, preview_format,
                                      preview_config);
    } catch (const ExternalServiceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitExternal;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
