#include "vesselforge/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "vesselforge/compositor.hpp"
#include "vesselforge/error.hpp"
#include "vesselforge/fewshot.hpp"
#include "vesselforge/image_io.hpp"
#include "vesselforge/metrics.hpp"
#include "vesselforge/params.hpp"
#include "vesselforge/pipeline.hpp"
#include "vesselforge/texture.hpp"

namespace vesselforge {

namespace fs = std::filesystem;

namespace {

// Flags shared by the subcommands that generate samples.
struct GenerationFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> width;
    std::optional<int> height;
    std::optional<int> channels;
    std::string curves, control_points, delta, r0, sigma;
    std::string texture_root;
    std::string procedural;
    int workers = 0;

    void add_to(CLI::App& app, bool with_workers) {
        app.add_option("--config", config_path, "JSON file with generation parameters")
            ->check(CLI::ExistingFile);
        app.add_option("--seed", seed, "Master seed (64-bit)");
        app.add_option("--width", width, "Image width in px");
        app.add_option("--height", height, "Image height in px");
        app.add_option("--channels", channels, "1 (gray) or 3 (RGB)");
        app.add_option("--curves", curves, "Number of curves K as lo,hi");
        app.add_option("--control-points", control_points, "Control points n+1 as lo,hi");
        app.add_option("--delta", delta, "Displacement scale in px as lo,hi");
        app.add_option("--r0", r0, "Dilation radius in px as lo,hi");
        app.add_option("--sigma", sigma, "Matte blur sigma as lo,hi");
        auto* root = app.add_option("--texture-root", texture_root, "Texture pool root/<class>/<files>");
        auto* proc = app.add_option("--procedural", procedural, "Procedural textures: noise, gradient, constant");
        root->excludes(proc);
        if (with_workers) app.add_option("--workers", workers, "Worker threads (default: all cores)");
    }

    GenerationParams params() const {
        GenerationParams p;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw IoError("cannot open config " + config_path);
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError("invalid JSON in " + config_path + ": " + e.what());
            }
            apply_json(p, j);
        }
        if (seed) p.master_seed = *seed;
        if (width) p.image_width = *width;
        if (height) p.image_height = *height;
        if (channels) p.channels = *channels;
        if (!curves.empty()) p.num_curves = parse_range<int>(curves, "--curves");
        if (!control_points.empty()) p.control_points = parse_range<int>(control_points, "--control-points");
        if (!delta.empty()) p.delta = parse_range<double>(delta, "--delta");
        if (!r0.empty()) p.r0 = parse_range<int>(r0, "--r0");
        if (!sigma.empty()) p.sigma = parse_range<double>(sigma, "--sigma");
        p.validate();
        return p;
    }

    TextureSource textures() const {
        if (!texture_root.empty()) return TextureSource::from_pool(open_pool(texture_root));
        const std::string kind_name = procedural.empty() ? "noise" : procedural;
        const auto kind = parse_procedural_kind(kind_name);
        if (!kind) throw ConfigError("unknown procedural texture kind '" + kind_name + "'");
        return TextureSource::procedural(*kind);
    }

    template <typename T>
    static Range<T> parse_range(const std::string& text, const char* flag) {
        const auto comma = text.find(',');
        try {
            if (comma == std::string::npos) {
                const T v = convert<T>(text);
                return {v, v};
            }
            return {convert<T>(text.substr(0, comma)), convert<T>(text.substr(comma + 1))};
        } catch (const std::exception&) {
            throw ConfigError(std::string(flag) + ": expected lo,hi but got '" + text + "'");
        }
    }

    template <typename T>
    static T convert(const std::string& s) {
        std::size_t pos = 0;
        T v;
        if constexpr (std::is_integral_v<T>) {
            v = static_cast<T>(std::stoll(s, &pos));
        } else {
            v = static_cast<T>(std::stod(s, &pos));
        }
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    }
};

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stoi(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(std::string(flag) + ": expected a comma-separated integer list");
        }
    }
    if (out.empty()) throw ConfigError(std::string(flag) + ": empty list");
    return out;
}

int cmd_generate(const GenerationFlags& flags, std::uint64_t count, const std::string& out_dir, bool json,
                 std::ostream& out) {
    const GenerationParams params = flags.params();
    if (count < 1) throw ConfigError("--count must be >= 1");
    const TextureSource textures = flags.textures();
    const int workers = resolve_workers(flags.workers);

    const DatasetManifest manifest = generate_split(params, textures, count, out_dir, workers);
    const fs::path manifest_path = fs::path(out_dir) / "manifest.jsonl";
    const std::string digest = sha256_hex(manifest.serialize());
    if (json) {
        out << nlohmann::json{{"manifest", manifest_path.string()},
                              {"count", manifest.records.size()},
                              {"manifest_sha256", digest},
                              {"workers", workers}}
                   .dump()
            << "\n";
    } else {
        out << "manifest: " << manifest_path.string() << "\n"
            << "samples: " << manifest.records.size() << "\n"
            << "manifest sha256: " << digest << "\n";
    }
    return kExitOk;
}

void paste_panel(Image8& sheet, const Image8& panel, int x0, int y0) {
    for (int y = 0; y < panel.height(); ++y) {
        for (int x = 0; x < panel.width(); ++x) {
            for (int c = 0; c < 3; ++c) {
                sheet.at(x0 + x, y0 + y, c) = panel.at(x, y, panel.channels() == 1 ? 0 : c);
            }
        }
    }
}

int cmd_preview(const GenerationFlags& flags, int n, const std::string& out_path, bool json, std::ostream& out) {
    const GenerationParams params = flags.params();
    if (n < 1) throw ConfigError("--n must be >= 1");
    const TextureSource textures = flags.textures();
    const int w = params.image_width;
    const int h = params.image_height;

    Image8 sheet(3 * w, n * h, 3);
    for (int i = 0; i < n; ++i) {
        const SamplePair s = generate_sample(params, textures, static_cast<std::uint64_t>(i));
        const AlphaMatte matte = make_matte(s.mask, s.params_used.sigma);
        Image8 matte_img(w, h, 1);
        for (std::size_t p = 0; p < matte.size(); ++p) {
            matte_img.data()[p] = static_cast<std::uint8_t>(std::lround(matte.data()[p] * 255.0));
        }
        paste_panel(sheet, mask_to_image(s.mask), 0, i * h);
        paste_panel(sheet, matte_img, w, i * h);
        paste_panel(sheet, s.image, 2 * w, i * h);
    }
    const auto png = encode_png(sheet);
    write_bytes(out_path, png);
    if (json) {
        out << nlohmann::json{{"sheet", out_path}, {"rows", n}, {"panels", 3 * n}, {"sha256", sha256_hex(png)}}
                   .dump()
            << "\n";
    } else {
        out << "sheet: " << out_path << " (" << n << " rows, " << 3 * n << " panels)\n";
    }
    return kExitOk;
}

int cmd_bench(const GenerationFlags& flags, std::uint64_t count, const std::string& worker_list, bool json,
              std::ostream& out) {
    const GenerationParams params = flags.params();
    if (count < 100) throw ConfigError("--count must be >= 100");
    const TextureSource textures = flags.textures();
    std::vector<int> workers = parse_int_list(worker_list, "--worker-counts");
    for (int& w : workers) {
        if (w < 1) throw ConfigError("--worker-counts entries must be >= 1");
        w = resolve_workers(w);
    }

    const ThroughputReport report = bench(params, textures, count, workers);
    if (json) {
        out << report.to_json().dump() << "\n";
        return kExitOk;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "samples: %llu  total: %.3f s  throughput: %.1f samples/s (1 worker)\n",
                  static_cast<unsigned long long>(report.count), report.total_seconds, report.samples_per_second);
    out << buf;
    const std::pair<const char*, double> stages[] = {{"geometry", report.stages.geometry},
                                                      {"raster", report.stages.raster},
                                                      {"matte", report.stages.matte},
                                                      {"texture", report.stages.texture},
                                                      {"blend", report.stages.blend}};
    for (const auto& [name, secs] : stages) {
        std::snprintf(buf, sizeof buf, "  %-9s %9.3f s  %5.1f%%\n", name, secs, 100.0 * secs / report.total_seconds);
        out << buf;
    }
    for (const auto& s : report.scaling) {
        std::snprintf(buf, sizeof buf, "workers=%-2d %9.3f s  %8.1f samples/s\n", s.workers, s.seconds,
                      s.samples_per_second);
        out << buf;
    }
    out << "peak RSS: " << report.peak_rss_kb << " kB\n";
    return kExitOk;
}

int cmd_eval(const std::string& pred, const std::string& gt, const std::string& json_path, std::ostream& out,
             std::ostream& err) {
    const MetricsReport report = evaluate_dirs(pred, gt);
    out << report.to_table();
    if (!json_path.empty()) {
        const std::string text = report.to_json().dump(2) + "\n";
        write_bytes(json_path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    }
    if (!report.complete()) {
        err << "evaluation incomplete: " << report.missing.size() << " missing, " << report.unreadable.size()
            << " unreadable\n";
        return kExitIncomplete;
    }
    return kExitOk;
}

struct PlanFlags {
    std::string preset;
    std::string pool;
    std::string sizes;
    std::optional<int> runs;
    std::optional<int> repeats;
    std::uint64_t seed = 0;
    bool zero_shot = false;
    std::string out_path;
};

int cmd_plan(const PlanFlags& f, bool json, std::ostream& out) {
    FewShotConfig config;
    if (f.preset == "drive") {
        config = drive_preset();
    } else if (f.preset == "vessmap") {
        config = vessmap_preset();
    } else if (!f.preset.empty()) {
        throw ConfigError("unknown preset '" + f.preset + "' (expected drive or vessmap)");
    } else if (f.pool.empty()) {
        throw ConfigError("either --preset or --pool is required");
    }
    if (!f.pool.empty()) {
        config.pool = load_pool_ids(f.pool);
        if (config.name.empty()) config.name = f.pool;
    }
    if (!f.sizes.empty()) config.sample_sizes = parse_int_list(f.sizes, "--sizes");
    if (config.sample_sizes.empty()) throw ConfigError("--sizes is required without a preset");
    if (f.runs) config.runs = *f.runs;
    if (f.repeats) config.repeats = *f.repeats;
    config.seed = f.seed;
    config.include_zero_shot = f.zero_shot;

    const FewShotPlan plan = build_plan(config);
    if (!f.out_path.empty()) write_plan(plan, f.out_path);
    const auto coverage = coverage_report(plan);
    const std::size_t zero = config.include_zero_shot ? 1 : 0;
    const std::size_t few = plan.entries.size() - zero;

    if (json) {
        nlohmann::json cov = nlohmann::json::array();
        for (const auto& row : coverage) {
            cov.push_back({{"n", row.n},
                           {"distinct_ids", row.distinct_ids},
                           {"repetition_from_run",
                            row.repetition_from_run ? nlohmann::json(*row.repetition_from_run) : nlohmann::json()}});
        }
        out << nlohmann::json{{"entries", plan.entries.size()},
                              {"few_shot_entries", few},
                              {"zero_shot", config.include_zero_shot},
                              {"plan", f.out_path},
                              {"coverage", std::move(cov)}}
                   .dump()
            << "\n";
        return kExitOk;
    }
    if (f.out_path.empty()) out << plan_to_jsonl(plan);
    out << "entries: " << few << (zero ? " + 1 zero-shot" : "") << "\n";
    out << "   n  distinct  repetition-from-run\n";
    for (const auto& row : coverage) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%4d  %8zu  %s\n", row.n, row.distinct_ids,
                      row.repetition_from_run ? std::to_string(*row.repetition_from_run).c_str() : "-");
        out << buf;
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"vesselforge: synthetic vessel segmentation pairs, metrics and few-shot plans", "vesselforge"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Print resolved generation settings to stderr");

    GenerationFlags gen_flags, preview_flags, bench_flags;
    bool gen_json = false, preview_json = false, bench_json = false, plan_json = false;

    auto* gen = app.add_subcommand("generate", "Write a dataset split (images, masks, manifest.jsonl)");
    gen_flags.add_to(*gen, true);
    std::int64_t gen_count = 0;
    std::string gen_out;
    gen->add_option("--count", gen_count, "Number of samples")->required();
    gen->add_option("--out", gen_out, "Output directory")->required();
    gen->add_flag("--json", gen_json, "Machine-readable summary");

    auto* preview = app.add_subcommand("preview", "Write an n x 3 contact sheet (mask, matte, composite)");
    preview_flags.add_to(*preview, false);
    int preview_n = 4;
    std::string preview_out = "preview.png";
    preview->add_option("--n", preview_n, "Number of samples (rows)");
    preview->add_option("--out", preview_out, "Output PNG");
    preview->add_flag("--json", preview_json, "Machine-readable summary");

    auto* bench_cmd = app.add_subcommand("bench", "Measure generation throughput");
    bench_flags.add_to(*bench_cmd, false);
    std::int64_t bench_count = 100;
    std::string bench_workers = "1,2,4";
    bench_cmd->add_option("--count", bench_count, "Samples per measurement (>= 100)");
    bench_cmd->add_option("--worker-counts", bench_workers, "Worker counts to time, comma-separated");
    bench_cmd->add_flag("--json", bench_json, "Machine-readable report");

    auto* eval = app.add_subcommand("eval", "Score predicted masks against ground truth");
    std::string pred_dir, gt_dir, eval_json;
    eval->add_option("--pred", pred_dir, "Directory of predicted masks")->required();
    eval->add_option("--gt", gt_dir, "Directory of ground-truth masks")->required();
    eval->add_option("--json", eval_json, "Also write the report as JSON to this file");

    auto* plan = app.add_subcommand("plan-fewshot", "Emit a progressive few-shot sampling plan");
    PlanFlags plan_flags;
    plan->add_option("--preset", plan_flags.preset, "drive or vessmap");
    plan->add_option("--pool", plan_flags.pool, "Dataset manifest, dataset dir, or dir of files");
    plan->add_option("--sizes", plan_flags.sizes, "Sample sizes, comma-separated");
    plan->add_option("--runs", plan_flags.runs, "Runs per sample size (R)");
    plan->add_option("--repeats", plan_flags.repeats, "Repetitions per run (S)");
    plan->add_option("--seed", plan_flags.seed, "Plan seed");
    plan->add_flag("--zero-shot", plan_flags.zero_shot, "Add the n=0 entry");
    plan->add_option("--out", plan_flags.out_path, "Write the JSONL plan here instead of stdout");
    plan->add_flag("--json", plan_json, "Machine-readable summary");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    auto report_settings = [&](const GenerationFlags& flags) {
        if (!verbose) return;
        err << "params: " << to_json(flags.params()).dump() << "\n"
            << "textures: " << flags.textures().describe() << "\n";
    };

    try {
        if (*gen) report_settings(gen_flags);
        if (*preview) report_settings(preview_flags);
        if (*bench_cmd) report_settings(bench_flags);
        if (*gen) {
            if (gen_count < 1) throw ConfigError("--count must be >= 1");
            return cmd_generate(gen_flags, static_cast<std::uint64_t>(gen_count), gen_out, gen_json, out);
        }
        if (*preview) return cmd_preview(preview_flags, preview_n, preview_out, preview_json, out);
        if (*bench_cmd) {
            if (bench_count < 1) throw ConfigError("--count must be >= 100");
            return cmd_bench(bench_flags, static_cast<std::uint64_t>(bench_count), bench_workers, bench_json, out);
        }
        if (*eval) return cmd_eval(pred_dir, gt_dir, eval_json, out, err);
        if (*plan) return cmd_plan(plan_flags, plan_json, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitConfig;
}

}  // namespace vesselforge
