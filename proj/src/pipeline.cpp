#include "vesselforge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "vesselforge/compositor.hpp"
#include "vesselforge/error.hpp"
#include "vesselforge/image_io.hpp"
#include "vesselforge/raster.hpp"

namespace vesselforge {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Runs fn(i) for i in [0, count) on `workers` threads. If any call throws, the
// exception of the lowest failing index is rethrown after all threads join.
void parallel_for(std::uint64_t count, int workers, const std::function<void(std::uint64_t)>& fn) {
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::uint64_t error_index = 0;

    auto run = [&] {
        for (;;) {
            if (failed.load()) return;
            const std::uint64_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error || i < error_index) {
                    error = std::current_exception();
                    error_index = i;
                }
                failed = true;
            }
        }
    };

    const int n = std::max(1, workers);
    if (n == 1) {
        run();
    } else {
        std::vector<std::jthread> threads;
        threads.reserve(n);
        for (int t = 0; t < n; ++t) threads.emplace_back(run);
    }
    if (error) std::rethrow_exception(error);
}

nlohmann::json point_json(const Point2& p) { return nlohmann::json::array({p.x, p.y}); }

}  // namespace

StageTimings& StageTimings::operator+=(const StageTimings& o) {
    geometry += o.geometry;
    raster += o.raster;
    matte += o.matte;
    texture += o.texture;
    blend += o.blend;
    return *this;
}

nlohmann::json to_json(const SampleParams& p) {
    nlohmann::json curves = nlohmann::json::array();
    nlohmann::json orders = nlohmann::json::array();
    for (const auto& c : p.curves) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& pt : c.control_points()) pts.push_back(point_json(pt));
        curves.push_back(std::move(pts));
        orders.push_back(c.control_points().size());
    }
    return {
        {"num_curves", p.num_curves},
        {"delta", p.delta},
        {"r0", p.r0},
        {"sigma", p.sigma},
        {"control_points", std::move(orders)},
        {"curves", std::move(curves)},
        {"fg_texture", p.fg_texture},
        {"bg_texture", p.bg_texture},
    };
}

SampleParams sample_params_from_json(const nlohmann::json& j) {
    try {
        SampleParams p;
        p.num_curves = j.at("num_curves").get<int>();
        p.delta = j.at("delta").get<double>();
        p.r0 = j.at("r0").get<int>();
        p.sigma = j.at("sigma").get<double>();
        for (const auto& c : j.at("curves")) {
            std::vector<Point2> pts;
            for (const auto& pt : c) pts.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
            p.curves.emplace_back(std::move(pts));
        }
        p.fg_texture = j.at("fg_texture").get<std::string>();
        p.bg_texture = j.at("bg_texture").get<std::string>();
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed params_used record: ") + e.what());
    }
}

SampleParams draw_shape_params(const GenerationParams& params, RandomStream& rng) {
    SampleParams out;
    out.num_curves = static_cast<int>(rng.uniform_int(params.num_curves.lo, params.num_curves.hi));
    out.delta = rng.uniform(params.delta.lo, params.delta.hi);
    out.curves.reserve(out.num_curves);
    for (int k = 0; k < out.num_curves; ++k) {
        CurveParams cp;
        cp.order_plus_one =
            static_cast<int>(rng.uniform_int(params.control_points.lo, params.control_points.hi));
        cp.displacement_scale_delta = out.delta;
        cp.image_width = params.image_width;
        cp.image_height = params.image_height;
        out.curves.push_back(sample_curve(cp, rng));
    }
    out.r0 = static_cast<int>(rng.uniform_int(params.r0.lo, params.r0.hi));
    out.sigma = rng.uniform(params.sigma.lo, params.sigma.hi);
    return out;
}

SamplePair generate_sample(const GenerationParams& params, const TextureSource& textures,
                           std::uint64_t index, StageTimings* timings) {
    const std::string where = "sample " + std::to_string(index) + ": ";
    try {
        StageTimings local;
        RandomStream rng(params.master_seed, index);
        SamplePair out;
        out.index = index;

        auto t0 = Clock::now();
        out.params_used = draw_shape_params(params, rng);
        local.geometry = seconds_since(t0);

        t0 = Clock::now();
        out.mask = build_mask(out.params_used.curves, out.params_used.r0, params.image_width,
                              params.image_height);
        local.raster = seconds_since(t0);

        t0 = Clock::now();
        const AlphaMatte matte = make_matte(out.mask, out.params_used.sigma);
        local.matte = seconds_since(t0);

        t0 = Clock::now();
        TexturePair tex = textures.draw(params.image_width, params.image_height, params.channels, rng);
        out.params_used.fg_texture = tex.foreground.identity;
        out.params_used.bg_texture = tex.background.identity;
        local.texture = seconds_since(t0);

        t0 = Clock::now();
        out.image = blend(matte, tex.foreground.tile, tex.background.tile);
        local.blend = seconds_since(t0);

        if (timings) *timings += local;
        return out;
    } catch (const IoError& e) {
        throw IoError(where + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(where + e.what());
    } catch (const DomainError& e) {
        throw DomainError(where + e.what());
    }
}

std::string DatasetManifest::serialize() const {
    std::string out = header.dump() + "\n";
    for (const auto& r : records) {
        nlohmann::json j{
            {"index", r.index},
            {"image", r.image_path},
            {"mask", r.mask_path},
            {"image_sha256", r.image_sha256},
            {"mask_sha256", r.mask_sha256},
            {"params_used", r.params_used},
        };
        out += j.dump();
        out += '\n';
    }
    return out;
}

DatasetManifest generate_split(const GenerationParams& params, const TextureSource& textures,
                               std::uint64_t count, const fs::path& out_dir, int workers) {
    params.validate();
    if (count < 1) throw ConfigError("count must be >= 1");

    const fs::path manifest_path = out_dir / "manifest.jsonl";
    try {
        fs::create_directories(out_dir / "images");
        fs::create_directories(out_dir / "masks");
        fs::remove(manifest_path);
    } catch (const fs::filesystem_error& e) {
        throw IoError(std::string("cannot prepare output directory: ") + e.what());
    }

    DatasetManifest manifest;
    manifest.header = {
        {"format_version", DatasetManifest::kFormatVersion},
        {"params", to_json(params)},
        {"textures", textures.describe()},
        {"count", count},
    };
    manifest.records.resize(count);

    parallel_for(count, workers, [&](std::uint64_t i) {
        const SamplePair sample = generate_sample(params, textures, i);
        const std::string name = std::to_string(i) + ".png";
        const auto image_png = encode_png(sample.image);
        const auto mask_png = encode_png(mask_to_image(sample.mask));
        write_bytes(out_dir / "images" / name, image_png);
        write_bytes(out_dir / "masks" / name, mask_png);

        SampleRecord& rec = manifest.records[i];
        rec.index = i;
        rec.image_path = "images/" + name;
        rec.mask_path = "masks/" + name;
        rec.image_sha256 = sha256_hex(image_png);
        rec.mask_sha256 = sha256_hex(mask_png);
        rec.params_used = to_json(sample.params_used);
    });

    const std::string text = manifest.serialize();
    const fs::path tmp = out_dir / "manifest.jsonl.tmp";
    write_bytes(tmp, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    std::error_code ec;
    fs::rename(tmp, manifest_path, ec);
    if (ec) throw IoError("cannot finalize manifest: " + ec.message());
    return manifest;
}

DatasetManifest read_manifest(const fs::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot open manifest " + manifest_path.string());
    DatasetManifest manifest;
    std::string line;
    bool first = true;
    try {
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto j = nlohmann::json::parse(line);
            if (first) {
                if (j.value("format_version", 0) != DatasetManifest::kFormatVersion) {
                    throw ConfigError("unsupported manifest format_version in " + manifest_path.string());
                }
                manifest.header = std::move(j);
                first = false;
                continue;
            }
            SampleRecord r;
            r.index = j.at("index").get<std::uint64_t>();
            r.image_path = j.at("image").get<std::string>();
            r.mask_path = j.at("mask").get<std::string>();
            r.image_sha256 = j.at("image_sha256").get<std::string>();
            r.mask_sha256 = j.at("mask_sha256").get<std::string>();
            r.params_used = j.at("params_used");
            manifest.records.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed manifest " + manifest_path.string() + ": " + e.what());
    }
    if (first) throw ConfigError("empty manifest " + manifest_path.string());
    return manifest;
}

std::vector<std::uint64_t> verify_manifest(const DatasetManifest& manifest, const fs::path& dataset_root) {
    std::vector<std::uint64_t> bad;
    for (const auto& r : manifest.records) {
        try {
            if (sha256_hex(read_bytes(dataset_root / r.image_path)) != r.image_sha256 ||
                sha256_hex(read_bytes(dataset_root / r.mask_path)) != r.mask_sha256) {
                bad.push_back(r.index);
            }
        } catch (const IoError&) {
            bad.push_back(r.index);
        }
    }
    return bad;
}

SampleStream::SampleStream(GenerationParams params, TextureSource textures, std::uint64_t start_index,
                           std::size_t batch, int workers)
    : params_(std::move(params)),
      textures_(std::move(textures)),
      slots_(std::max<std::size_t>(1, batch)),
      next_claim_(start_index),
      next_emit_(start_index) {
    params_.validate();
    const int n = std::max(1, workers);
    workers_.reserve(n);
    for (int t = 0; t < n; ++t) workers_.emplace_back([this] { worker_loop(); });
}

SampleStream::~SampleStream() {
    {
        std::lock_guard lock(mutex_);
        stopping_ = true;
    }
    cv_.notify_all();
}

void SampleStream::worker_loop() {
    const std::uint64_t cap = slots_.size();
    for (;;) {
        std::uint64_t index;
        {
            std::unique_lock lock(mutex_);
            cv_.wait(lock, [&] { return stopping_ || next_claim_ < next_emit_ + cap; });
            if (stopping_) return;
            index = next_claim_++;
        }
        Slot slot;
        try {
            slot.sample = generate_sample(params_, textures_, index);
        } catch (...) {
            slot.error = std::current_exception();
        }
        {
            std::lock_guard lock(mutex_);
            slots_[index % cap] = std::move(slot);
        }
        cv_.notify_all();
    }
}

SamplePair SampleStream::next() {
    std::unique_lock lock(mutex_);
    Slot& slot = slots_[next_emit_ % slots_.size()];
    cv_.wait(lock, [&] { return slot.sample.has_value() || slot.error; });
    Slot taken = std::move(slot);
    slot = Slot{};
    ++next_emit_;
    lock.unlock();
    cv_.notify_all();
    if (taken.error) std::rethrow_exception(taken.error);
    return std::move(*taken.sample);
}

std::vector<SamplePair> SampleStream::next_batch() {
    std::vector<SamplePair> out;
    out.reserve(slots_.size());
    for (std::size_t i = 0; i < slots_.size(); ++i) out.push_back(next());
    return out;
}

nlohmann::json ThroughputReport::to_json() const {
    nlohmann::json scaling_json = nlohmann::json::array();
    for (const auto& s : scaling) {
        scaling_json.push_back(
            {{"workers", s.workers}, {"seconds", s.seconds}, {"samples_per_second", s.samples_per_second}});
    }
    // Stage order is fixed: it follows the generation pipeline.
    nlohmann::json stage_json = nlohmann::json::array({
        {{"stage", "geometry"}, {"seconds", stages.geometry}},
        {{"stage", "raster"}, {"seconds", stages.raster}},
        {{"stage", "matte"}, {"seconds", stages.matte}},
        {{"stage", "texture"}, {"seconds", stages.texture}},
        {{"stage", "blend"}, {"seconds", stages.blend}},
    });
    return {
        {"count", count},
        {"total_seconds", total_seconds},
        {"samples_per_second", samples_per_second},
        {"stages", std::move(stage_json)},
        {"scaling", std::move(scaling_json)},
        {"peak_rss_kb", peak_rss_kb},
    };
}

ThroughputReport bench(const GenerationParams& params, const TextureSource& textures,
                       std::uint64_t count, const std::vector<int>& worker_counts) {
    params.validate();
    if (count < 1) throw ConfigError("bench count must be >= 1");
    ThroughputReport report;
    report.count = count;

    auto t0 = Clock::now();
    for (std::uint64_t i = 0; i < count; ++i) generate_sample(params, textures, i, &report.stages);
    report.total_seconds = seconds_since(t0);
    report.samples_per_second = count / report.total_seconds;

    for (int w : worker_counts) {
        t0 = Clock::now();
        parallel_for(count, w, [&](std::uint64_t i) { generate_sample(params, textures, i); });
        const double secs = seconds_since(t0);
        report.scaling.push_back({w, secs, count / secs});
    }
    report.peak_rss_kb = peak_rss_kb();
    return report;
}

int resolve_workers(int requested) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("VESSELFORGE_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) n = std::min<long>(n, cap);
    }
    return n;
}

long peak_rss_kb() {
    std::ifstream status("/proc/self/status");
    std::string line;
    while (std::getline(status, line)) {
        if (line.rfind("VmHWM:", 0) == 0) {
            std::istringstream iss(line.substr(6));
            long kb = 0;
            iss >> kb;
            return kb;
        }
    }
    return 0;
}

}  // namespace vesselforge
