#pragma once

#include <condition_variable>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "vesselforge/geometry.hpp"
#include "vesselforge/image.hpp"
#include "vesselforge/params.hpp"
#include "vesselforge/random.hpp"
#include "vesselforge/texture.hpp"

namespace vesselforge {

/// The concrete draws behind one sample.
struct SampleParams {
    int num_curves = 0;
    double delta = 0.0;
    int r0 = 0;
    double sigma = 0.0;
    std::vector<BezierCurve> curves;  // curves[i].control_points().size() is n+1 of curve i
    std::string fg_texture;
    std::string bg_texture;
};

nlohmann::json to_json(const SampleParams& p);
SampleParams sample_params_from_json(const nlohmann::json& j);

struct SamplePair {
    std::uint64_t index = 0;
    CompositeImage image;
    MaskRaster mask;  // {0, 1}
    SampleParams params_used;
};

/// Accumulated seconds per generation stage.
struct StageTimings {
    double geometry = 0.0;
    double raster = 0.0;
    double matte = 0.0;
    double texture = 0.0;
    double blend = 0.0;

    double sum() const { return geometry + raster + matte + texture + blend; }
    StageTimings& operator+=(const StageTimings& o);
};

/// Draws the shape parameters of a sample from `rng`, in the fixed order
/// K, delta, then for each curve (n+1, sample_curve draws), then r0, sigma.
/// Texture identities are left empty.
SampleParams draw_shape_params(const GenerationParams& params, RandomStream& rng);

/// Generates sample `index`. The result depends only on (params, texture source
/// content, index): the sample's stream is RandomStream(master_seed, index) and
/// texture draws follow the shape draws. Component errors are rethrown with the
/// sample index in the message.
SamplePair generate_sample(const GenerationParams& params, const TextureSource& textures,
                           std::uint64_t index, StageTimings* timings = nullptr);

/// One line of manifest.jsonl after the header.
struct SampleRecord {
    std::uint64_t index = 0;
    std::string image_path;  // relative to the dataset root
    std::string mask_path;
    std::string image_sha256;
    std::string mask_sha256;
    nlohmann::json params_used;
};

struct DatasetManifest {
    static constexpr int kFormatVersion = 1;

    nlohmann::json header;  // {"format_version", "params", "textures", "count"}
    std::vector<SampleRecord> records;

    /// manifest.jsonl text: header line then one record per line, by index.
    std::string serialize() const;
};

/// Writes images/<i>.png, masks/<i>.png ({0,255}) and manifest.jsonl for
/// indices 0..count-1. The manifest is written last (via rename), so a failed
/// run leaves no manifest. Output bytes do not depend on `workers`.
DatasetManifest generate_split(const GenerationParams& params, const TextureSource& textures,
                               std::uint64_t count, const std::filesystem::path& out_dir,
                               int workers);

/// Parses manifest.jsonl. Throws IoError / ConfigError.
DatasetManifest read_manifest(const std::filesystem::path& manifest_path);

/// Indices whose on-disk files do not match their recorded digests (missing
/// files included). Empty means the dataset verifies.
std::vector<std::uint64_t> verify_manifest(const DatasetManifest& manifest,
                                           const std::filesystem::path& dataset_root);

/// Produces consecutive samples from start_index without touching disk.
///
/// At most `batch` samples are generated ahead of the consumer; workers block
/// until the consumer catches up. Samples come out in index order and are
/// identical to generate_sample for the same index.
class SampleStream {
public:
    SampleStream(GenerationParams params, TextureSource textures, std::uint64_t start_index,
                 std::size_t batch, int workers);
    ~SampleStream();

    SampleStream(const SampleStream&) = delete;
    SampleStream& operator=(const SampleStream&) = delete;

    SamplePair next();
    std::vector<SamplePair> next_batch();

    std::size_t capacity() const { return slots_.size(); }

private:
    struct Slot {
        std::optional<SamplePair> sample;
        std::exception_ptr error;
    };

    void worker_loop();

    GenerationParams params_;
    TextureSource textures_;
    std::vector<Slot> slots_;
    std::uint64_t next_claim_;
    std::uint64_t next_emit_;
    bool stopping_ = false;
    std::mutex mutex_;
    std::condition_variable cv_;
    std::vector<std::jthread> workers_;
};

struct ThroughputReport {
    struct Scaling {
        int workers = 0;
        double seconds = 0.0;
        double samples_per_second = 0.0;
    };

    std::uint64_t count = 0;
    double total_seconds = 0.0;        // single-worker wall time
    double samples_per_second = 0.0;   // single-worker
    StageTimings stages;               // summed over the single-worker run
    std::vector<Scaling> scaling;
    long peak_rss_kb = 0;

    nlohmann::json to_json() const;
};

/// Times `count` in-memory samples with one worker (per-stage breakdown), then
/// for each entry of worker_counts.
ThroughputReport bench(const GenerationParams& params, const TextureSource& textures,
                       std::uint64_t count, const std::vector<int>& worker_counts = {1, 2, 4});

/// Worker count from VESSELFORGE_THREADS (if set) capped by `requested`;
/// requested <= 0 means hardware concurrency.
int resolve_workers(int requested);

/// Peak resident set size of this process (VmHWM), 0 when unavailable.
long peak_rss_kb();

}  // namespace vesselforge
