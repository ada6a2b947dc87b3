#include "vesselforge/fewshot.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "vesselforge/error.hpp"
#include "vesselforge/image_io.hpp"
#include "vesselforge/pipeline.hpp"
#include "vesselforge/random.hpp"

namespace vesselforge {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> numbered_ids(const std::string& prefix, int count) {
    std::vector<std::string> ids;
    for (int i = 0; i < count; ++i) {
        std::string num = std::to_string(i);
        if (num.size() < 2) num.insert(0, 2 - num.size(), '0');
        ids.push_back(prefix + num);
    }
    return ids;
}

std::uint64_t repetition_seed(std::uint64_t seed, int n, int run, int rep) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ static_cast<std::uint64_t>(n));
    h = mix64(h ^ static_cast<std::uint64_t>(run));
    return mix64(h ^ static_cast<std::uint64_t>(rep));
}

// Moves `k` uniformly chosen elements of `from` to its front (partial Fisher-Yates).
void choose_front(std::vector<std::size_t>& from, std::size_t k, RandomStream& rng) {
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = static_cast<std::size_t>(
            rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(from.size()) - 1));
        std::swap(from[i], from[j]);
    }
}

}  // namespace

void FewShotConfig::validate() const {
    if (pool.empty()) throw ConfigError("few-shot pool is empty");
    if (std::set<std::string>(pool.begin(), pool.end()).size() != pool.size()) {
        throw ConfigError("few-shot pool contains duplicate ids");
    }
    if (sample_sizes.empty()) throw ConfigError("few-shot sample sizes are empty");
    if (sample_sizes.front() < 1) throw ConfigError("few-shot sample sizes must start at >= 1");
    for (std::size_t i = 1; i < sample_sizes.size(); ++i) {
        if (sample_sizes[i] <= sample_sizes[i - 1]) {
            throw ConfigError("few-shot sample sizes must be strictly increasing");
        }
    }
    if (static_cast<std::size_t>(sample_sizes.back()) > pool.size()) {
        throw ConfigError("sample size " + std::to_string(sample_sizes.back()) + " exceeds pool size " +
                          std::to_string(pool.size()));
    }
    if (runs < 1) throw ConfigError("runs must be >= 1");
    if (repeats < 1) throw ConfigError("repeats must be >= 1");
}

nlohmann::json FewShotConfig::to_json() const {
    return {
        {"name", name},
        {"pool", pool},
        {"sample_sizes", sample_sizes},
        {"runs", runs},
        {"repeats", repeats},
        {"seed", seed},
        {"include_zero_shot", include_zero_shot},
        {"val_ids", val_ids},
        {"test_ids", test_ids},
    };
}

FewShotConfig drive_preset() {
    FewShotConfig c;
    c.name = "drive";
    c.pool = numbered_ids("train_", 16);
    c.val_ids = numbered_ids("val_", 4);
    c.test_ids = numbered_ids("test_", 20);
    c.sample_sizes = {1, 2, 4, 6, 8, 10, 12, 14, 16};
    return c;
}

FewShotConfig vessmap_preset() {
    FewShotConfig c;
    c.name = "vessmap";
    c.pool = numbered_ids("train_", 60);
    c.val_ids = numbered_ids("val_", 20);
    c.test_ids = numbered_ids("test_", 20);
    c.sample_sizes = {1, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
    return c;
}

FewShotPlan build_plan(const FewShotConfig& config) {
    config.validate();
    FewShotPlan plan;
    plan.config = config;
    const std::size_t pool_size = config.pool.size();

    if (config.include_zero_shot) plan.entries.push_back({0, 1, {}, {}});

    for (const int n : config.sample_sizes) {
        RandomStream rng(config.seed, static_cast<std::uint64_t>(n));
        std::vector<bool> used(pool_size, false);
        const auto k = static_cast<std::size_t>(n);

        for (int r = 1; r <= config.runs; ++r) {
            std::vector<std::size_t> unused;
            for (std::size_t i = 0; i < pool_size; ++i) {
                if (!used[i]) unused.push_back(i);
            }
            std::vector<std::size_t> chosen;
            if (unused.size() >= k) {
                choose_front(unused, k, rng);
                chosen.assign(unused.begin(), unused.begin() + static_cast<std::ptrdiff_t>(k));
                for (auto i : chosen) used[i] = true;
            } else {
                // Pool exhausted at this n: finish the cycle, then start a new one.
                chosen = unused;
                std::vector<std::size_t> rest;
                for (std::size_t i = 0; i < pool_size; ++i) {
                    if (used[i]) rest.push_back(i);
                }
                const std::size_t need = k - chosen.size();
                choose_front(rest, need, rng);
                std::fill(used.begin(), used.end(), false);
                for (std::size_t i = 0; i < need; ++i) {
                    chosen.push_back(rest[i]);
                    used[rest[i]] = true;
                }
            }
            std::sort(chosen.begin(), chosen.end());

            FewShotEntry entry{n, r, {}, {}};
            for (auto i : chosen) entry.subset.push_back(config.pool[i]);
            for (int s = 1; s <= config.repeats; ++s) {
                entry.repetition_seeds.push_back(repetition_seed(config.seed, n, r, s));
            }
            plan.entries.push_back(std::move(entry));
        }
    }
    return plan;
}

std::string plan_to_jsonl(const FewShotPlan& plan) {
    std::string out = nlohmann::json{{"format_version", 1}, {"config", plan.config.to_json()}}.dump();
    out += '\n';
    for (const auto& e : plan.entries) {
        out += nlohmann::json{
            {"n", e.n},
            {"run", e.run},
            {"zero_shot", e.n == 0},
            {"subset", e.subset},
            {"repetition_seeds", e.repetition_seeds},
        }.dump();
        out += '\n';
    }
    return out;
}

void write_plan(const FewShotPlan& plan, const fs::path& path) {
    const std::string text = plan_to_jsonl(plan);
    write_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<CoverageRow> coverage_report(const FewShotPlan& plan) {
    std::vector<CoverageRow> rows;
    for (const int n : plan.config.sample_sizes) {
        CoverageRow row{n, 0, std::nullopt};
        std::set<std::string> seen;
        for (const auto& e : plan.entries) {
            if (e.n != n) continue;
            for (const auto& id : e.subset) {
                if (seen.count(id) && !row.repetition_from_run) row.repetition_from_run = e.run;
            }
            seen.insert(e.subset.begin(), e.subset.end());
        }
        row.distinct_ids = seen.size();
        rows.push_back(row);
    }
    return rows;
}

std::vector<std::string> load_pool_ids(const fs::path& manifest_or_dir) {
    std::error_code ec;
    std::vector<std::string> ids;
    if (fs::is_directory(manifest_or_dir, ec)) {
        const fs::path manifest = manifest_or_dir / "manifest.jsonl";
        if (fs::is_regular_file(manifest, ec)) return load_pool_ids(manifest);
        for (const auto& entry : fs::directory_iterator(manifest_or_dir)) {
            if (entry.is_regular_file()) ids.push_back(entry.path().stem().string());
        }
        std::sort(ids.begin(), ids.end());
        if (ids.empty()) throw ConfigError("pool directory is empty: " + manifest_or_dir.string());
        return ids;
    }
    const DatasetManifest m = read_manifest(manifest_or_dir);
    for (const auto& r : m.records) ids.push_back(std::to_string(r.index));
    if (ids.empty()) throw ConfigError("manifest has no records: " + manifest_or_dir.string());
    return ids;
}

}  // namespace vesselforge
