#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace vesselforge {

struct FewShotConfig {
    std::string name;                 // free-form label echoed into plans
    std::vector<std::string> pool;    // V_train ids, order defines the sampling order
    std::vector<int> sample_sizes;    // strictly increasing, first >= 1, last <= pool size
    int runs = 5;                     // R
    int repeats = 3;                  // S
    std::uint64_t seed = 0;
    bool include_zero_shot = true;
    std::vector<std::string> val_ids;   // recorded verbatim
    std::vector<std::string> test_ids;  // recorded verbatim

    /// Throws ConfigError.
    void validate() const;
    nlohmann::json to_json() const;
};

/// 16 train / 4 val / 20 test ids, N = {1,2,4,...,16}.
FewShotConfig drive_preset();
/// 60 train / 20 val / 20 test ids, N = {1,2,4,...,20}.
FewShotConfig vessmap_preset();

struct FewShotEntry {
    int n = 0;    // 0 marks the zero-shot entry
    int run = 0;  // 1-based
    std::vector<std::string> subset;            // in pool order
    std::vector<std::uint64_t> repetition_seeds;  // one per repetition s = 1..S
};

struct FewShotPlan {
    FewShotConfig config;
    std::vector<FewShotEntry> entries;  // zero-shot first (if any), then by n, then by run
};

/// Progressive few-shot schedule.
///
/// For each n, runs r = 1..R draw n distinct ids, preferring ids not yet used
/// at this n. When fewer than n unused ids remain, all of them are taken, the
/// used set is reset, and the remainder is drawn from the other ids (which then
/// count as used in the new cycle). Draws for size n come from
/// RandomStream(seed, n); repetition seed s of (n, r) is derived by mixing
/// (seed, n, r, s). Throws ConfigError on an invalid config.
FewShotPlan build_plan(const FewShotConfig& config);

/// JSONL: a header line {"format_version", "config"} then one line per entry.
std::string plan_to_jsonl(const FewShotPlan& plan);
void write_plan(const FewShotPlan& plan, const std::filesystem::path& path);

struct CoverageRow {
    int n = 0;
    std::size_t distinct_ids = 0;              // ids touched across all runs at this n
    std::optional<int> repetition_from_run;    // first run reusing an id seen in an earlier run
};

std::vector<CoverageRow> coverage_report(const FewShotPlan& plan);

/// Pool ids from a dataset manifest (sample indices) or a directory (file stems, sorted).
std::vector<std::string> load_pool_ids(const std::filesystem::path& manifest_or_dir);

}  // namespace vesselforge
