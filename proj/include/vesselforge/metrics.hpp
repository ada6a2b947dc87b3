#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "vesselforge/image.hpp"

namespace vesselforge {

/// Pixel confusion counts, class 1 = vessel.
struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct SegmentationMetrics {
    double dice = 0.0;
    double accuracy = 0.0;
    double iou = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    /// Prediction and ground truth are both empty; every ratio is 1.0 by convention.
    bool empty_vs_empty = false;
};

/// Throws DomainError when shapes differ.
ConfusionCounts confusion(const MaskRaster& pred, const MaskRaster& gt);

/// Dice, accuracy, IoU, precision, recall. A zero denominator yields 1.0 when
/// prediction and ground truth are both empty, 0.0 otherwise.
/// Throws DomainError when counts.total() == 0.
SegmentationMetrics compute_metrics(const ConfusionCounts& counts);

struct MetricSummary {
    double mean = 0.0;
    double std = 0.0;  // sample (n - 1) standard deviation; 0 for a single value
    double min = 0.0;
    double max = 0.0;
};

/// Throws DomainError for an empty list.
MetricSummary summarize(const std::vector<double>& values);

struct MetricsReport {
    struct Entry {
        std::string name;
        ConfusionCounts counts;
        SegmentationMetrics metrics;
    };

    std::vector<Entry> images;  // sorted by name
    MetricSummary dice, accuracy, iou, precision, recall;
    std::vector<std::string> missing;  // present in only one of the two dirs
    std::vector<std::string> unreadable;

    bool complete() const { return missing.empty() && unreadable.empty(); }
    nlohmann::json to_json() const;
    /// Aligned-column table: one row per image, then mean and std rows.
    std::string to_table() const;
};

/// Builds a report from already-evaluated entries; recomputes the aggregates.
MetricsReport aggregate(std::vector<MetricsReport::Entry> entries);

/// Evaluates every image that exists under the same filename in both dirs.
/// Inputs are converted to luma and thresholded at 128. Files without a
/// counterpart are listed in `missing` and excluded. Throws IoError if a
/// directory cannot be read, DomainError if no pair is evaluable.
MetricsReport evaluate_dirs(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir);

}  // namespace vesselforge
