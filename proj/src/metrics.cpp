#include "vesselforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

#include "vesselforge/error.hpp"
#include "vesselforge/image_io.hpp"

namespace vesselforge {

namespace fs = std::filesystem;

ConfusionCounts confusion(const MaskRaster& pred, const MaskRaster& gt) {
    if (!pred.same_shape(gt)) throw DomainError("prediction and ground truth shapes differ");
    ConfusionCounts c;
    const auto& p = pred.data();
    const auto& g = gt.data();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const bool pv = p[i] != 0;
        const bool gv = g[i] != 0;
        c.tp += pv && gv;
        c.fp += pv && !gv;
        c.fn += !pv && gv;
        c.tn += !pv && !gv;
    }
    return c;
}

SegmentationMetrics compute_metrics(const ConfusionCounts& c) {
    if (c.total() == 0) throw DomainError("metrics need at least one pixel");
    const bool pred_empty = c.tp + c.fp == 0;
    const bool gt_empty = c.tp + c.fn == 0;
    const bool both_empty = pred_empty && gt_empty;
    auto ratio = [both_empty](double num, double den) {
        if (den == 0.0) return both_empty ? 1.0 : 0.0;
        return num / den;
    };
    const double tp = static_cast<double>(c.tp);
    const double fp = static_cast<double>(c.fp);
    const double fn = static_cast<double>(c.fn);
    const double tn = static_cast<double>(c.tn);

    SegmentationMetrics m;
    m.dice = ratio(2.0 * tp, 2.0 * tp + fp + fn);
    m.accuracy = (tp + tn) / static_cast<double>(c.total());
    m.iou = ratio(tp, tp + fp + fn);
    m.precision = ratio(tp, tp + fp);
    m.recall = ratio(tp, tp + fn);
    m.empty_vs_empty = both_empty;
    return m;
}

MetricSummary summarize(const std::vector<double>& values) {
    if (values.empty()) throw DomainError("cannot summarize an empty list");
    MetricSummary s;
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    // Keep the mean inside [min, max] despite rounding.
    s.mean = std::clamp(s.mean, s.min, s.max);
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / (n - 1.0));
    }
    return s;
}

MetricsReport aggregate(std::vector<MetricsReport::Entry> entries) {
    MetricsReport report;
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    report.images = std::move(entries);
    if (report.images.empty()) return report;
    auto column = [&](double SegmentationMetrics::*field) {
        std::vector<double> v;
        v.reserve(report.images.size());
        for (const auto& e : report.images) v.push_back(e.metrics.*field);
        return summarize(v);
    };
    report.dice = column(&SegmentationMetrics::dice);
    report.accuracy = column(&SegmentationMetrics::accuracy);
    report.iou = column(&SegmentationMetrics::iou);
    report.precision = column(&SegmentationMetrics::precision);
    report.recall = column(&SegmentationMetrics::recall);
    return report;
}

nlohmann::json MetricsReport::to_json() const {
    auto summary = [](const MetricSummary& s) {
        return nlohmann::json{{"mean", s.mean}, {"std", s.std}, {"min", s.min}, {"max", s.max}};
    };
    nlohmann::json per_image = nlohmann::json::array();
    for (const auto& e : images) {
        per_image.push_back({
            {"name", e.name},
            {"tp", e.counts.tp},
            {"fp", e.counts.fp},
            {"tn", e.counts.tn},
            {"fn", e.counts.fn},
            {"dice", e.metrics.dice},
            {"accuracy", e.metrics.accuracy},
            {"iou", e.metrics.iou},
            {"precision", e.metrics.precision},
            {"recall", e.metrics.recall},
            {"empty_vs_empty", e.metrics.empty_vs_empty},
        });
    }
    return {
        {"count", images.size()},
        {"images", std::move(per_image)},
        {"summary",
         {{"dice", summary(dice)},
          {"accuracy", summary(accuracy)},
          {"iou", summary(iou)},
          {"precision", summary(precision)},
          {"recall", summary(recall)}}},
        {"missing", missing},
        {"unreadable", unreadable},
    };
}

std::string MetricsReport::to_table() const {
    std::size_t name_w = 5;
    for (const auto& e : images) name_w = std::max(name_w, e.name.size() + (e.metrics.empty_vs_empty ? 1 : 0));

    std::string out;
    char buf[256];
    auto row = [&](const std::string& name, double d, double a, double i, double p, double r) {
        std::snprintf(buf, sizeof buf, "%-*s  %8.4f  %8.4f  %8.4f  %8.4f  %8.4f\n", static_cast<int>(name_w),
                      name.c_str(), d, a, i, p, r);
        out += buf;
    };
    std::snprintf(buf, sizeof buf, "%-*s  %8s  %8s  %8s  %8s  %8s\n", static_cast<int>(name_w), "image", "Dice",
                  "Acc", "IoU", "Prec", "Rec");
    out += buf;
    for (const auto& e : images) {
        const auto& m = e.metrics;
        row(e.name + (m.empty_vs_empty ? "*" : ""), m.dice, m.accuracy, m.iou, m.precision, m.recall);
    }
    if (!images.empty()) {
        row("mean", dice.mean, accuracy.mean, iou.mean, precision.mean, recall.mean);
        row("std", dice.std, accuracy.std, iou.std, precision.std, recall.std);
    }
    if (std::any_of(images.begin(), images.end(), [](const auto& e) { return e.metrics.empty_vs_empty; })) {
        out += "* empty prediction and ground truth (scored 1.0)\n";
    }
    for (const auto& m : missing) out += "missing counterpart: " + m + "\n";
    for (const auto& u : unreadable) out += "unreadable: " + u + "\n";
    return out;
}

namespace {

std::set<std::string> list_files(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("not a readable directory: " + dir.string());
    std::set<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file()) names.insert(entry.path().filename().string());
    }
    return names;
}

}  // namespace

MetricsReport evaluate_dirs(const fs::path& pred_dir, const fs::path& gt_dir) {
    const auto pred_names = list_files(pred_dir);
    const auto gt_names = list_files(gt_dir);

    std::vector<std::string> missing;
    std::vector<std::string> unreadable;
    std::vector<MetricsReport::Entry> entries;
    for (const auto& name : pred_names) {
        if (!gt_names.count(name)) missing.push_back((pred_dir / name).string());
    }
    for (const auto& name : gt_names) {
        if (!pred_names.count(name)) {
            missing.push_back((gt_dir / name).string());
            continue;
        }
        try {
            const MaskRaster pred = image_to_mask(read_image(pred_dir / name));
            const MaskRaster gt = image_to_mask(read_image(gt_dir / name));
            const ConfusionCounts c = confusion(pred, gt);
            entries.push_back({name, c, compute_metrics(c)});
        } catch (const IoError&) {
            unreadable.push_back(name);
        } catch (const DomainError&) {
            unreadable.push_back(name + " (shape mismatch)");
        }
    }
    MetricsReport report = aggregate(std::move(entries));
    report.missing = std::move(missing);
    report.unreadable = std::move(unreadable);
    if (report.images.empty()) throw DomainError("no evaluable image pairs found");
    return report;
}

}  // namespace vesselforge
