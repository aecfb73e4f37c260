#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "misinfo/csv.hpp"
#include "misinfo/evaluation.hpp"

namespace misinfo::report {

// Comparison outputs for a batch of cross-validation reports: a Markdown and
// a CSV table (grouped, sorted by F1, per-group best row in bold), long-form
// plot data, and a grouped-bar SVG per metric.

struct ComparisonFiles {
    std::string markdown;
    std::string table_csv;
    std::string plot_csv;
    std::map<std::string, std::string> svg_per_metric;  // metric name -> svg
};

namespace detail {

struct Row {
    const eval::CVReport* report;
    std::string resampling;
    std::string classifier;
    std::string vectorizer;
    std::string feature_set;
    std::optional<double> delta_f1;  // F1(text+url) - F1(text), when both exist
};

inline std::string group_key(const Row& r) {
    return r.feature_set + "|" + r.resampling + "|" + r.vectorizer;
}

inline std::vector<Row> build_rows(const std::vector<eval::CVReport>& reports) {
    std::vector<Row> rows;
    rows.reserve(reports.size());
    for (const auto& r : reports) {
        Row row;
        row.report = &r;
        row.resampling = resample::to_string(r.resample_config.method);
        row.classifier = models::to_string(r.model_spec.algorithm);
        row.vectorizer = text::to_string(r.feature_config.text_scheme);
        row.feature_set = r.feature_set();
        rows.push_back(std::move(row));
    }
    // Delta per (classifier, vectorizer, resampling) when both feature sets ran.
    std::map<std::string, double> text_f1;
    for (const auto& row : rows) {
        if (row.feature_set == "text")
            text_f1[row.classifier + "|" + row.vectorizer + "|" + row.resampling] =
                row.report->mean.f1;
    }
    for (auto& row : rows) {
        if (row.feature_set != "text+url") continue;
        const auto it = text_f1.find(row.classifier + "|" + row.vectorizer + "|" + row.resampling);
        if (it != text_f1.end()) row.delta_f1 = row.report->mean.f1 - it->second;
    }
    // Group blocks together, best F1 first inside a group; ties broken by
    // classifier name so output order is deterministic.
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        const auto ka = group_key(a), kb = group_key(b);
        if (ka != kb) return ka < kb;
        if (a.report->mean.f1 != b.report->mean.f1) return a.report->mean.f1 > b.report->mean.f1;
        return a.classifier < b.classifier;
    });
    return rows;
}

inline std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

inline const std::vector<std::pair<std::string, double eval::Metrics::*>>& metric_fields() {
    static const std::vector<std::pair<std::string, double eval::Metrics::*>> fields = {
        {"precision", &eval::Metrics::precision},
        {"accuracy", &eval::Metrics::accuracy},
        {"recall", &eval::Metrics::recall},
        {"f1", &eval::Metrics::f1}};
    return fields;
}

inline std::string svg_bar_chart(const std::string& metric,
                                 const std::vector<Row>& rows) {
    // Bars grouped by classifier; one bar per configuration within a group.
    std::vector<std::string> classifiers;
    std::vector<std::string> configs;  // "resampling/vectorizer/feature_set"
    for (const auto& r : rows) {
        if (std::find(classifiers.begin(), classifiers.end(), r.classifier) == classifiers.end())
            classifiers.push_back(r.classifier);
        const std::string cfg = r.resampling + "/" + r.vectorizer + "/" + r.feature_set;
        if (std::find(configs.begin(), configs.end(), cfg) == configs.end()) configs.push_back(cfg);
    }
    std::sort(classifiers.begin(), classifiers.end());
    std::sort(configs.begin(), configs.end());

    static const std::vector<std::string> palette = {
        "#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2", "#b279a2",
        "#ff9da6", "#9d755d", "#bab0ac", "#d67195", "#86bcb6", "#f2cf5b"};

    const double width = 960, height = 420;
    const double left = 60, right = 20, top = 40, bottom = 140;
    const double plot_w = width - left - right, plot_h = height - top - bottom;
    const double group_w = plot_w / static_cast<double>(classifiers.size());
    const double bar_w = group_w * 0.9 / static_cast<double>(configs.size());

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + csv::format_double(width) +
           "\" height=\"" + csv::format_double(height) + "\">\n";
    svg += "<text x=\"" + csv::format_double(width / 2) +
           "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           metric + " by classifier</text>\n";
    for (int tick = 0; tick <= 5; ++tick) {
        const double v = tick / 5.0;
        const double y = top + plot_h * (1.0 - v);
        svg += "<line x1=\"" + csv::format_double(left) + "\" y1=\"" + csv::format_double(y) +
               "\" x2=\"" + csv::format_double(width - right) + "\" y2=\"" + csv::format_double(y) +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + csv::format_double(left - 8) + "\" y=\"" + csv::format_double(y + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt3(v) +
               "</text>\n";
    }
    for (std::size_t g = 0; g < classifiers.size(); ++g) {
        const double gx = left + group_w * static_cast<double>(g);
        svg += "<text x=\"" + csv::format_double(gx + group_w / 2) + "\" y=\"" +
               csv::format_double(top + plot_h + 16) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               classifiers[g] + "</text>\n";
        for (std::size_t c = 0; c < configs.size(); ++c) {
            double value = -1.0;
            for (const auto& r : rows) {
                const std::string cfg = r.resampling + "/" + r.vectorizer + "/" + r.feature_set;
                if (r.classifier == classifiers[g] && cfg == configs[c]) {
                    for (const auto& [name, member] : metric_fields())
                        if (name == metric) value = r.report->mean.*member;
                }
            }
            if (value < 0.0) continue;
            const double x = gx + group_w * 0.05 + bar_w * static_cast<double>(c);
            const double h = plot_h * value;
            svg += "<rect x=\"" + csv::format_double(x) + "\" y=\"" +
                   csv::format_double(top + plot_h - h) + "\" width=\"" +
                   csv::format_double(bar_w * 0.92) + "\" height=\"" + csv::format_double(h) +
                   "\" fill=\"" + palette[c % palette.size()] + "\"/>\n";
        }
    }
    for (std::size_t c = 0; c < configs.size(); ++c) {
        const double y = top + plot_h + 36 + 16 * static_cast<double>(c % 6);
        const double x = left + (c / 6) * 300.0;
        svg += "<rect x=\"" + csv::format_double(x) + "\" y=\"" + csv::format_double(y - 9) +
               "\" width=\"10\" height=\"10\" fill=\"" + palette[c % palette.size()] + "\"/>\n";
        svg += "<text x=\"" + csv::format_double(x + 14) + "\" y=\"" + csv::format_double(y) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + configs[c] + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace detail

inline ComparisonFiles compare_report(const std::vector<eval::CVReport>& reports) {
    if (reports.empty()) throw ValidationError("compare_report: no reports");
    const auto rows = detail::build_rows(reports);

    // Per-group best F1 for bolding.
    std::map<std::string, double> group_best;
    for (const auto& r : rows) {
        auto& best = group_best[detail::group_key(r)];
        best = std::max(best, r.report->mean.f1);
    }

    ComparisonFiles out;
    const bool any_delta = std::any_of(rows.begin(), rows.end(),
                                       [](const detail::Row& r) { return r.delta_f1.has_value(); });

    out.markdown = "| Feature Set | Re-Sampling | Classifier | Pre-Processing | Precision | "
                   "Accuracy | Recall | F1-Score |";
    if (any_delta) out.markdown += " F1 delta vs text |";
    out.markdown += "\n|---|---|---|---|---|---|---|---|";
    if (any_delta) out.markdown += "---|";
    out.markdown += "\n";
    for (const auto& r : rows) {
        const bool best = r.report->mean.f1 == group_best[detail::group_key(r)];
        auto cell = [&best](const std::string& s) { return best ? "**" + s + "**" : s; };
        const auto& m = r.report->mean;
        out.markdown += "| " + cell(r.feature_set) + " | " + cell(r.resampling) + " | " +
                        cell(r.classifier) + " | " + cell(r.vectorizer) + " | " +
                        cell(detail::fmt3(m.precision)) + " | " + cell(detail::fmt3(m.accuracy)) +
                        " | " + cell(detail::fmt3(m.recall)) + " | " + cell(detail::fmt3(m.f1)) +
                        " |";
        if (any_delta)
            out.markdown += (r.delta_f1 ? " " + detail::fmt3(*r.delta_f1) : " ") + std::string(" |");
        out.markdown += "\n";
    }

    out.table_csv =
        "feature_set,resampling,classifier,vectorizer,precision,accuracy,recall,f1,f1_std,delta_f1\n";
    for (const auto& r : rows) {
        const auto& m = r.report->mean;
        out.table_csv += csv::join_row({r.feature_set, r.resampling, r.classifier, r.vectorizer,
                                        csv::format_double(m.precision),
                                        csv::format_double(m.accuracy),
                                        csv::format_double(m.recall), csv::format_double(m.f1),
                                        csv::format_double(r.report->stddev.f1),
                                        r.delta_f1 ? csv::format_double(*r.delta_f1) : ""});
        out.table_csv += '\n';
    }

    out.plot_csv = "metric,model,config,value\n";
    for (const auto& [name, member] : detail::metric_fields()) {
        for (const auto& r : rows) {
            out.plot_csv += csv::join_row({name, r.classifier,
                                           r.resampling + "/" + r.vectorizer + "/" + r.feature_set,
                                           csv::format_double(r.report->mean.*member)});
            out.plot_csv += '\n';
        }
    }

    for (const auto& [name, member] : detail::metric_fields())
        out.svg_per_metric[name] = detail::svg_bar_chart(name, rows);
    return out;
}

}  // namespace misinfo::report
