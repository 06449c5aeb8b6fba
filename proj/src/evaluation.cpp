// Copyright 2026 the gbi authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gbi/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace gbi {

Confusion confusion(const Raster& pred, const Raster& gt, double t) {
    if (!pred.same_dims(gt))
        throw ParameterError("confusion: prediction and ground truth dimensions differ");
    const int w = pred.width();
    const int h = pred.height();
    std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
#pragma omp parallel for schedule(static) reduction(+ : tp, fp, fn, tn)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const bool p = pred.at(x, y) >= t;
            const bool g = gt.at(x, y) != 0.0;
            if (p && g)
                ++tp;
            else if (p && !g)
                ++fp;
            else if (!p && g)
                ++fn;
            else
                ++tn;
        }
    }
    return {tp, fp, fn, tn};
}

std::pair<double, double> precision_recall(const Confusion& c) {
    const double precision =
        c.tp + c.fp == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    const double recall =
        c.tp + c.fn == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    return {precision, recall};
}

double f_score(double precision, double recall) {
    if (precision + recall <= 0.0)
        return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

double average_precision(const std::vector<ThresholdEntry>& entries) {
    if (entries.size() < 2)
        throw ParameterError("average_precision: need at least 2 threshold entries");
    // Walk from the highest threshold (lowest recall) down; recall is
    // non-decreasing along the walk because prediction sets are nested.
    std::vector<ThresholdEntry> pts(entries);
    std::sort(pts.begin(), pts.end(), [](const ThresholdEntry& a, const ThresholdEntry& b) {
        return a.threshold > b.threshold;
    });
    double pmax = 0.0;
    for (const ThresholdEntry& e : pts)
        pmax = std::max(pmax, e.precision);

    double ap = 0.0;
    double prev_r = 0.0;
    double prev_p = pmax;  // extension of the curve to recall 0
    for (const ThresholdEntry& e : pts) {
        ap += 0.5 * (e.precision + prev_p) * (e.recall - prev_r);
        prev_r = e.recall;
        prev_p = e.precision;
    }
    return ap;
}

EvalReport evaluate_image(const Raster& pred, const Raster& gt, double step) {
    if (step <= 0.0 || step > 1.0)
        throw ParameterError("evaluate_image: step must be in (0,1]");
    EvalReport report;
    const int n = static_cast<int>(std::lround(1.0 / step));
    for (int i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) * step;
        const Confusion c = confusion(pred, gt, t);
        const auto [p, r] = precision_recall(c);
        report.entries.push_back({t, p, r, f_score(p, r)});
    }
    report.ap = average_precision(report.entries);
    report.best_f = 0.0;
    report.best_threshold = 0.0;
    for (const ThresholdEntry& e : report.entries) {
        if (e.f > report.best_f) {
            report.best_f = e.f;
            report.best_threshold = e.threshold;
        }
    }
    return report;
}

DatasetSummary evaluate_dataset(const std::vector<EvalReport>& reports) {
    if (reports.empty())
        throw ParameterError("evaluate_dataset: no reports");
    DatasetSummary s;
    for (const EvalReport& r : reports) {
        s.map += r.ap;
        s.mean_f += r.best_f;
    }
    s.map /= static_cast<double>(reports.size());
    s.mean_f /= static_cast<double>(reports.size());
    return s;
}

void save_pr_csv(const EvalReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path);
    out << "threshold,precision,recall,f\n";
    out.precision(17);
    for (const ThresholdEntry& e : report.entries)
        out << e.threshold << ',' << e.precision << ',' << e.recall << ',' << e.f << '\n';
    if (!out)
        throw IoError("write failed: " + path);
}

void save_report_json(const EvalReport& report, const std::string& path) {
    nlohmann::json entries = nlohmann::json::array();
    for (const ThresholdEntry& e : report.entries)
        entries.push_back({{"threshold", e.threshold},
                           {"precision", e.precision},
                           {"recall", e.recall},
                           {"f", e.f}});
    nlohmann::json j{{"entries", entries},
                     {"ap", report.ap},
                     {"best_f", report.best_f},
                     {"best_threshold", report.best_threshold}};
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out)
        throw IoError("write failed: " + path);
}

}  // namespace gbi
