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

#ifndef GBI_EVALUATION_HPP
#define GBI_EVALUATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gbi/raster.hpp"

namespace gbi {

struct Confusion {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;
};

struct ThresholdEntry {
    double threshold = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f = 0.0;
};

struct EvalReport {
    std::vector<ThresholdEntry> entries;  ///< thresholds 0.00 .. 1.00
    double ap = 0.0;
    double best_f = 0.0;
    double best_threshold = 0.0;
};

struct DatasetSummary {
    double map = 0.0;     ///< mean AP over images
    double mean_f = 0.0;  ///< mean of per-image best F
};

/// Pixel counts with prediction positive iff pred >= t. gt must be binary.
Confusion confusion(const Raster& pred, const Raster& gt, double t);

/// tp/(tp+fp) and tp/(tp+fn); empty denominators yield 1 by convention.
std::pair<double, double> precision_recall(const Confusion& c);

/// Harmonic mean; 0 when both inputs are 0.
double f_score(double precision, double recall);

/// Trapezoidal area of precision over recall, walking thresholds from high
/// to low and extending to recall 0 at the maximum precision.
double average_precision(const std::vector<ThresholdEntry>& entries);

/// Sweeps thresholds 0.00..1.00 with the given step (default 0.01).
EvalReport evaluate_image(const Raster& pred, const Raster& gt, double step = 0.01);

/// mAP and mean best F across per-image reports.
DatasetSummary evaluate_dataset(const std::vector<EvalReport>& reports);

/// CSV with header threshold,precision,recall,f.
void save_pr_csv(const EvalReport& report, const std::string& path);
/// Full report as JSON.
void save_report_json(const EvalReport& report, const std::string& path);

}  // namespace gbi

#endif  // GBI_EVALUATION_HPP
