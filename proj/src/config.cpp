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

#include "gbi/config.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace gbi {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ParameterError("config: bad number for " + key + ": '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long n = std::stol(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("trailing characters");
        return static_cast<int>(n);
    } catch (const std::exception&) {
        throw ParameterError("config: bad integer for " + key + ": '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "off")
        return false;
    throw ParameterError("config: bad boolean for " + key + ": '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(key, trim(item)));
    if (out.empty())
        throw ParameterError("config: empty list for " + key);
    return out;
}

}  // namespace

void Config::validate() const {
    detect.validate();
    if (jobs < 0)
        throw ParameterError("config: jobs must be >= 0");
    if (saliency.neighbor_k < 0)
        throw ParameterError("config: saliency.neighbor_k must be >= 0");
    if (saliency.scale_ratio_limit < 1.0)
        throw ParameterError("config: saliency.scale_ratio_limit must be >= 1");
    if (saliency.distance_factor <= 0.0)
        throw ParameterError("config: saliency.distance_factor must be > 0");
    if (saliency.blur_side < 1 || saliency.blur_side % 2 == 0)
        throw ParameterError("config: saliency.blur_side must be odd");
    if (saliency.blur_sigma <= 0.0)
        throw ParameterError("config: saliency.blur_sigma must be > 0");
    if (saliency.tophat_side < 1 || saliency.tophat_side % 2 == 0)
        throw ParameterError("config: saliency.tophat_side must be odd");
    if (prior_building_components < 1 || prior_background_components < 1)
        throw ParameterError("config: prior component counts must be >= 1");
    if (prior_overlap_threshold <= 0.0 || prior_overlap_threshold >= 1.0)
        throw ParameterError("config: prior.overlap_threshold must be in (0,1)");
    if (eval_threshold_step <= 0.0 || eval_threshold_step > 1.0)
        throw ParameterError("config: eval.threshold_step must be in (0,1]");
    if (scenes.width < 8 || scenes.height < 8)
        throw ParameterError("config: scene dimensions too small");
    if (scenes.min_buildings < 0 || scenes.max_buildings < scenes.min_buildings)
        throw ParameterError("config: bad scene building counts");
    if (scenes.min_edge <= 0.0 || scenes.max_edge < scenes.min_edge)
        throw ParameterError("config: bad scene edge lengths");
    if (scenes.noise_sigma < 0.0)
        throw ParameterError("config: scenes.noise_sigma must be >= 0");
}

void Config::apply_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ParameterError("config: missing '=' at " + path + ":" +
                                 std::to_string(lineno));
        apply(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
}

void Config::apply(const std::string& key, const std::string& value) {
    if (key == "seed")
        seed = static_cast<unsigned>(parse_int(key, value));
    else if (key == "jobs")
        jobs = parse_int(key, value);
    else if (key == "detect.scales")
        detect.scales = parse_list(key, value);
    else if (key == "detect.orientation_bins")
        detect.orientation_bins = parse_int(key, value);
    else if (key == "detect.delta_arm")
        detect.delta_arm = parse_double(key, value);
    else if (key == "detect.delta_min")
        detect.delta_min = parse_double(key, value);
    else if (key == "detect.delta_max")
        detect.delta_max = parse_double(key, value);
    else if (key == "detect.epsilon")
        detect.epsilon = parse_double(key, value);
    else if (key == "detect.nms_radius")
        detect.nms_radius = parse_double(key, value);
    else if (key == "detect.nfa_tests") {
        if (value == "position")
            detect.test_count = DetectionParams::TestCount::kPerPosition;
        else if (value == "image")
            detect.test_count = DetectionParams::TestCount::kPerImage;
        else
            throw ParameterError("config: detect.nfa_tests must be 'position' or 'image'");
    } else if (key == "detect.pre_smooth_side")
        detect.pre_smooth_side = parse_int(key, value);
    else if (key == "detect.pre_smooth_sigma")
        detect.pre_smooth_sigma = parse_double(key, value);
    else if (key == "detect.max_refined_scale")
        detect.max_refined_scale = parse_double(key, value);
    else if (key == "detect.straight_edge_tol")
        detect.straight_edge_tol = parse_double(key, value);
    else if (key == "saliency.neighbor_k")
        saliency.neighbor_k = parse_int(key, value);
    else if (key == "saliency.scale_ratio_limit")
        saliency.scale_ratio_limit = parse_double(key, value);
    else if (key == "saliency.distance_factor")
        saliency.distance_factor = parse_double(key, value);
    else if (key == "saliency.squared_exponential")
        saliency.squared_exponential = parse_bool(key, value);
    else if (key == "saliency.blur_side")
        saliency.blur_side = parse_int(key, value);
    else if (key == "saliency.blur_sigma")
        saliency.blur_sigma = parse_double(key, value);
    else if (key == "saliency.tophat_side")
        saliency.tophat_side = parse_int(key, value);
    else if (key == "prior.building_components")
        prior_building_components = parse_int(key, value);
    else if (key == "prior.background_components")
        prior_background_components = parse_int(key, value);
    else if (key == "prior.overlap_threshold")
        prior_overlap_threshold = parse_double(key, value);
    else if (key == "eval.threshold_step")
        eval_threshold_step = parse_double(key, value);
    else if (key == "scenes.width")
        scenes.width = parse_int(key, value);
    else if (key == "scenes.height")
        scenes.height = parse_int(key, value);
    else if (key == "scenes.min_buildings")
        scenes.min_buildings = parse_int(key, value);
    else if (key == "scenes.max_buildings")
        scenes.max_buildings = parse_int(key, value);
    else if (key == "scenes.min_edge")
        scenes.min_edge = parse_double(key, value);
    else if (key == "scenes.max_edge")
        scenes.max_edge = parse_double(key, value);
    else if (key == "scenes.min_contrast")
        scenes.min_contrast = parse_double(key, value);
    else if (key == "scenes.max_contrast")
        scenes.max_contrast = parse_double(key, value);
    else if (key == "scenes.noise_sigma")
        scenes.noise_sigma = parse_double(key, value);
    else if (key == "scenes.shadows")
        scenes.shadows = parse_bool(key, value);
    else if (key == "scenes.border_margin")
        scenes.border_margin = parse_int(key, value);
    else
        throw ParameterError("config: unknown key '" + key + "'");
}

void Config::dump(std::ostream& out) const {
    out.precision(17);
    out << "seed = " << seed << "\n";
    out << "jobs = " << jobs << "\n";
    out << "\n# junction detection\n";
    out << "detect.scales = ";
    for (std::size_t i = 0; i < detect.scales.size(); ++i)
        out << (i ? "," : "") << detect.scales[i];
    out << "\n";
    out << "detect.orientation_bins = " << detect.orientation_bins << "\n";
    out << "detect.delta_arm = " << detect.delta_arm << "\n";
    out << "detect.delta_min = " << detect.delta_min << "\n";
    out << "detect.delta_max = " << detect.delta_max << "\n";
    out << "detect.epsilon = " << detect.epsilon << "\n";
    out << "# nms_radius <= 0 selects the smallest scale\n";
    out << "detect.nms_radius = " << detect.nms_radius << "\n";
    out << "detect.nfa_tests = "
        << (detect.test_count == DetectionParams::TestCount::kPerPosition ? "position" : "image")
        << "\n";
    out << "detect.pre_smooth_side = " << detect.pre_smooth_side << "\n";
    out << "detect.pre_smooth_sigma = " << detect.pre_smooth_sigma << "\n";
    out << "detect.max_refined_scale = " << detect.max_refined_scale << "\n";
    out << "detect.straight_edge_tol = " << detect.straight_edge_tol << "\n";
    out << "\n# saliency\n";
    out << "saliency.neighbor_k = " << saliency.neighbor_k << "\n";
    out << "saliency.scale_ratio_limit = " << saliency.scale_ratio_limit << "\n";
    out << "saliency.distance_factor = " << saliency.distance_factor << "\n";
    out << "saliency.squared_exponential = " << (saliency.squared_exponential ? "true" : "false")
        << "\n";
    out << "saliency.blur_side = " << saliency.blur_side << "\n";
    out << "saliency.blur_sigma = " << saliency.blur_sigma << "\n";
    out << "saliency.tophat_side = " << saliency.tophat_side << "\n";
    out << "\n# angle prior fitting\n";
    out << "prior.building_components = " << prior_building_components << "\n";
    out << "prior.background_components = " << prior_background_components << "\n";
    out << "prior.overlap_threshold = " << prior_overlap_threshold << "\n";
    out << "\n# evaluation\n";
    out << "eval.threshold_step = " << eval_threshold_step << "\n";
    out << "\n# synthetic scene generation\n";
    out << "scenes.width = " << scenes.width << "\n";
    out << "scenes.height = " << scenes.height << "\n";
    out << "scenes.min_buildings = " << scenes.min_buildings << "\n";
    out << "scenes.max_buildings = " << scenes.max_buildings << "\n";
    out << "scenes.min_edge = " << scenes.min_edge << "\n";
    out << "scenes.max_edge = " << scenes.max_edge << "\n";
    out << "scenes.min_contrast = " << scenes.min_contrast << "\n";
    out << "scenes.max_contrast = " << scenes.max_contrast << "\n";
    out << "scenes.noise_sigma = " << scenes.noise_sigma << "\n";
    out << "scenes.shadows = " << (scenes.shadows ? "true" : "false") << "\n";
    out << "scenes.border_margin = " << scenes.border_margin << "\n";
}

bool operator==(const Config& a, const Config& b) {
    std::ostringstream sa, sb;
    a.dump(sa);
    b.dump(sb);
    return sa.str() == sb.str();
}

}  // namespace gbi
