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

#ifndef GBI_CONFIG_HPP
#define GBI_CONFIG_HPP

#include <iosfwd>
#include <string>

#include "gbi/junction.hpp"
#include "gbi/saliency.hpp"
#include "gbi/synthetic.hpp"

namespace gbi {

/// Pipeline settings, loadable from a line-oriented `key = value` file.
/// Unknown keys are rejected so every effective parameter stays auditable.
struct Config {
    unsigned seed = 17;
    int jobs = 0;  ///< worker threads for dataset commands; 0 = hardware

    DetectionParams detect;
    SaliencyParams saliency;

    int prior_building_components = 3;
    int prior_background_components = 4;
    double prior_overlap_threshold = 0.8;

    double eval_threshold_step = 0.01;

    SuiteParams scenes;

    void validate() const;

    /// Applies `key = value` lines from the file on top of the current values.
    void apply_file(const std::string& path);
    /// Applies one key/value pair; throws ParameterError for unknown keys.
    void apply(const std::string& key, const std::string& value);

    void dump(std::ostream& out) const;
};

bool operator==(const Config& a, const Config& b);

}  // namespace gbi

#endif  // GBI_CONFIG_HPP
