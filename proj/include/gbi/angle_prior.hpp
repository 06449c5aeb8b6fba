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

#ifndef GBI_ANGLE_PRIOR_HPP
#define GBI_ANGLE_PRIOR_HPP

#include <string>
#include <vector>

#include "gbi/l_junction.hpp"
#include "gbi/raster.hpp"

namespace gbi {

struct GaussComponent {
    double weight = 1.0;
    double mean = 0.0;
    double stddev = 1.0;
};

struct GaussianMixture {
    std::vector<GaussComponent> components;

    /// Throws ParameterError when weights do not sum to 1 (1e-9) or a
    /// stddev is not positive.
    void validate() const;
};

/// Mixture density at beta.
double pdf(const GaussianMixture& m, double beta);

enum class RegionLabel { kBuilding, kBackground, kDiscarded };

/// Included-angle distributions for building vs background junctions plus
/// class priors.
struct AnglePriorModel {
    GaussianMixture building;
    GaussianMixture background;
    double prior_building = 0.5;

    void validate() const;
};

/// Labels an L-junction by the overlap of its parallelogram with the mask:
/// building when the covered fraction exceeds `overlap_threshold`, discarded
/// when the parallelogram covers no pixel.
RegionLabel label_junction(const LJunction& j, const Raster& mask,
                           double overlap_threshold = 0.8);

/// EM fit of a K-component mixture, k-means++ initialization with the given
/// seed, stddev floored at 1e-3 rad. Requires at least 10*K samples.
/// When `log_likelihood_trace` is given, it receives the per-iteration total
/// log-likelihood.
GaussianMixture em_fit(const std::vector<double>& samples, int k, unsigned seed,
                       std::vector<double>* log_likelihood_trace = nullptr);

/// Posterior probability that a junction with included angle beta lies on a
/// building. Falls back to prior_building when both likelihoods vanish.
double posterior_building(const AnglePriorModel& model, double beta);

void save_model(const AnglePriorModel& model, const std::string& path);
AnglePriorModel load_model(const std::string& path);

/// Prior bundled with the toolkit, fitted by `gbi fit-prior` on a generated
/// scene suite (see README). Refit on real data for serious use.
AnglePriorModel default_model();

}  // namespace gbi

#endif  // GBI_ANGLE_PRIOR_HPP
