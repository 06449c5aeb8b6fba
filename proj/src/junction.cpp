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

#include "gbi/junction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gbi {

double DetectionParams::delta(double s) const {
    return std::clamp(std::atan(delta_arm / s), delta_min, delta_max);
}

double DetectionParams::effective_nms_radius() const {
    return nms_radius > 0.0 ? nms_radius : scales.front();
}

void DetectionParams::validate() const {
    if (scales.empty())
        throw ParameterError("detection: scale ladder must not be empty");
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] < 1.0)
            throw ParameterError("detection: scales must be >= 1");
        if (i > 0 && scales[i] <= scales[i - 1])
            throw ParameterError("detection: scales must be strictly increasing");
    }
    if (orientation_bins < 4)
        throw ParameterError("detection: need at least 4 orientation bins");
    if (delta_min <= 0.0 || delta_max >= kPi / 2.0 || delta_min > delta_max)
        throw ParameterError("detection: delta bounds must satisfy 0 < min <= max < pi/2");
    if (epsilon <= 0.0)
        throw ParameterError("detection: epsilon must be > 0");
    if (pre_smooth_side != 0 && (pre_smooth_side < 1 || pre_smooth_side % 2 == 0))
        throw ParameterError("detection: pre-smooth side must be odd or 0");
    if (max_refined_scale < scales.back())
        throw ParameterError("detection: max refined scale below largest seed scale");
}

double null_mean_per_pixel() {
    return (2.0 * std::sqrt(2.0) - 2.0) / kPi;
}

std::vector<std::pair<int, int>> sector_pixels(int px, int py, double s, double theta,
                                               double delta, int width, int height) {
    std::vector<std::pair<int, int>> out;
    const int r = static_cast<int>(std::ceil(s));
    const double s2 = s * s;
    for (int dy = -r; dy <= r; ++dy) {
        const int y = py + dy;
        if (y < 0 || y >= height)
            continue;
        for (int dx = -r; dx <= r; ++dx) {
            if (dx == 0 && dy == 0)
                continue;
            const int x = px + dx;
            if (x < 0 || x >= width)
                continue;
            if (dx * dx + dy * dy > s2)
                continue;
            const double alpha = wrap_angle(std::atan2(static_cast<double>(dy), dx));
            if (circular_distance(alpha, theta) <= delta)
                out.emplace_back(x, y);
        }
    }
    return out;
}

double alignment_weight(double angle_diff) {
    return std::max(std::fabs(std::cos(angle_diff)) - std::fabs(std::sin(angle_diff)), 0.0);
}

double pairwise_strength(int qx, int qy, int px, int py, const GradientField& grad) {
    const double mag = grad.magnitude.at(qx, qy);
    if (mag <= 0.0)
        return 0.0;
    const double alpha = wrap_angle(std::atan2(static_cast<double>(qy - py), qx - px));
    // Branch support compares pq against the local edge tangent, i.e. the
    // gradient direction rotated by pi/2.
    const double edge_dir = grad.orientation.at(qx, qy) + kPi / 2.0;
    return mag * alignment_weight(edge_dir - alpha);
}

double branch_strength(int px, int py, double s, double theta, const GradientField& grad,
                       double delta) {
    double sum = 0.0;
    for (const auto& [qx, qy] :
         sector_pixels(px, py, s, theta, delta, grad.magnitude.width(), grad.magnitude.height()))
        sum += pairwise_strength(qx, qy, px, py, grad);
    return sum;
}

double junction_strength(const Junction& j, const GradientField& grad,
                         const DetectionParams& params) {
    if (j.branches.size() < 2)
        throw ParameterError("junction_strength: need at least 2 branches");
    double best = -1.0;
    for (const Branch& b : j.branches) {
        const double t = branch_strength(j.x, j.y, b.scale, b.theta, grad, params.delta(b.scale));
        if (best < 0.0 || t < best)
            best = t;
    }
    return best;
}

namespace {

// Tail bound for one branch. The null keeps the observed gradient
// magnitudes and randomizes orientations uniformly: the expected branch
// strength is null_mean_per_pixel() times the magnitude mass of the sector,
// and each pixel's term lies in [0, mag], so the Hoeffding denominator is
// the sum of squared magnitudes.
double branch_tail_bound(double strength, double mag_mass, double mag_sq) {
    if (mag_sq <= 0.0)
        return 1.0;
    const double dev = strength - null_mean_per_pixel() * mag_mass;
    if (dev <= 0.0)
        return 1.0;
    return std::exp(-2.0 * dev * dev / mag_sq);
}

double clamp_unit(double v) {
    return std::clamp(v, 0.0, 1.0);
}

// Number of false alarms before the [0,1] clamp; detection filters and
// suppression order both use this raw value.
double junction_nfa(const Junction& j, const GradientField& grad,
                    const DetectionParams& params, double test_count) {
    double worst = 0.0;
    for (const Branch& b : j.branches) {
        const double delta = params.delta(b.scale);
        const auto sector = sector_pixels(j.x, j.y, b.scale, b.theta, delta,
                                          grad.magnitude.width(), grad.magnitude.height());
        double t = 0.0;
        double mass = 0.0;
        double mass_sq = 0.0;
        for (const auto& [qx, qy] : sector) {
            t += pairwise_strength(qx, qy, j.x, j.y, grad);
            const double m = grad.magnitude.at(qx, qy);
            mass += m;
            mass_sq += m * m;
        }
        worst = std::max(worst, branch_tail_bound(t, mass, mass_sq));
    }
    return test_count * worst;
}

}  // namespace

double significance(const Junction& j, const GradientField& grad,
                    const DetectionParams& params, double test_count) {
    return clamp_unit(junction_nfa(j, grad, params, test_count));
}

namespace {

struct SectorOffset {
    int dx, dy;
    double cos_alpha, sin_alpha;
    int bin_lo;   // first supported orientation bin
    int bin_len;  // number of consecutive supported bins (circular)
};

// All disk offsets for one scale with the exact circular bin range each
// offset supports under the sector test d_2pi(alpha, theta_k) <= delta.
std::vector<SectorOffset> build_offsets(double s, double delta, int bins) {
    std::vector<SectorOffset> out;
    const int r = static_cast<int>(std::ceil(s));
    const double step = kTwoPi / bins;
    std::vector<char> ok(bins);
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            if (dx == 0 && dy == 0)
                continue;
            if (dx * dx + dy * dy > s * s)
                continue;
            const double alpha = wrap_angle(std::atan2(static_cast<double>(dy), dx));
            int supported = 0;
            for (int k = 0; k < bins; ++k) {
                ok[k] = circular_distance(alpha, k * step) <= delta ? 1 : 0;
                supported += ok[k];
            }
            if (supported == 0)
                continue;
            // The supported set is one circular run; find its start.
            int lo = 0;
            if (supported < bins) {
                while (!(ok[lo] && !ok[(lo + bins - 1) % bins]))
                    ++lo;
            }
            out.push_back({dx, dy, std::cos(alpha), std::sin(alpha), lo, supported});
        }
    }
    return out;
}

struct Candidate {
    Junction junction;
    double seed_scale;
    double nfa;  // before the [0,1] clamp
};

bool candidate_less(const Candidate& a, const Candidate& b) {
    if (a.nfa != b.nfa)
        return a.nfa < b.nfa;
    if (a.junction.y != b.junction.y)
        return a.junction.y < b.junction.y;
    if (a.junction.x != b.junction.x)
        return a.junction.x < b.junction.x;
    return a.seed_scale < b.seed_scale;
}

// Circular local maxima of strength: last bin of each maximal plateau.
std::vector<int> circular_local_maxima(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    std::vector<int> out;
    for (int b = 0; b < n; ++b) {
        const double prev = v[(b + n - 1) % n];
        const double next = v[(b + 1) % n];
        if (v[b] >= prev && v[b] > next)
            out.push_back(b);
    }
    return out;
}

// Greedy angular suppression: strongest first, minimum separation `delta`.
std::vector<int> separate_bins(const std::vector<int>& bins_in,
                               const std::vector<double>& strength, double step,
                               double delta) {
    std::vector<int> order(bins_in);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (strength[a] != strength[b])
            return strength[a] > strength[b];
        return a < b;
    });
    std::vector<int> kept;
    for (int b : order) {
        bool far_enough = true;
        for (int k : kept)
            if (circular_distance(b * step, k * step) < delta) {
                far_enough = false;
                break;
            }
        if (far_enough)
            kept.push_back(b);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

double test_count_for(const DetectionParams& params, int width, int height) {
    double n = static_cast<double>(params.scales.size()) * params.orientation_bins;
    if (params.test_count == DetectionParams::TestCount::kPerImage)
        n *= static_cast<double>(width) * height;
    return n;
}

// Summed-area table over gradient magnitude, used to skip empty regions.
class IntegralImage {
public:
    explicit IntegralImage(const Raster& img) : w_(img.width()), h_(img.height()) {
        sums_.assign(static_cast<std::size_t>(w_ + 1) * (h_ + 1), 0.0);
        for (int y = 0; y < h_; ++y) {
            double row = 0.0;
            for (int x = 0; x < w_; ++x) {
                row += img.at(x, y);
                at(x + 1, y + 1) = at(x + 1, y) + row;
            }
        }
    }

    double box_sum(int x0, int y0, int x1, int y1) const {
        x0 = std::max(x0, 0);
        y0 = std::max(y0, 0);
        x1 = std::min(x1, w_ - 1);
        y1 = std::min(y1, h_ - 1);
        if (x0 > x1 || y0 > y1)
            return 0.0;
        return at(x1 + 1, y1 + 1) - at(x0, y1 + 1) - at(x1 + 1, y0) + at(x0, y0);
    }

private:
    double& at(int x, int y) { return sums_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }
    double at(int x, int y) const { return sums_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }
    int w_, h_;
    std::vector<double> sums_;
};

struct RingStats {
    double strength = 0.0;
    double mag_mass = 0.0;
    int count = 0;
};

// Pixels with r-1 < |pq| <= r within delta(r) of theta.
RingStats ring_stats(int px, int py, int r, double theta, const GradientField& grad,
                     const DetectionParams& params) {
    RingStats st;
    const double delta = params.delta(r);
    const int w = grad.magnitude.width();
    const int h = grad.magnitude.height();
    const double lo2 = static_cast<double>(r - 1) * (r - 1);
    const double hi2 = static_cast<double>(r) * r;
    for (int dy = -r; dy <= r; ++dy) {
        const int y = py + dy;
        if (y < 0 || y >= h)
            continue;
        for (int dx = -r; dx <= r; ++dx) {
            if (dx == 0 && dy == 0)
                continue;
            const int x = px + dx;
            if (x < 0 || x >= w)
                continue;
            const double d2 = dx * dx + dy * dy;
            if (d2 <= lo2 || d2 > hi2)
                continue;
            const double alpha = wrap_angle(std::atan2(static_cast<double>(dy), dx));
            if (circular_distance(alpha, theta) > delta)
                continue;
            st.strength += pairwise_strength(x, y, px, py, grad);
            st.mag_mass += grad.magnitude.at(x, y);
            st.count += 1;
        }
    }
    return st;
}

// Drops branches that violate the pairwise angular separation invariant,
// keeping stronger ones. Catches rays that re-estimation drifted together
// and twin rays riding the same thick edge ribbon.
void enforce_branch_separation(Junction& j, const GradientField& grad,
                               const DetectionParams& params) {
    const int m = static_cast<int>(j.branches.size());
    std::vector<double> strength(m);
    for (int i = 0; i < m; ++i)
        strength[i] = branch_strength(j.x, j.y, j.branches[i].scale, j.branches[i].theta, grad,
                                      params.delta(j.branches[i].scale));
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (strength[a] != strength[b])
            return strength[a] > strength[b];
        return a < b;
    });
    std::vector<Branch> kept;
    for (int i : order) {
        const Branch& b = j.branches[i];
        bool ok = true;
        for (const Branch& k : kept) {
            const double tol = std::max(2.0 * params.delta(std::min(b.scale, k.scale)),
                                        params.min_branch_separation);
            if (circular_distance(b.theta, k.theta) < tol) {
                ok = false;
                break;
            }
        }
        if (ok)
            kept.push_back(b);
    }
    std::sort(kept.begin(), kept.end(),
              [](const Branch& a, const Branch& b) { return a.theta < b.theta; });
    j.branches = std::move(kept);
}

bool is_straight_edge_pair(const Junction& j, const DetectionParams& params) {
    if (j.branches.size() != 2)
        return false;
    const double beta = included_angle(j.branches[0].theta, j.branches[1].theta);
    return beta > kPi - params.straight_edge_tol;
}

// Mean alignment over the innermost pixels of a branch sector; a branch
// anchored at p scores close to 1 there, a ray that only meets an edge
// farther out scores near the 0.264 chance level.
bool branch_anchored(int px, int py, double theta, const GradientField& grad,
                     const DetectionParams& params) {
    const double r = std::max(params.anchor_radius, 1.0);
    const double delta = std::atan2(params.delta_arm, r);
    double t = 0.0, mass = 0.0;
    for (const auto& [qx, qy] : sector_pixels(px, py, r, theta, delta, grad.magnitude.width(),
                                              grad.magnitude.height())) {
        t += pairwise_strength(qx, qy, px, py, grad);
        mass += grad.magnitude.at(qx, qy);
    }
    return mass > 0.0 && t > params.anchor_quality * mass;
}

}  // namespace

namespace {

Junction refine_with_nfa(const Junction& j, const GradientField& grad,
                         const DetectionParams& params, double test_count, double* nfa_out) {
    Junction out = j;
    for (Branch& b : out.branches) {
        // Extend ring by ring while the marginal strength beats the null mean.
        int s = static_cast<int>(std::floor(b.scale));
        const int cap = static_cast<int>(params.max_refined_scale);
        while (s + 1 <= cap) {
            const RingStats st = ring_stats(j.x, j.y, s + 1, b.theta, grad, params);
            if (st.count == 0 || st.strength <= null_mean_per_pixel() * st.mag_mass)
                break;
            ++s;
        }
        b.scale = std::max(b.scale, static_cast<double>(s));

        // Strength-weighted mean angle over the final sector.
        const double delta = params.delta(b.scale);
        double wsum = 0.0, osum = 0.0;
        for (const auto& [qx, qy] :
             sector_pixels(j.x, j.y, b.scale, b.theta, delta, grad.magnitude.width(),
                           grad.magnitude.height())) {
            const double g = pairwise_strength(qx, qy, j.x, j.y, grad);
            const double alpha = wrap_angle(std::atan2(static_cast<double>(qy - j.y), qx - j.x));
            wsum += g;
            osum += g * wrap_signed(alpha - b.theta);
        }
        if (wsum > 0.0)
            b.theta = wrap_angle(b.theta + osum / wsum);
    }
    enforce_branch_separation(out, grad, params);
    double nfa = std::numeric_limits<double>::infinity();
    if (out.branches.size() >= 2)
        nfa = junction_nfa(out, grad, params, test_count);
    out.rho = clamp_unit(nfa);
    if (nfa_out)
        *nfa_out = nfa;
    return out;
}

}  // namespace

Junction refine_anisotropic_scales(const Junction& j, const GradientField& grad,
                                   const DetectionParams& params, double test_count) {
    return refine_with_nfa(j, grad, params, test_count, nullptr);
}

std::vector<Junction> detect_junctions(const Raster& img, const DetectionParams& params) {
    params.validate();
    const double s_max = params.scales.back();
    if (img.width() < 2 * s_max || img.height() < 2 * s_max)
        throw ParameterError("detect_junctions: image smaller than twice the largest scale");

    const Raster work = params.pre_smooth_side >= 3
                            ? gaussian_blur(img, params.pre_smooth_side, params.pre_smooth_sigma)
                            : img;
    const GradientField grad = gradient_field(work);
    const int w = img.width();
    const int h = img.height();
    const int bins = params.orientation_bins;
    const double step = kTwoPi / bins;
    const double null_c = null_mean_per_pixel();
    const double n_tests = test_count_for(params, w, h);

    // Per-pixel edge tangent vector scaled by gradient magnitude.
    std::vector<double> ex(static_cast<std::size_t>(w) * h), ey(ex.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const double mag = grad.magnitude.at(x, y);
            const double psi = grad.orientation.at(x, y) + kPi / 2.0;
            ex[i] = mag * std::cos(psi);
            ey[i] = mag * std::sin(psi);
        }
    }

    const IntegralImage energy(grad.magnitude);

    std::vector<std::vector<SectorOffset>> offsets(params.scales.size());
    for (std::size_t si = 0; si < params.scales.size(); ++si)
        offsets[si] = build_offsets(params.scales[si], params.delta(params.scales[si]), bins);

    std::vector<std::vector<Candidate>> thread_candidates;
#ifdef _OPENMP
    thread_candidates.resize(omp_get_max_threads());
#else
    thread_candidates.resize(1);
#endif

#pragma omp parallel
    {
#ifdef _OPENMP
        std::vector<Candidate>& local = thread_candidates[omp_get_thread_num()];
#else
        std::vector<Candidate>& local = thread_candidates[0];
#endif
        std::vector<double> gdiff(bins + 1);
        std::vector<double> mdiff(bins + 1);
        std::vector<double> m2diff(bins + 1);
        std::vector<double> strength(bins);
        std::vector<double> mag_mass(bins);
        std::vector<double> mag_sq(bins);

        // A sector with magnitude mass M has deviation at most (1-c)M and
        // squared-magnitude sum at most M, so the tail bound cannot reach
        // eps/N unless M >= ln(N/eps) / (2 (1-c)^2). Disks below that mass
        // cannot produce any candidate.
        const double min_mass =
            params.epsilon < n_tests
                ? std::log(n_tests / params.epsilon) / (2.0 * (1.0 - null_c) * (1.0 - null_c))
                : 0.0;

#pragma omp for schedule(dynamic, 8)
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                for (std::size_t si = 0; si < params.scales.size(); ++si) {
                    const double s = params.scales[si];
                    const int r = static_cast<int>(std::ceil(s));
                    if (energy.box_sum(x - r, y - r, x + r, y + r) <= min_mass)
                        continue;

                    std::fill(gdiff.begin(), gdiff.end(), 0.0);
                    std::fill(mdiff.begin(), mdiff.end(), 0.0);
                    std::fill(m2diff.begin(), m2diff.end(), 0.0);
                    for (const SectorOffset& o : offsets[si]) {
                        const int qx = x + o.dx;
                        const int qy = y + o.dy;
                        if (qx < 0 || qx >= w || qy < 0 || qy >= h)
                            continue;
                        const std::size_t qi = static_cast<std::size_t>(qy) * w + qx;
                        const double dot = ex[qi] * o.cos_alpha + ey[qi] * o.sin_alpha;
                        const double crs = ey[qi] * o.cos_alpha - ex[qi] * o.sin_alpha;
                        const double g = std::max(std::fabs(dot) - std::fabs(crs), 0.0);
                        const double m = grad.magnitude.at(qx, qy);
                        const int hi = o.bin_lo + o.bin_len;
                        if (hi <= bins) {
                            gdiff[o.bin_lo] += g;
                            gdiff[hi] -= g;
                            mdiff[o.bin_lo] += m;
                            mdiff[hi] -= m;
                            m2diff[o.bin_lo] += m * m;
                            m2diff[hi] -= m * m;
                        } else {
                            gdiff[o.bin_lo] += g;
                            gdiff[bins] -= g;
                            gdiff[0] += g;
                            gdiff[hi - bins] -= g;
                            mdiff[o.bin_lo] += m;
                            mdiff[bins] -= m;
                            mdiff[0] += m;
                            mdiff[hi - bins] -= m;
                            m2diff[o.bin_lo] += m * m;
                            m2diff[bins] -= m * m;
                            m2diff[0] += m * m;
                            m2diff[hi - bins] -= m * m;
                        }
                    }
                    double gacc = 0.0, macc = 0.0, m2acc = 0.0;
                    for (int b = 0; b < bins; ++b) {
                        gacc += gdiff[b];
                        macc += mdiff[b];
                        m2acc += m2diff[b];
                        strength[b] = gacc;
                        mag_mass[b] = macc;
                        mag_sq[b] = m2acc;
                    }

                    // A qualifying branch is a local maximum above the null
                    // mean that is individually meaningful and anchored at
                    // p; the junction significance is governed by its
                    // weakest branch, so branches that cannot pass on their
                    // own only poison it.
                    std::vector<int> maxima;
                    for (int b : circular_local_maxima(strength))
                        if (strength[b] > null_c * mag_mass[b] &&
                            n_tests * branch_tail_bound(strength[b], mag_mass[b], mag_sq[b]) <=
                                params.epsilon &&
                            branch_anchored(x, y, b * step, grad, params))
                            maxima.push_back(b);
                    if (maxima.size() < 2)
                        continue;
                    maxima = separate_bins(
                        maxima, strength, step,
                        std::max(2.0 * params.delta(s), params.min_branch_separation));
                    if (maxima.size() < 2)
                        continue;
                    if (maxima.size() == 2) {
                        const double beta = included_angle(maxima[0] * step, maxima[1] * step);
                        if (beta > kPi - params.straight_edge_tol)
                            continue;  // straight edge, not a junction
                    }

                    double worst = 0.0;
                    Candidate cand;
                    cand.junction.x = x;
                    cand.junction.y = y;
                    cand.seed_scale = s;
                    for (int b : maxima) {
                        cand.junction.branches.push_back({s, wrap_angle(b * step)});
                        worst = std::max(worst,
                                         branch_tail_bound(strength[b], mag_mass[b], mag_sq[b]));
                    }
                    cand.nfa = n_tests * worst;
                    cand.junction.rho = clamp_unit(cand.nfa);
                    if (cand.nfa <= params.epsilon)
                        local.push_back(std::move(cand));
                }
            }
        }
    }

    std::vector<Candidate> candidates;
    for (auto& tc : thread_candidates)
        candidates.insert(candidates.end(), std::make_move_iterator(tc.begin()),
                          std::make_move_iterator(tc.end()));
    std::sort(candidates.begin(), candidates.end(), candidate_less);

    // Greedy non-max suppression by rho on a coarse grid.
    const double radius = params.effective_nms_radius();
    const double cell = std::max(radius, 1.0);
    const int gw = static_cast<int>(w / cell) + 1;
    const int gh = static_cast<int>(h / cell) + 1;
    std::vector<std::vector<int>> grid(static_cast<std::size_t>(gw) * gh);
    std::vector<int> kept_idx;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Junction& j = candidates[i].junction;
        const int cx = static_cast<int>(j.x / cell);
        const int cy = static_cast<int>(j.y / cell);
        bool suppressed = false;
        for (int ny = std::max(0, cy - 1); ny <= std::min(gh - 1, cy + 1) && !suppressed; ++ny) {
            for (int nx = std::max(0, cx - 1); nx <= std::min(gw - 1, cx + 1) && !suppressed; ++nx) {
                for (int k : grid[static_cast<std::size_t>(ny) * gw + nx]) {
                    const Junction& o = candidates[k].junction;
                    const double dx = j.x - o.x;
                    const double dy = j.y - o.y;
                    if (dx * dx + dy * dy <= radius * radius) {
                        suppressed = true;
                        break;
                    }
                }
            }
        }
        if (!suppressed) {
            grid[static_cast<std::size_t>(cy) * gw + cx].push_back(static_cast<int>(i));
            kept_idx.push_back(static_cast<int>(i));
        }
    }

    std::vector<Junction> result(kept_idx.size());
    std::vector<double> nfas(kept_idx.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < kept_idx.size(); ++i)
        result[i] = refine_with_nfa(candidates[kept_idx[i]].junction, grad, params, n_tests,
                                    &nfas[i]);

    std::vector<Junction> final_set;
    for (std::size_t i = 0; i < result.size(); ++i)
        if (result[i].branches.size() >= 2 && nfas[i] <= params.epsilon &&
            !is_straight_edge_pair(result[i], params))
            final_set.push_back(std::move(result[i]));
    return final_set;
}

void save_junctions_csv(const std::vector<Junction>& js, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path);
    out << "x,y,rho,m,s1,theta1,s2,theta2,...\n";
    out.precision(17);
    for (const Junction& j : js) {
        out << j.x << ',' << j.y << ',' << j.rho << ',' << j.branches.size();
        for (const Branch& b : j.branches)
            out << ',' << b.scale << ',' << b.theta;
        out << '\n';
    }
    if (!out)
        throw IoError("write failed: " + path);
}

}  // namespace gbi
