#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bitmix/augment.hpp"
#include "bitmix/stego_sim.hpp"

namespace bitmix {

// Equal-width empirical distribution.
struct Histogram {
    std::vector<double> bin_edges;       // ascending, size = counts.size() + 1
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    std::size_t bins() const { return counts.size(); }
    // count/total per bin; all zeros when total == 0
    std::vector<double> frequencies() const;
};

// Per-pixel accumulation of modification indicators over accepted samples.
struct Heatmap {
    int width = 0;
    int height = 0;
    std::vector<double> accum;
    std::uint64_t samples_accepted = 0;

    // accum / samples_accepted
    std::vector<double> density() const;
};

struct ScoredSample {
    double score = 0.0;  // higher = more stego-like
    bool is_stego = false;
};

// Pools are cycled round-robin: sample i uses pairs[i % pairs.size()].
// Lambda values recorded into `bins` equal-width bins over [0,1].
Histogram lambda_distribution(std::span<const StegoPair> pairs, double gamma,
                              std::uint64_t n_samples, std::size_t bins, std::uint64_t seed);

// Accumulates, for draws whose lambda lands in [band_lo, band_hi], the
// modified pixels that survive in the stego-side mix (those outside the box).
// Throws NoSamplesInBand when no draw lands in the band.
Heatmap modified_pixel_heatmap(std::span<const StegoPair> pairs, double gamma, double band_lo,
                               double band_hi, std::uint64_t n_samples, std::uint64_t seed);

// Minimum over all decision thresholds of (false alarms + missed detections)/2.
double p_e(std::span<const ScoredSample> samples);

// Area under the ROC curve as the exact rank statistic
// P(stego score > cover score) + P(tie)/2.
double auc(std::span<const ScoredSample> samples);

// sup_x |empirical CDF - CDF of Unif(0, hi)|
double ks_statistic_uniform(std::vector<double> values, double hi);

// Total-variation distance between two equal-binning histograms.
double total_variation(const Histogram& a, const Histogram& b);

// Mean density inside/outside the border frame whose area is frame_fraction
// of the image. Used for spatial-concentration reporting.
struct FrameStats {
    double outer_mean = 0.0;
    double inner_mean = 0.0;
};
FrameStats border_frame_stats(const Heatmap& map, double frame_fraction);

}  // namespace bitmix
