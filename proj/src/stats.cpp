#include "bitmix/stats.hpp"

#include <algorithm>
#include <cmath>

#include "bitmix/errors.hpp"
#include "bitmix/rng.hpp"

namespace bitmix {

std::vector<double> Histogram::frequencies() const {
    std::vector<double> out(counts.size(), 0.0);
    if (total == 0) return out;
    for (std::size_t i = 0; i < counts.size(); ++i)
        out[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    return out;
}

std::vector<double> Heatmap::density() const {
    std::vector<double> out(accum.size(), 0.0);
    if (samples_accepted == 0) return out;
    for (std::size_t i = 0; i < accum.size(); ++i)
        out[i] = accum[i] / static_cast<double>(samples_accepted);
    return out;
}

namespace {

Histogram make_unit_histogram(std::size_t bins) {
    Histogram h;
    h.bin_edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i)
        h.bin_edges[i] = static_cast<double>(i) / static_cast<double>(bins);
    h.counts.assign(bins, 0);
    return h;
}

void record_unit_value(Histogram& h, double v) {
    const std::size_t bins = h.bins();
    auto idx = static_cast<std::size_t>(v * static_cast<double>(bins));
    if (idx >= bins) idx = bins - 1;  // v == 1 lands in the last bin
    ++h.counts[idx];
    ++h.total;
}

// per-pair cache: linear indices of modified pixels
struct PairDiffs {
    const StegoPair* pair;
    std::vector<std::uint32_t> positions;
};

std::vector<PairDiffs> index_pool(std::span<const StegoPair> pairs) {
    std::vector<PairDiffs> out(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        out[i].pair = &pairs[i];
        out[i].positions = diff_positions(pairs[i].cover, pairs[i].stego);
        if (out[i].positions.empty()) throw ZeroDenominator("pool pair has no modified pixels");
    }
    return out;
}

std::uint64_t count_inside(const PairDiffs& d, const BBox& box) {
    const int w = d.pair->cover.width;
    std::uint64_t inside = 0;
    for (const std::uint32_t p : d.positions) {
        const int x = static_cast<int>(p) % w;
        const int y = static_cast<int>(p) / w;
        inside += box.contains(x, y) ? 1 : 0;
    }
    return inside;
}

}  // namespace

Histogram lambda_distribution(std::span<const StegoPair> pairs, double gamma,
                              std::uint64_t n_samples, std::size_t bins, std::uint64_t seed) {
    if (pairs.empty()) throw EmptyBatch("pair pool is empty");
    if (n_samples < 1) throw OutOfRange("n_samples must be >= 1");
    if (bins < 2) throw OutOfRange("bins must be >= 2");

    const auto pool = index_pool(pairs);
    Histogram h = make_unit_histogram(bins);
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        const PairDiffs& d = pool[i % pool.size()];
        Rng rng = Rng::substream(seed, streams::kBox, i);
        const BBox box = sample_bbox(d.pair->cover.width, d.pair->cover.height, gamma, rng);
        const double lambda = static_cast<double>(count_inside(d, box)) /
                              static_cast<double>(d.positions.size());
        record_unit_value(h, lambda);
    }
    return h;
}

Heatmap modified_pixel_heatmap(std::span<const StegoPair> pairs, double gamma, double band_lo,
                               double band_hi, std::uint64_t n_samples, std::uint64_t seed) {
    if (pairs.empty()) throw EmptyBatch("pair pool is empty");
    if (!(band_lo >= 0.0) || !(band_lo < band_hi) || !(band_hi <= 1.0))
        throw OutOfRange("band must satisfy 0 <= lo < hi <= 1");

    const auto pool = index_pool(pairs);
    Heatmap map;
    map.width = pool[0].pair->cover.width;
    map.height = pool[0].pair->cover.height;
    map.accum.assign(static_cast<std::size_t>(map.width) * map.height, 0.0);

    for (std::uint64_t i = 0; i < n_samples; ++i) {
        const PairDiffs& d = pool[i % pool.size()];
        if (d.pair->cover.width != map.width || d.pair->cover.height != map.height)
            throw DimensionMismatch("heatmap pool must share one image size");
        Rng rng = Rng::substream(seed, streams::kBox, i);
        const BBox box = sample_bbox(map.width, map.height, gamma, rng);
        const std::uint64_t inside = count_inside(d, box);
        const double lambda =
            static_cast<double>(inside) / static_cast<double>(d.positions.size());
        if (lambda < band_lo || lambda > band_hi) continue;

        // stego-side mix keeps the cover patch, so the surviving
        // modifications are exactly those outside the box
        for (const std::uint32_t p : d.positions) {
            const int x = static_cast<int>(p) % map.width;
            const int y = static_cast<int>(p) / map.width;
            if (!box.contains(x, y)) map.accum[p] += 1.0;
        }
        ++map.samples_accepted;
    }
    if (map.samples_accepted == 0)
        throw NoSamplesInBand("no draw landed in the lambda band after " +
                              std::to_string(n_samples) + " samples");
    return map;
}

namespace {

struct ClassCounts {
    std::uint64_t covers = 0;
    std::uint64_t stegos = 0;
};

ClassCounts require_both_classes(std::span<const ScoredSample> samples) {
    ClassCounts c;
    for (const auto& s : samples) (s.is_stego ? c.stegos : c.covers) += 1;
    if (c.covers == 0 || c.stegos == 0)
        throw SingleClass("need at least one cover and one stego sample");
    return c;
}

}  // namespace

double p_e(std::span<const ScoredSample> samples) {
    const ClassCounts c = require_both_classes(samples);
    std::vector<ScoredSample> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const ScoredSample& a, const ScoredSample& b) { return a.score < b.score; });

    // Sweep "stego iff score > tau" over tau below the minimum and at every
    // distinct score; this visits every achievable (P_FA, P_MD) operating
    // point including the all-stego and all-cover extremes.
    const double n_cover = static_cast<double>(c.covers);
    const double n_stego = static_cast<double>(c.stegos);

    std::uint64_t covers_below = 0, stegos_below = 0;  // score <= tau
    double best = 1.0;
    const auto consider = [&] {
        const double p_fa = (n_cover - static_cast<double>(covers_below)) / n_cover;
        const double p_md = static_cast<double>(stegos_below) / n_stego;
        best = std::min(best, 0.5 * (p_fa + p_md));
    };

    consider();  // tau = -inf: everything classified stego
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j].score == sorted[i].score) {
            (sorted[j].is_stego ? stegos_below : covers_below) += 1;
            ++j;
        }
        consider();  // tau = the distinct score value
        i = j;
    }
    return best;
}

double auc(std::span<const ScoredSample> samples) {
    const ClassCounts c = require_both_classes(samples);
    std::vector<ScoredSample> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const ScoredSample& a, const ScoredSample& b) { return a.score < b.score; });

    // rank-sum with tie groups: each stego at a tied score beats the covers
    // strictly below it and halves against the covers tied with it
    double wins = 0.0;
    std::uint64_t covers_below = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        std::uint64_t tied_covers = 0, tied_stegos = 0;
        while (j < sorted.size() && sorted[j].score == sorted[i].score) {
            (sorted[j].is_stego ? tied_stegos : tied_covers) += 1;
            ++j;
        }
        wins += static_cast<double>(tied_stegos) *
                (static_cast<double>(covers_below) + 0.5 * static_cast<double>(tied_covers));
        covers_below += tied_covers;
        i = j;
    }
    return wins / (static_cast<double>(c.covers) * static_cast<double>(c.stegos));
}

double ks_statistic_uniform(std::vector<double> values, double hi) {
    if (values.empty()) throw OutOfRange("need at least one value");
    if (!(hi > 0.0)) throw OutOfRange("hi must be positive");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = std::clamp(values[i] / hi, 0.0, 1.0);
        d = std::max(d, std::max((static_cast<double>(i) + 1.0) / n - f,
                                 f - static_cast<double>(i) / n));
    }
    return d;
}

double total_variation(const Histogram& a, const Histogram& b) {
    if (a.bins() != b.bins() || a.bin_edges != b.bin_edges)
        throw DimensionMismatch("histograms must share binning");
    const auto fa = a.frequencies();
    const auto fb = b.frequencies();
    double tv = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) tv += std::abs(fa[i] - fb[i]);
    return 0.5 * tv;
}

FrameStats border_frame_stats(const Heatmap& map, double frame_fraction) {
    if (!(frame_fraction > 0.0) || !(frame_fraction < 1.0))
        throw OutOfRange("frame_fraction must lie in (0, 1)");
    const double w = map.width, h = map.height;
    // uniform thickness t with (W-2t)(H-2t) = (1-f)WH
    const double disc = (w + h) * (w + h) - 4.0 * frame_fraction * w * h;
    int t = static_cast<int>(std::lround(((w + h) - std::sqrt(disc)) / 4.0));
    t = std::clamp(t, 1, static_cast<int>(std::min(w, h) / 2.0));

    const auto dens = map.density();
    double outer_sum = 0.0, inner_sum = 0.0;
    std::uint64_t outer_n = 0, inner_n = 0;
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            const bool outer = x < t || y < t || x >= map.width - t || y >= map.height - t;
            const double v = dens[static_cast<std::size_t>(y) * map.width + x];
            if (outer) {
                outer_sum += v;
                ++outer_n;
            } else {
                inner_sum += v;
                ++inner_n;
            }
        }
    }
    FrameStats out;
    if (outer_n > 0) out.outer_mean = outer_sum / static_cast<double>(outer_n);
    if (inner_n > 0) out.inner_mean = inner_sum / static_cast<double>(inner_n);
    return out;
}

}  // namespace bitmix
