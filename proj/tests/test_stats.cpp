#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bitmix/errors.hpp"
#include "bitmix/stats.hpp"
#include "helpers.hpp"

using namespace bitmix;
using namespace testutil;

namespace {

std::vector<StegoPair> uniform_pool(std::size_t count, int size, double rate,
                                    std::uint64_t seed) {
    std::vector<StegoPair> pool;
    Rng cover_rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        EmbedSpec spec;
        spec.change_rate = rate;
        spec.seed = seed + 1000 * i + 1;
        pool.push_back(embed_uniform(random_image(cover_rng, size, size), spec));
    }
    return pool;
}

// independent trapezoidal ROC integration over all distinct thresholds
double trapezoid_auc(const std::vector<ScoredSample>& samples) {
    std::vector<ScoredSample> sorted = samples;
    std::sort(sorted.begin(), sorted.end(),
              [](const ScoredSample& a, const ScoredSample& b) { return a.score > b.score; });
    double n_stego = 0.0, n_cover = 0.0;
    for (const auto& s : sorted) (s.is_stego ? n_stego : n_cover) += 1.0;

    double area = 0.0, tp = 0.0, fp = 0.0, prev_tpr = 0.0, prev_fpr = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j].score == sorted[i].score) {
            (sorted[j].is_stego ? tp : fp) += 1.0;
            ++j;
        }
        const double tpr = tp / n_stego, fpr = fp / n_cover;
        area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
        prev_tpr = tpr;
        prev_fpr = fpr;
        i = j;
    }
    return area;
}

double mass_below(const Histogram& h, double threshold) {
    double mass = 0.0;
    for (std::size_t i = 0; i < h.bins(); ++i)
        if (h.bin_edges[i + 1] <= threshold + 1e-12) mass += static_cast<double>(h.counts[i]);
    return mass / static_cast<double>(h.total);
}

}  // namespace

TEST_CASE("lambda_distribution stays below gamma plus binomial slack") {
    const auto pool = uniform_pool(8, 128, 0.08, 1);
    const Histogram h = lambda_distribution(pool, 0.25, 10000, 50, 99);
    CHECK(h.total == 10000);
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::uint64_t{0}) == 10000);

    std::uint64_t above = 0;
    for (std::size_t i = 0; i < h.bins(); ++i)
        if (h.bin_edges[i] >= 0.3) above += h.counts[i];
    CHECK(above <= 10);  // P(lambda > 0.3) < 1e-3
}

TEST_CASE("lambda mass concentrates near zero as gamma shrinks") {
    const auto pool = uniform_pool(8, 128, 0.0627, 2);
    double prev = -1.0;
    for (const double gamma : {1.0, 0.75, 0.5, 0.25}) {
        const Histogram h = lambda_distribution(pool, gamma, 4000, 50, 7);
        const double below = mass_below(h, 0.1);
        CHECK(below > prev);
        prev = below;
    }
}

TEST_CASE("a single clustered modification yields an all-or-nothing lambda") {
    // every modified pixel sits at one corner cell
    GrayImage cover(16, 16, static_cast<std::uint8_t>(100));
    GrayImage stego = cover;
    stego.at(0, 0) = 101;
    const std::vector<StegoPair> pool{StegoPair(cover, stego)};

    const Histogram h = lambda_distribution(pool, 0.3, 2000, 10, 3);
    CHECK(h.counts.front() + h.counts.back() == h.total);  // lambda in {0, 1}
    CHECK(h.counts.front() > 0);
}

TEST_CASE("heatmap of one pair and one draw equals its out-of-box mask") {
    Rng rng(4);
    const StegoPair pair = planted_pair(rng, 12, 12, 14);
    const std::vector<StegoPair> pool{pair};
    const std::uint64_t seed = 21;
    const Heatmap map = modified_pixel_heatmap(pool, 1.0, 0.0, 1.0, 1, seed);
    CHECK(map.samples_accepted == 1);

    // reproduce the single box draw from the documented stream layout
    Rng box_rng = Rng::substream(seed, streams::kBox, 0);
    const BBox box = sample_bbox(12, 12, 1.0, box_rng);
    const GrayImage mask = diff_mask(pair.cover, pair.stego);
    for (int y = 0; y < 12; ++y)
        for (int x = 0; x < 12; ++x) {
            const double expected = (mask.at(x, y) == 1 && !box.contains(x, y)) ? 1.0 : 0.0;
            CHECK(map.accum[static_cast<std::size_t>(y) * 12 + x] == expected);
        }
}

TEST_CASE("heatmap reports an empty band") {
    const auto pool = uniform_pool(4, 64, 0.05, 5);
    CHECK_THROWS_AS(modified_pixel_heatmap(pool, 0.25, 0.85, 0.95, 200, 8), NoSamplesInBand);
    CHECK_THROWS_AS(modified_pixel_heatmap(pool, 0.25, 0.5, 0.4, 10, 8), OutOfRange);
}

TEST_CASE("p_e on the hand-enumerated cases") {
    const std::vector<ScoredSample> separable{{0.1, false}, {0.2, false}, {0.8, true}, {0.9, true}};
    CHECK(p_e(separable) == 0.0);

    const std::vector<ScoredSample> constant{{0.5, false}, {0.5, true}, {0.5, false}, {0.5, true}};
    CHECK(p_e(constant) == 0.5);

    // exhaustive threshold sweep by hand gives 0.25
    const std::vector<ScoredSample> interleaved{
        {0.1, false}, {0.4, false}, {0.3, true}, {0.9, true}};
    CHECK(p_e(interleaved) == 0.25);

    const std::vector<ScoredSample> one_class{{0.1, false}, {0.2, false}};
    CHECK_THROWS_AS(p_e(one_class), SingleClass);
    CHECK_THROWS_AS(auc(one_class), SingleClass);
}

TEST_CASE("auc on the hand-enumerated cases") {
    const std::vector<ScoredSample> separable{{0.1, false}, {0.2, false}, {0.8, true}, {0.9, true}};
    CHECK(auc(separable) == 1.0);
    const std::vector<ScoredSample> constant{{0.5, false}, {0.5, true}, {0.5, false}, {0.5, true}};
    CHECK(auc(constant) == 0.5);
    const std::vector<ScoredSample> interleaved{
        {0.1, false}, {0.4, false}, {0.3, true}, {0.9, true}};
    CHECK(auc(interleaved) == 0.75);
}

TEST_CASE("auc rank statistic matches trapezoidal integration with ties") {
    Rng rng(6);
    std::vector<ScoredSample> samples;
    for (int i = 0; i < 200; ++i) {
        ScoredSample s;
        // coarse grid forces ties across and within classes
        s.score = static_cast<double>(rng.next_below(40)) / 10.0;
        s.is_stego = rng.next_unit() < (s.score > 2.0 ? 0.7 : 0.3);
        samples.push_back(s);
    }
    CHECK(std::abs(auc(samples) - trapezoid_auc(samples)) < 1e-12);

    // brute-force pairwise count as a second route
    double wins = 0.0, pairs = 0.0;
    for (const auto& a : samples)
        for (const auto& b : samples) {
            if (!a.is_stego || b.is_stego) continue;
            pairs += 1.0;
            if (a.score > b.score)
                wins += 1.0;
            else if (a.score == b.score)
                wins += 0.5;
        }
    CHECK(auc(samples) == doctest::Approx(wins / pairs).epsilon(1e-12));
}

TEST_CASE("rank metrics are invariant under increasing transforms") {
    Rng rng(7);
    std::vector<ScoredSample> samples;
    for (int i = 0; i < 120; ++i)
        samples.push_back({rng.next_unit() * 4.0 - 2.0, rng.next_bool()});
    const double base_pe = p_e(samples);
    const double base_auc = auc(samples);
    CHECK(base_pe <= 0.5);

    std::vector<ScoredSample> transformed = samples;
    for (auto& s : transformed) s.score = std::exp(0.7 * s.score) + 3.0;
    CHECK(p_e(transformed) == base_pe);
    CHECK(auc(transformed) == base_auc);

    std::vector<ScoredSample> flipped = samples;
    for (auto& s : flipped) s.is_stego = !s.is_stego;
    CHECK(auc(flipped) == doctest::Approx(1.0 - base_auc).epsilon(1e-12));
}

TEST_CASE("total variation distance behaves like a metric on histograms") {
    Histogram a;
    a.bin_edges = {0.0, 0.5, 1.0};
    a.counts = {30, 10};
    a.total = 40;
    CHECK(total_variation(a, a) == 0.0);

    Histogram b = a;
    b.counts = {0, 40};
    CHECK(total_variation(a, b) == 0.75);
    CHECK(total_variation(b, a) == 0.75);

    Histogram c = a;
    c.bin_edges = {0.0, 0.25, 1.0};
    CHECK_THROWS_AS(total_variation(a, c), DimensionMismatch);
}

TEST_CASE("ks statistic separates uniform from degenerate samples") {
    Rng rng(8);
    std::vector<double> uniform;
    for (int i = 0; i < 20000; ++i) uniform.push_back(rng.next_unit() * 0.25);
    CHECK(ks_statistic_uniform(uniform, 0.25) < 0.02);

    const std::vector<double> constant(100, 0.2);
    CHECK(ks_statistic_uniform(constant, 0.25) > 0.7);
}

TEST_CASE("border frame statistics split inner and outer mass") {
    Heatmap map;
    map.width = 256;
    map.height = 256;
    map.accum.assign(256 * 256, 0.0);
    map.samples_accepted = 1;
    // thickness 17 makes the outer frame 25% of a 256x256 image
    for (int y = 0; y < 256; ++y)
        for (int x = 0; x < 256; ++x)
            if (x < 17 || y < 17 || x >= 239 || y >= 239)
                map.accum[static_cast<std::size_t>(y) * 256 + x] = 1.0;

    const FrameStats stats = border_frame_stats(map, 0.25);
    CHECK(stats.outer_mean == 1.0);
    CHECK(stats.inner_mean == 0.0);
}
