#include "bitmix/stego_sim.hpp"

#include <cmath>
#include <utility>

#include "bitmix/errors.hpp"
#include "bitmix/rng.hpp"

namespace bitmix {

StegoPair::StegoPair(GrayImage c, GrayImage s) : cover(std::move(c)), stego(std::move(s)) {
    if (cover.width != stego.width || cover.height != stego.height)
        throw DimensionMismatch("cover and stego differ in dimensions");
    if (cover.pixels == stego.pixels)
        throw ZeroDenominator("stego is identical to its cover");
}

namespace {

constexpr double kLog2_3 = 1.5849625007211562;

double ternary_entropy(double r) {
    return -r * std::log2(r / 2.0) - (1.0 - r) * std::log2(1.0 - r);
}

// +-1 with equal probability, forced inward at the intensity bounds so the
// planned change always lands.
std::uint8_t nudge(std::uint8_t v, Rng& rng) {
    if (v == 0) return 1;
    if (v == 255) return 254;
    return rng.next_bool() ? v + 1 : v - 1;
}

}  // namespace

double bpp_to_change_rate(double alpha) {
    if (!(alpha > 0.0) || !(alpha < kLog2_3))
        throw OutOfRange("payload must lie in (0, log2 3) bits per pixel");
    double lo = 0.0, hi = 2.0 / 3.0;
    // ternary_entropy is strictly increasing on (0, 2/3)
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (ternary_entropy(mid) < alpha)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15) break;
    }
    return 0.5 * (lo + hi);
}

StegoPair embed_uniform(const GrayImage& cover, const EmbedSpec& spec) {
    if (!(spec.change_rate > 0.0) || !(spec.change_rate < 1.0))
        throw OutOfRange("change_rate must lie in (0,1)");
    Rng rng = Rng::substream(spec.seed, streams::kEmbed, 0);
    GrayImage stego = cover;
    std::uint64_t changed = 0;
    for (auto& px : stego.pixels) {
        if (rng.next_unit() < spec.change_rate) {
            px = nudge(px, rng);
            ++changed;
        }
    }
    if (changed == 0) throw DegenerateOutput("no pixel was modified; re-seed and retry");
    return StegoPair(cover, std::move(stego));
}

StegoPair embed_adaptive(const GrayImage& cover, const EmbedSpec& spec) {
    if (!(spec.change_rate > 0.0) || !(spec.change_rate < 1.0))
        throw OutOfRange("change_rate must lie in (0,1)");
    if (spec.adaptive_window < 3 || spec.adaptive_window % 2 == 0)
        throw OutOfRange("adaptive_window must be odd and >= 3");

    const int w = cover.width, h = cover.height, half = spec.adaptive_window / 2;
    const auto mirror = [](int i, int n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
        return i;
    };

    // local variance map
    std::vector<double> weight(cover.size());
    double total_weight = 0.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double sum = 0.0, sum2 = 0.0;
            for (int dy = -half; dy <= half; ++dy) {
                for (int dx = -half; dx <= half; ++dx) {
                    const double v = cover.at(mirror(x + dx, w), mirror(y + dy, h));
                    sum += v;
                    sum2 += v * v;
                }
            }
            const double n = static_cast<double>(spec.adaptive_window) * spec.adaptive_window;
            const double var = std::max(0.0, sum2 / n - (sum / n) * (sum / n));
            weight[static_cast<std::size_t>(y) * w + x] = var;
            total_weight += var;
        }
    }
    if (total_weight <= 0.0) throw FlatImage("cover has zero variance everywhere");

    const double scale = spec.change_rate * static_cast<double>(cover.size()) / total_weight;

    Rng rng = Rng::substream(spec.seed, streams::kEmbed, 0);
    GrayImage stego = cover;
    std::uint64_t changed = 0;
    for (std::size_t i = 0; i < stego.pixels.size(); ++i) {
        const double p = std::min(1.0, weight[i] * scale);
        if (rng.next_unit() < p) {
            stego.pixels[i] = nudge(stego.pixels[i], rng);
            ++changed;
        }
    }
    if (changed == 0) throw DegenerateOutput("no pixel was modified; re-seed and retry");
    return StegoPair(cover, std::move(stego));
}

StegoPair embed(const GrayImage& cover, const EmbedSpec& spec) {
    return spec.mode == EmbedMode::Uniform ? embed_uniform(cover, spec)
                                           : embed_adaptive(cover, spec);
}

}  // namespace bitmix
