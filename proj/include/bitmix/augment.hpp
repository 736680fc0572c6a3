#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bitmix/image.hpp"
#include "bitmix/rng.hpp"
#include "bitmix/stego_sim.hpp"

namespace bitmix {

// Integer swap rectangle. Width or height of 0 is a legitimate empty box.
struct BBox {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    bool empty() const { return w == 0 || h == 0; }
    std::int64_t area() const { return static_cast<std::int64_t>(w) * h; }
    bool contains(int px, int py) const {
        return px >= x && px < x + w && py >= y && py < y + h;
    }
    bool fits(int img_w, int img_h) const {
        return x >= 0 && y >= 0 && w >= 0 && h >= 0 && x + w <= img_w && y + h <= img_h;
    }

    bool operator==(const BBox&) const = default;
};

enum class MixMethod : std::uint8_t { None = 0, BitMix = 1, CutMix = 2, MixUp = 3 };

enum class PixelKind : std::uint8_t { Integer8 = 0, Float32 = 1 };

struct MixConfig {
    double gamma = 0.25;           // maximum mix ratio, in (0, 1]
    MixMethod method = MixMethod::BitMix;
    double apply_fraction = 0.5;   // share of pairs augmented per batch
    std::uint64_t seed = 0;
    bool invert_labels = false;    // flip the cover=1/stego=0 convention
    double mixup_max = 0.0;        // upper bound for the MixUp coefficient; 0 means gamma
};

// One augmented cover/stego pair. image_cs carries the cover-side result,
// image_sc the stego-side; the float images are populated only for MixUp.
struct MixedPair {
    GrayImage image_cs;
    GrayImage image_sc;
    FloatImage image_cs_f32;
    FloatImage image_sc_f32;
    PixelKind pixel_kind = PixelKind::Integer8;
    double label_cs = 0.0;
    double label_sc = 1.0;
    double lambda = 0.0;
    BBox box;
};

struct PairProvenance {
    D4Transform transform = D4Transform::Identity;
    MixMethod method = MixMethod::None;
    BBox box;
    float lambda = 0.0f;

    bool operator==(const PairProvenance&) const = default;
};

// 2N rasters with pair i at slots (i, N+i): cover-side first, stego-side
// second. Labels are per item; provenance is per pair.
struct AugmentedBatch {
    PixelKind pixel_kind = PixelKind::Integer8;
    std::vector<GrayImage> items_u8;
    std::vector<FloatImage> items_f32;
    std::vector<float> labels;
    std::vector<PairProvenance> provenance;

    std::size_t pair_count() const { return provenance.size(); }
    std::size_t item_count() const {
        return pixel_kind == PixelKind::Integer8 ? items_u8.size() : items_f32.size();
    }

    bool operator==(const AugmentedBatch&) const = default;
};

// Swap rectangle drawn per the mix-ratio rule: gamma' ~ Unif(0, gamma),
// side lengths W*sqrt(gamma') and H*sqrt(gamma') rounded to nearest, corner
// uniform over valid placements. Requires 0 < gamma <= 1.
BBox sample_bbox(int width, int height, double gamma, Rng& rng);

// Same placement rule with the area ratio fixed instead of drawn.
BBox bbox_for_ratio(int width, int height, double ratio, Rng& rng);

// Patch swap with embedding-adaptive labels: lambda is the fraction of the
// pair's modified pixels that fall inside the box, label_cs = lambda.
MixedPair bitmix_pair(const StegoPair& pair, const BBox& box);

// Area-proportional labels for the same patch swap.
struct LabelPair {
    double cs;
    double sc;
};
LabelPair cutmix_labels(const BBox& box, int width, int height);

// Patch swap with area-proportional labels (images identical to bitmix_pair).
MixedPair cutmix_pair(const StegoPair& pair, const BBox& box);

// Convex interpolation of the pair in float32; no quantization.
MixedPair mixup_pair(const StegoPair& pair, double mix_coefficient);

// Fraction of the pair's modified pixels inside the box (the bitmix label).
double bitmix_lambda(const StegoPair& pair, const BBox& box);

// Box mapped through the same coordinate permutation as apply_d4.
BBox transform_bbox(const BBox& box, D4Transform t, int width, int height);

// One jointly sampled rotation/flip per pair, then the leading
// floor(apply_fraction*N) pairs augmented with config.method; the rest keep
// hard labels (cover 1, stego 0). Deterministic given config.seed.
AugmentedBatch assemble_batch(std::span<const StegoPair> pairs, const MixConfig& config);

}  // namespace bitmix
