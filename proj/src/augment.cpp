#include "bitmix/augment.hpp"

#include <algorithm>
#include <cmath>

#include "bitmix/errors.hpp"

namespace bitmix {

namespace {

void require_box_fits(const BBox& box, int w, int h) {
    if (!box.fits(w, h)) throw BoxOutOfBounds("box does not fit inside the image");
}

// in-box / total modified-pixel counts in one pass
struct DiffSplit {
    std::uint64_t inside = 0;
    std::uint64_t total = 0;
};

DiffSplit split_diffs(const StegoPair& pair, const BBox& box) {
    DiffSplit out;
    const auto& c = pair.cover.pixels;
    const auto& s = pair.stego.pixels;
    const int w = pair.cover.width;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] != s[i]) {
            ++out.total;
            const int x = static_cast<int>(i) % w;
            const int y = static_cast<int>(i) / w;
            out.inside += box.contains(x, y) ? 1 : 0;
        }
    }
    return out;
}

void swap_patch(GrayImage& a, GrayImage& b, const BBox& box) {
    if (box.empty()) return;
    for (int y = box.y; y < box.y + box.h; ++y) {
        auto* ra = &a.at(box.x, y);
        auto* rb = &b.at(box.x, y);
        std::swap_ranges(ra, ra + box.w, rb);
    }
}

}  // namespace

BBox bbox_for_ratio(int width, int height, double ratio, Rng& rng) {
    if (!(ratio >= 0.0) || !(ratio <= 1.0)) throw OutOfRange("ratio must lie in [0, 1]");
    if (width < 1 || height < 1) throw OutOfRange("dimensions must be >= 1");
    const double side = std::sqrt(ratio);
    const int w = static_cast<int>(std::lround(width * side));
    const int h = static_cast<int>(std::lround(height * side));
    const int x = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(width - w) + 1));
    const int y = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(height - h) + 1));
    return BBox{x, y, w, h};
}

BBox sample_bbox(int width, int height, double gamma, Rng& rng) {
    if (!(gamma > 0.0) || !(gamma <= 1.0)) throw OutOfRange("gamma must lie in (0, 1]");
    const double ratio = rng.next_unit() * gamma;
    return bbox_for_ratio(width, height, ratio, rng);
}

double bitmix_lambda(const StegoPair& pair, const BBox& box) {
    require_box_fits(box, pair.cover.width, pair.cover.height);
    const DiffSplit d = split_diffs(pair, box);
    if (d.total == 0) throw ZeroDenominator("pair has no modified pixels");
    return static_cast<double>(d.inside) / static_cast<double>(d.total);
}

MixedPair bitmix_pair(const StegoPair& pair, const BBox& box) {
    const double lambda = bitmix_lambda(pair, box);
    MixedPair out;
    out.image_cs = pair.cover;
    out.image_sc = pair.stego;
    swap_patch(out.image_cs, out.image_sc, box);
    out.pixel_kind = PixelKind::Integer8;
    out.lambda = lambda;
    out.label_cs = lambda;
    out.label_sc = 1.0 - lambda;
    out.box = box;
    return out;
}

LabelPair cutmix_labels(const BBox& box, int width, int height) {
    require_box_fits(box, width, height);
    const double cs = static_cast<double>(box.area()) /
                      (static_cast<double>(width) * static_cast<double>(height));
    return LabelPair{cs, 1.0 - cs};
}

MixedPair cutmix_pair(const StegoPair& pair, const BBox& box) {
    const LabelPair labels = cutmix_labels(box, pair.cover.width, pair.cover.height);
    MixedPair out;
    out.image_cs = pair.cover;
    out.image_sc = pair.stego;
    swap_patch(out.image_cs, out.image_sc, box);
    out.pixel_kind = PixelKind::Integer8;
    out.lambda = labels.cs;
    out.label_cs = labels.cs;
    out.label_sc = labels.sc;
    out.box = box;
    return out;
}

MixedPair mixup_pair(const StegoPair& pair, double mix_coefficient) {
    if (!(mix_coefficient >= 0.0) || !(mix_coefficient <= 1.0))
        throw OutOfRange("mix coefficient must lie in [0, 1]");
    const int w = pair.cover.width, h = pair.cover.height;
    MixedPair out;
    out.pixel_kind = PixelKind::Float32;
    out.image_cs_f32 = FloatImage(w, h);
    out.image_sc_f32 = FloatImage(w, h);
    const float m = static_cast<float>(mix_coefficient);
    for (std::size_t i = 0; i < pair.cover.pixels.size(); ++i) {
        const float c = pair.cover.pixels[i];
        const float s = pair.stego.pixels[i];
        out.image_cs_f32.pixels[i] = m * s + (1.0f - m) * c;
        out.image_sc_f32.pixels[i] = m * c + (1.0f - m) * s;
    }
    out.lambda = mix_coefficient;
    out.label_cs = mix_coefficient;
    out.label_sc = 1.0 - mix_coefficient;
    return out;
}

BBox transform_bbox(const BBox& box, D4Transform t, int width, int height) {
    require_box_fits(box, width, height);
    if (box.empty()) return BBox{0, 0, 0, 0};

    const auto forward = [&](int x, int y) -> std::pair<int, int> {
        switch (t) {
            case D4Transform::Identity:    return {x, y};
            case D4Transform::Rot90:       return {height - 1 - y, x};
            case D4Transform::Rot180:      return {width - 1 - x, height - 1 - y};
            case D4Transform::Rot270:      return {y, width - 1 - x};
            case D4Transform::FlipH:       return {width - 1 - x, y};
            case D4Transform::FlipHRot90:  return {y, x};
            case D4Transform::FlipHRot180: return {x, height - 1 - y};
            case D4Transform::FlipHRot270: return {height - 1 - y, width - 1 - x};
        }
        return {x, y};
    };

    const auto [ax, ay] = forward(box.x, box.y);
    const auto [bx, by] = forward(box.x + box.w - 1, box.y + box.h - 1);
    const int x0 = std::min(ax, bx), y0 = std::min(ay, by);
    const int x1 = std::max(ax, bx), y1 = std::max(ay, by);
    return BBox{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

AugmentedBatch assemble_batch(std::span<const StegoPair> pairs, const MixConfig& config) {
    if (pairs.empty()) throw EmptyBatch("batch needs at least one pair");
    if (!(config.gamma > 0.0) || !(config.gamma <= 1.0))
        throw OutOfRange("gamma must lie in (0, 1]");
    if (!(config.apply_fraction >= 0.0) || !(config.apply_fraction <= 1.0))
        throw OutOfRange("apply_fraction must lie in [0, 1]");

    const std::size_t n = pairs.size();
    const std::size_t n_augment =
        config.method == MixMethod::None
            ? 0
            : static_cast<std::size_t>(config.apply_fraction * static_cast<double>(n));
    const double mixup_max = config.mixup_max > 0.0 ? config.mixup_max : config.gamma;

    AugmentedBatch batch;
    batch.provenance.resize(n);
    const auto flip = [&](double label) { return config.invert_labels ? 1.0 - label : label; };

    struct Slot {
        MixedPair mixed;
        bool augmented = false;
        GrayImage cover, stego;
    };
    std::vector<Slot> slots(n);

    for (std::size_t i = 0; i < n; ++i) {
        Rng transform_rng = Rng::substream(config.seed, streams::kTransform, i);
        const auto t = static_cast<D4Transform>(transform_rng.next_below(kD4Count));

        // one transform per pair, applied jointly so the cover-stego
        // correspondence survives
        Slot& slot = slots[i];
        slot.cover = apply_d4(pairs[i].cover, t);
        slot.stego = apply_d4(pairs[i].stego, t);
        batch.provenance[i].transform = t;

        if (i < n_augment) {
            StegoPair transformed(slot.cover, slot.stego);
            Rng box_rng = Rng::substream(config.seed, streams::kBox, i);
            switch (config.method) {
                case MixMethod::BitMix: {
                    const BBox box = sample_bbox(slot.cover.width, slot.cover.height,
                                                 config.gamma, box_rng);
                    slot.mixed = bitmix_pair(transformed, box);
                    break;
                }
                case MixMethod::CutMix: {
                    const BBox box = sample_bbox(slot.cover.width, slot.cover.height,
                                                 config.gamma, box_rng);
                    slot.mixed = cutmix_pair(transformed, box);
                    break;
                }
                case MixMethod::MixUp: {
                    slot.mixed = mixup_pair(transformed, box_rng.next_unit() * mixup_max);
                    break;
                }
                case MixMethod::None:
                    break;
            }
            slot.augmented = true;
            batch.provenance[i].method = config.method;
            batch.provenance[i].box = slot.mixed.box;
            batch.provenance[i].lambda = static_cast<float>(slot.mixed.lambda);
        }
    }

    // A MixUp batch is float32 throughout; unaugmented pairs are promoted
    // losslessly so the container stays homogeneous.
    const bool as_float = config.method == MixMethod::MixUp && n_augment > 0;
    batch.pixel_kind = as_float ? PixelKind::Float32 : PixelKind::Integer8;

    const auto promote = [](const GrayImage& img) {
        FloatImage out(img.width, img.height);
        std::copy(img.pixels.begin(), img.pixels.end(), out.pixels.begin());
        return out;
    };

    batch.labels.resize(2 * n);
    auto& u8 = batch.items_u8;
    auto& f32 = batch.items_f32;
    if (as_float)
        f32.resize(2 * n);
    else
        u8.resize(2 * n);

    for (std::size_t i = 0; i < n; ++i) {
        Slot& slot = slots[i];
        if (slot.augmented) {
            if (as_float) {
                f32[i] = std::move(slot.mixed.image_cs_f32);
                f32[n + i] = std::move(slot.mixed.image_sc_f32);
            } else {
                u8[i] = std::move(slot.mixed.image_cs);
                u8[n + i] = std::move(slot.mixed.image_sc);
            }
            const float cs = static_cast<float>(flip(slot.mixed.label_cs));
            batch.labels[i] = cs;
            batch.labels[n + i] = 1.0f - cs;
        } else {
            if (as_float) {
                f32[i] = promote(slot.cover);
                f32[n + i] = promote(slot.stego);
            } else {
                u8[i] = std::move(slot.cover);
                u8[n + i] = std::move(slot.stego);
            }
            const float cs = static_cast<float>(flip(1.0));
            batch.labels[i] = cs;
            batch.labels[n + i] = 1.0f - cs;
        }
    }
    return batch;
}

}  // namespace bitmix
