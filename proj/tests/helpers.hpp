#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "bitmix/augment.hpp"
#include "bitmix/image.hpp"
#include "bitmix/rng.hpp"
#include "bitmix/stego_sim.hpp"

namespace testutil {

inline bitmix::GrayImage random_image(bitmix::Rng& rng, int w, int h) {
    bitmix::GrayImage img(w, h);
    for (auto& px : img.pixels) px = static_cast<std::uint8_t>(rng.next_below(256));
    return img;
}

// Pair with exactly k planted +-1 changes at distinct positions.
inline bitmix::StegoPair planted_pair(bitmix::Rng& rng, int w, int h, int k) {
    const bitmix::GrayImage cover = random_image(rng, w, h);
    bitmix::GrayImage stego = cover;
    std::vector<std::uint32_t> idx(cover.pixels.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = idx.size(); i > 1; --i)
        std::swap(idx[i - 1], idx[rng.next_below(i)]);
    for (int i = 0; i < k; ++i) {
        auto& px = stego.pixels[idx[i]];
        if (px == 0)
            px = 1;
        else if (px == 255)
            px = 254;
        else
            px = rng.next_bool() ? px + 1 : px - 1;
    }
    return bitmix::StegoPair(cover, stego);
}

// independent of diff_count's implementation
inline std::uint64_t naive_diff_count(const bitmix::GrayImage& a, const bitmix::GrayImage& b) {
    std::uint64_t n = 0;
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x)
            if (a.at(x, y) != b.at(x, y)) ++n;
    return n;
}

// nested-loop in-box / total ratio, the oracle for bitmix's label
inline double naive_lambda(const bitmix::StegoPair& pair, const bitmix::BBox& box) {
    std::uint64_t inside = 0, total = 0;
    for (int y = 0; y < pair.cover.height; ++y) {
        for (int x = 0; x < pair.cover.width; ++x) {
            if (pair.cover.at(x, y) != pair.stego.at(x, y)) {
                ++total;
                if (x >= box.x && x < box.x + box.w && y >= box.y && y < box.y + box.h) ++inside;
            }
        }
    }
    return static_cast<double>(inside) / static_cast<double>(total);
}

inline std::vector<std::uint8_t> sorted_pixels(const bitmix::GrayImage& img) {
    auto out = img.pixels;
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<std::uint8_t> to_bytes(const std::string& s) {
    return std::vector<std::uint8_t>(s.begin(), s.end());
}

}  // namespace testutil
