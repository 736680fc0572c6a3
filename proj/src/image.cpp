#include "bitmix/image.hpp"

#include <stdexcept>
#include <utility>

#include "bitmix/errors.hpp"

namespace bitmix {

GrayImage::GrayImage(int w, int h, std::uint8_t fill)
    : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {
    if (w < 1 || h < 1) throw std::invalid_argument("image dimensions must be >= 1");
}

GrayImage::GrayImage(int w, int h, std::vector<std::uint8_t> data)
    : width(w), height(h), pixels(std::move(data)) {
    if (w < 1 || h < 1) throw std::invalid_argument("image dimensions must be >= 1");
    if (pixels.size() != static_cast<std::size_t>(w) * h)
        throw std::invalid_argument("pixel buffer size does not match dimensions");
}

FloatImage::FloatImage(int w, int h, float fill)
    : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {
    if (w < 1 || h < 1) throw std::invalid_argument("image dimensions must be >= 1");
}

namespace {

struct EK {
    int e;  // horizontal flip applied after rotation
    int k;  // quarter turns, clockwise
};

EK to_ek(D4Transform t) {
    const int v = static_cast<int>(t);
    return {v / 4, v % 4};
}

D4Transform from_ek(int e, int k) {
    return static_cast<D4Transform>(((e & 1) * 4) + ((k % 4 + 4) % 4));
}

}  // namespace

GrayImage apply_d4(const GrayImage& img, D4Transform t) {
    const int w = img.width, h = img.height;
    const bool swaps = (t == D4Transform::Rot90 || t == D4Transform::Rot270 ||
                        t == D4Transform::FlipHRot90 || t == D4Transform::FlipHRot270);
    GrayImage out(swaps ? h : w, swaps ? w : h);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            int sx = 0, sy = 0;
            switch (t) {
                case D4Transform::Identity:    sx = x;         sy = y;         break;
                case D4Transform::Rot90:       sx = y;         sy = h - 1 - x; break;
                case D4Transform::Rot180:      sx = w - 1 - x; sy = h - 1 - y; break;
                case D4Transform::Rot270:      sx = w - 1 - y; sy = x;         break;
                case D4Transform::FlipH:       sx = w - 1 - x; sy = y;         break;
                case D4Transform::FlipHRot90:  sx = y;         sy = x;         break;
                case D4Transform::FlipHRot180: sx = x;         sy = h - 1 - y; break;
                case D4Transform::FlipHRot270: sx = w - 1 - y; sy = h - 1 - x; break;
            }
            out.at(x, y) = img.at(sx, sy);
        }
    }
    return out;
}

D4Transform d4_inverse(D4Transform t) {
    const auto [e, k] = to_ek(t);
    // reflections are involutions; pure rotations invert to the opposite turn
    return e ? t : from_ek(0, 4 - k);
}

D4Transform d4_compose(D4Transform a, D4Transform b) {
    // a after b, using flip * rot_k normal form with rot * flip == flip * rot^-1
    const auto [ea, ka] = to_ek(a);
    const auto [eb, kb] = to_ek(b);
    const int k = eb ? (kb - ka) : (kb + ka);
    return from_ek(ea ^ eb, k);
}

const char* d4_name(D4Transform t) {
    switch (t) {
        case D4Transform::Identity:    return "identity";
        case D4Transform::Rot90:       return "rot90";
        case D4Transform::Rot180:      return "rot180";
        case D4Transform::Rot270:      return "rot270";
        case D4Transform::FlipH:       return "fliph";
        case D4Transform::FlipHRot90:  return "fliph-rot90";
        case D4Transform::FlipHRot180: return "fliph-rot180";
        case D4Transform::FlipHRot270: return "fliph-rot270";
    }
    return "?";
}

static void require_same_shape(const GrayImage& a, const GrayImage& b) {
    if (a.width != b.width || a.height != b.height)
        throw DimensionMismatch("images differ in dimensions");
}

std::uint64_t diff_count(const GrayImage& a, const GrayImage& b) {
    require_same_shape(a, b);
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) n += a.pixels[i] != b.pixels[i];
    return n;
}

GrayImage diff_mask(const GrayImage& a, const GrayImage& b) {
    require_same_shape(a, b);
    GrayImage mask(a.width, a.height);
    for (std::size_t i = 0; i < a.pixels.size(); ++i)
        mask.pixels[i] = a.pixels[i] != b.pixels[i] ? 1 : 0;
    return mask;
}

std::vector<std::uint32_t> diff_positions(const GrayImage& a, const GrayImage& b) {
    require_same_shape(a, b);
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < a.pixels.size(); ++i)
        if (a.pixels[i] != b.pixels[i]) out.push_back(static_cast<std::uint32_t>(i));
    return out;
}

}  // namespace bitmix
