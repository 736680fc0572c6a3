#pragma once

#include <cstdint>
#include <vector>

namespace bitmix {

// 8-bit grayscale raster, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0);
    GrayImage(int w, int h, std::vector<std::uint8_t> data);

    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::size_t size() const { return pixels.size(); }

    bool operator==(const GrayImage&) const = default;
};

// Float raster; produced only by interpolating augmentations.
struct FloatImage {
    int width = 0;
    int height = 0;
    std::vector<float> pixels;

    FloatImage() = default;
    FloatImage(int w, int h, float fill = 0.f);

    float at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    float& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }

    bool operator==(const FloatImage&) const = default;
};

// The eight pixel-preserving symmetries: rotations by multiples of 90 degrees
// (clockwise) and their horizontal flips. FlipHRotK applies RotK first, then
// the horizontal mirror.
enum class D4Transform : std::uint8_t {
    Identity = 0,
    Rot90 = 1,
    Rot180 = 2,
    Rot270 = 3,
    FlipH = 4,
    FlipHRot90 = 5,
    FlipHRot180 = 6,
    FlipHRot270 = 7,
};

inline constexpr int kD4Count = 8;

GrayImage apply_d4(const GrayImage& img, D4Transform t);

D4Transform d4_inverse(D4Transform t);
// compose(a, b): the transform equivalent to applying b first, then a.
D4Transform d4_compose(D4Transform a, D4Transform b);
const char* d4_name(D4Transform t);

// Number of positions where a and b differ. Throws DimensionMismatch.
std::uint64_t diff_count(const GrayImage& a, const GrayImage& b);

// 0/1 raster marking differing positions; sums to diff_count(a, b).
GrayImage diff_mask(const GrayImage& a, const GrayImage& b);

// Row-major linear indices of differing positions, ascending.
std::vector<std::uint32_t> diff_positions(const GrayImage& a, const GrayImage& b);

}  // namespace bitmix
