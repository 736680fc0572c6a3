#pragma once

#include <cstdint>

#include "bitmix/image.hpp"

namespace bitmix {

enum class EmbedMode : std::uint8_t { Uniform, Adaptive };

// Plan for a simulated +-1 embedding. change_rate is the expected fraction of
// pixels modified; Adaptive mode steers changes toward high local-variance
// regions the way content-adaptive embedders do.
struct EmbedSpec {
    double change_rate = 0.05;
    EmbedMode mode = EmbedMode::Uniform;
    int adaptive_window = 5;  // odd, >= 3
    std::uint64_t seed = 0;
};

// Cover image plus its embedded counterpart. Same dimensions, at least one
// differing pixel; simulator output differs only by +-1 per changed pixel.
struct StegoPair {
    GrayImage cover;
    GrayImage stego;

    StegoPair() = default;
    StegoPair(GrayImage c, GrayImage s);

    bool operator==(const StegoPair&) const = default;
};

// Change rate whose ternary entropy equals the payload in bits per pixel:
// solves -r*log2(r/2) - (1-r)*log2(1-r) = alpha for r in (0, 2/3) to 1e-9.
// Throws OutOfRange unless 0 < alpha < log2(3).
double bpp_to_change_rate(double alpha);

// Each pixel changes independently with probability spec.change_rate, +-1
// with equal probability (forced inward at 0 and 255). Deterministic given
// spec.seed. Throws DegenerateOutput if no pixel changed.
StegoPair embed_uniform(const GrayImage& cover, const EmbedSpec& spec);

// Change probability proportional to local intensity variance over
// spec.adaptive_window (mirrored borders), normalized so the expected change
// count is change_rate * W * H, clipped to [0,1]. Throws FlatImage when the
// cover has zero variance everywhere.
StegoPair embed_adaptive(const GrayImage& cover, const EmbedSpec& spec);

StegoPair embed(const GrayImage& cover, const EmbedSpec& spec);

}  // namespace bitmix
