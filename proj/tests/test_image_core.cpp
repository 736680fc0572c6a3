#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bitmix/errors.hpp"
#include "bitmix/image.hpp"
#include "bitmix/pgm.hpp"
#include "helpers.hpp"

using namespace bitmix;
using namespace testutil;

namespace {

constexpr D4Transform kAllD4[] = {
    D4Transform::Identity,    D4Transform::Rot90,       D4Transform::Rot180,
    D4Transform::Rot270,      D4Transform::FlipH,       D4Transform::FlipHRot90,
    D4Transform::FlipHRot180, D4Transform::FlipHRot270,
};

}  // namespace

TEST_CASE("load_pgm parses a minimal file") {
    const std::string header = "P5\n2 2\n255\n";
    auto bytes = to_bytes(header);
    bytes.insert(bytes.end(), {0, 1, 2, 3});
    const GrayImage img = load_pgm(bytes);
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.pixels == std::vector<std::uint8_t>{0, 1, 2, 3});
}

TEST_CASE("load_pgm rejects bad input") {
    CHECK_THROWS_AS(load_pgm(to_bytes("P6\n2 2\n255\n....")), MalformedHeader);
    CHECK_THROWS_AS(load_pgm(to_bytes("P2\n2 2\n255\n0 1 2 3")), MalformedHeader);
    CHECK_THROWS_AS(load_pgm(to_bytes("")), MalformedHeader);
    CHECK_THROWS_AS(load_pgm(to_bytes("P5\n0 2\n255\nxx")), MalformedHeader);
    CHECK_THROWS_AS(load_pgm(to_bytes("P5\n2 2\nabc\n")), MalformedHeader);
    CHECK_THROWS_AS(load_pgm(to_bytes("P5\n2 2\n0\n")), MalformedHeader);
    CHECK_THROWS_AS(load_pgm(to_bytes("P5\n2 2\n65535\n") ), UnsupportedMaxval);
    // three of four raster bytes present
    auto bytes = to_bytes("P5\n2 2\n255\n");
    bytes.insert(bytes.end(), {9, 9, 9});
    CHECK_THROWS_AS(load_pgm(bytes), TruncatedData);
}

TEST_CASE("load_pgm accepts header comments and maxval below 255") {
    auto bytes = to_bytes("P5\n# a comment\n 2 # inline\n2\n200\n");
    bytes.insert(bytes.end(), {10, 20, 30, 200});
    const GrayImage img = load_pgm(bytes);
    CHECK(img.width == 2);
    CHECK(img.pixels[3] == 200);  // no rescaling
}

TEST_CASE("save_pgm emits the canonical header") {
    const GrayImage one(1, 1, std::vector<std::uint8_t>{7});
    auto expected = to_bytes("P5\n1 1\n255\n");
    expected.push_back(7);
    CHECK(save_pgm(one) == expected);

    const GrayImage zeros(256, 256);
    const auto bytes = save_pgm(zeros);
    CHECK(bytes.size() == std::string("P5\n256 256\n255\n").size() + 65536);
    CHECK(std::count(bytes.begin() + 15, bytes.end(), 0) == 65536);
}

TEST_CASE("pgm round trip is exact and canonicalizing") {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const int w = 1 + static_cast<int>(rng.next_below(40));
        const int h = 1 + static_cast<int>(rng.next_below(40));
        const GrayImage img = random_image(rng, w, h);

        // identity through the writer
        CHECK(load_pgm(save_pgm(img)) == img);

        // messy-but-valid header parses to the same canonical bytes
        std::string header = "P5";
        const auto pad = [&] {
            const char* fill[] = {" ", "\n", "\t", "  ", "\n# noise\n", " # c\n"};
            header += fill[rng.next_below(6)];
        };
        pad();
        header += std::to_string(w);
        pad();
        header += std::to_string(h);
        pad();
        header += "255\n";
        auto messy = to_bytes(header);
        messy.insert(messy.end(), img.pixels.begin(), img.pixels.end());
        CHECK(save_pgm(load_pgm(messy)) == save_pgm(img));
    }
}

TEST_CASE("apply_d4 basics") {
    const GrayImage pair_img(2, 1, std::vector<std::uint8_t>{11, 22});
    const GrayImage rotated = apply_d4(pair_img, D4Transform::Rot90);
    CHECK(rotated.width == 1);
    CHECK(rotated.height == 2);
    CHECK(sorted_pixels(rotated) == sorted_pixels(pair_img));

    Rng rng(5);
    const GrayImage img = random_image(rng, 7, 4);
    CHECK(apply_d4(img, D4Transform::Identity) == img);
    for (const auto t : kAllD4) CHECK(sorted_pixels(apply_d4(img, t)) == sorted_pixels(img));
}

TEST_CASE("four quarter turns restore the image") {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const int w = 1 + static_cast<int>(rng.next_below(16));
        const int h = 1 + static_cast<int>(rng.next_below(16));
        const GrayImage img = random_image(rng, w, h);
        GrayImage cur = img;
        for (int i = 0; i < 4; ++i) cur = apply_d4(cur, D4Transform::Rot90);
        CHECK(cur == img);
    }
}

TEST_CASE("d4 compose and inverse agree with pixel-level application") {
    Rng rng(7);
    const GrayImage img = random_image(rng, 5, 3);  // asymmetric, distinct-ish values
    for (const auto a : kAllD4) {
        CHECK(apply_d4(apply_d4(img, a), d4_inverse(a)) == img);
        for (const auto b : kAllD4) {
            const GrayImage two_step = apply_d4(apply_d4(img, b), a);
            CHECK(apply_d4(img, d4_compose(a, b)) == two_step);
        }
    }
}

TEST_CASE("diff_count basics and oracle") {
    Rng rng(31);
    const GrayImage img = random_image(rng, 9, 9);
    CHECK(diff_count(img, img) == 0);

    GrayImage one_off = img;
    one_off.at(3, 4) ^= 1;
    CHECK(diff_count(img, one_off) == 1);
    CHECK(diff_count(one_off, img) == 1);  // symmetric

    for (int trial = 0; trial < 50; ++trial) {
        const int k = static_cast<int>(rng.next_below(200));
        if (k == 0) continue;
        const StegoPair pair = planted_pair(rng, 16, 16, k);
        CHECK(diff_count(pair.cover, pair.stego) == static_cast<std::uint64_t>(k));
        CHECK(diff_count(pair.cover, pair.stego) == naive_diff_count(pair.cover, pair.stego));
    }

    const GrayImage other(4, 5);
    CHECK_THROWS_AS(diff_count(img, other), DimensionMismatch);
    CHECK_THROWS_AS(diff_mask(img, other), DimensionMismatch);
}

TEST_CASE("diff_mask marks exactly the differing positions") {
    Rng rng(32);
    const GrayImage img = random_image(rng, 12, 8);
    const GrayImage zero_mask = diff_mask(img, img);
    CHECK(std::count(zero_mask.pixels.begin(), zero_mask.pixels.end(), 0) ==
          static_cast<long>(zero_mask.size()));

    GrayImage changed = img;
    changed.at(5, 2) ^= 3;
    const GrayImage mask = diff_mask(img, changed);
    CHECK(mask.at(5, 2) == 1);
    CHECK(std::count(mask.pixels.begin(), mask.pixels.end(), 1) == 1);

    for (int trial = 0; trial < 20; ++trial) {
        const StegoPair pair = planted_pair(rng, 10, 10, 1 + static_cast<int>(rng.next_below(40)));
        const GrayImage m = diff_mask(pair.cover, pair.stego);
        std::uint64_t sum = 0;
        for (const auto v : m.pixels) sum += v;
        CHECK(sum == diff_count(pair.cover, pair.stego));
        CHECK(diff_positions(pair.cover, pair.stego).size() == sum);
    }
}

TEST_CASE("diff_count over a region and its complement adds to the total") {
    Rng rng(33);
    for (int trial = 0; trial < 20; ++trial) {
        const StegoPair pair = planted_pair(rng, 14, 11, 25);
        const int split_x = 1 + static_cast<int>(rng.next_below(12));
        std::uint64_t left = 0, right = 0;
        for (int y = 0; y < pair.cover.height; ++y)
            for (int x = 0; x < pair.cover.width; ++x)
                if (pair.cover.at(x, y) != pair.stego.at(x, y)) (x < split_x ? left : right) += 1;
        CHECK(left + right == diff_count(pair.cover, pair.stego));
    }
}
