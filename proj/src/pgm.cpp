#include "bitmix/pgm.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <string>

#include "bitmix/errors.hpp"

namespace bitmix {

namespace {

class Cursor {
public:
    explicit Cursor(const std::vector<std::uint8_t>& bytes) : data_(bytes) {}

    bool eof() const { return pos_ >= data_.size(); }
    std::uint8_t peek() const { return data_[pos_]; }
    std::uint8_t take() { return data_[pos_++]; }
    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return data_.size() - pos_; }

    // Whitespace and '#'-to-end-of-line comments between header tokens.
    void skip_separators() {
        while (!eof()) {
            if (std::isspace(peek())) {
                take();
            } else if (peek() == '#') {
                while (!eof() && take() != '\n') {
                }
            } else {
                break;
            }
        }
    }

    int take_number() {
        skip_separators();
        if (eof() || !std::isdigit(peek())) throw MalformedHeader("expected numeric header field");
        long v = 0;
        while (!eof() && std::isdigit(peek())) {
            v = v * 10 + (take() - '0');
            if (v > 1'000'000'000) throw MalformedHeader("header field out of range");
        }
        return static_cast<int>(v);
    }

private:
    const std::vector<std::uint8_t>& data_;
    std::size_t pos_ = 0;
};

}  // namespace

GrayImage load_pgm(const std::vector<std::uint8_t>& bytes) {
    Cursor cur(bytes);
    if (cur.remaining() < 2 || cur.take() != 'P' || cur.take() != '5')
        throw MalformedHeader("not a binary PGM (magic must be P5)");

    const int width = cur.take_number();
    const int height = cur.take_number();
    const int maxval = cur.take_number();
    if (width < 1 || height < 1) throw MalformedHeader("non-positive dimensions");
    if (maxval < 1) throw MalformedHeader("non-positive maxval");
    if (maxval > 255) throw UnsupportedMaxval("maxval above 255 not supported");

    // Exactly one whitespace byte separates maxval from the raster.
    if (cur.eof() || !std::isspace(cur.peek())) throw MalformedHeader("missing separator before raster");
    cur.take();

    const std::size_t count = static_cast<std::size_t>(width) * height;
    if (cur.remaining() < count) throw TruncatedData("raster shorter than width*height");
    std::vector<std::uint8_t> pixels(bytes.begin() + cur.pos(), bytes.begin() + cur.pos() + count);
    return GrayImage(width, height, std::move(pixels));
}

std::vector<std::uint8_t> save_pgm(const GrayImage& img) {
    char header[64];
    const int n = std::snprintf(header, sizeof(header), "P5\n%d %d\n255\n", img.width, img.height);
    std::vector<std::uint8_t> out(header, header + n);
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

GrayImage load_pgm_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_pgm(bytes);
}

void save_pgm_file(const GrayImage& img, const std::filesystem::path& path) {
    const auto bytes = save_pgm(img);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("short write to " + path.string());
}

}  // namespace bitmix
