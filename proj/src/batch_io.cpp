#include "bitmix/batch_io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "bitmix/errors.hpp"

static_assert(std::endian::native == std::endian::little ||
              std::endian::native == std::endian::big);

namespace bitmix {

namespace {

class Writer {
public:
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u16le(std::uint16_t v) {
        u8(static_cast<std::uint8_t>(v & 0xFF));
        u8(static_cast<std::uint8_t>(v >> 8));
    }
    void u32le(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
    }
    void f32le(float v) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, 4);
        u32le(bits);
    }
    void raw(const std::uint8_t* data, std::size_t n) { bytes_.insert(bytes_.end(), data, data + n); }

    std::vector<std::uint8_t> take() { return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
};

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& bytes) : data_(bytes) {}

    std::uint8_t u8() {
        need(1);
        return data_[pos_++];
    }
    std::uint16_t u16le() {
        need(2);
        const std::uint16_t v = static_cast<std::uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }
    std::uint32_t u32le() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }
    float f32le() {
        const std::uint32_t bits = u32le();
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
    void raw(std::uint8_t* out, std::size_t n) {
        need(n);
        std::memcpy(out, data_.data() + pos_, n);
        pos_ += n;
    }
    bool exhausted() const { return pos_ == data_.size(); }

private:
    void need(std::size_t n) const {
        if (data_.size() - pos_ < n) throw Truncated("container ends mid-field");
    }
    const std::vector<std::uint8_t>& data_;
    std::size_t pos_ = 0;
};

constexpr char kMagic[4] = {'B', 'M', 'I', 'X'};

}  // namespace

std::vector<std::uint8_t> write_batch(const AugmentedBatch& batch) {
    const std::size_t n_items = batch.item_count();
    const std::size_t n_pairs = batch.pair_count();
    if (n_pairs == 0 || n_items != 2 * n_pairs) throw EmptyBatch("batch is empty or misaligned");
    if (batch.labels.size() != n_items) throw MalformedContainer("label count mismatch");

    const bool floats = batch.pixel_kind == PixelKind::Float32;
    if (floats ? !batch.items_u8.empty() : !batch.items_f32.empty())
        throw MixedPixelKinds("batch carries both 8-bit and float rasters");

    int w = 0, h = 0;
    const auto check_dims = [&](int iw, int ih) {
        if (w == 0) {
            w = iw;
            h = ih;
        } else if (iw != w || ih != h) {
            throw MixedDimensions("container requires one width/height for all items");
        }
    };
    if (floats)
        for (const auto& img : batch.items_f32) check_dims(img.width, img.height);
    else
        for (const auto& img : batch.items_u8) check_dims(img.width, img.height);

    Writer out;
    out.raw(reinterpret_cast<const std::uint8_t*>(kMagic), 4);
    out.u16le(kBatchFormatVersion);
    out.u16le(floats ? 1 : 0);
    out.u32le(static_cast<std::uint32_t>(n_items));
    out.u32le(static_cast<std::uint32_t>(w));
    out.u32le(static_cast<std::uint32_t>(h));

    if (floats) {
        for (const auto& img : batch.items_f32)
            for (const float px : img.pixels) out.f32le(px);
    } else {
        for (const auto& img : batch.items_u8) out.raw(img.pixels.data(), img.pixels.size());
    }
    for (const float label : batch.labels) out.f32le(label);
    for (const auto& prov : batch.provenance) {
        out.u8(static_cast<std::uint8_t>(prov.transform));
        out.u8(static_cast<std::uint8_t>(prov.method));
        out.u32le(static_cast<std::uint32_t>(prov.box.x));
        out.u32le(static_cast<std::uint32_t>(prov.box.y));
        out.u32le(static_cast<std::uint32_t>(prov.box.w));
        out.u32le(static_cast<std::uint32_t>(prov.box.h));
        out.f32le(prov.lambda);
    }
    return out.take();
}

AugmentedBatch read_batch(const std::vector<std::uint8_t>& bytes) {
    Reader in(bytes);
    char magic[4];
    in.raw(reinterpret_cast<std::uint8_t*>(magic), 4);
    if (std::memcmp(magic, kMagic, 4) != 0) throw BadMagic("not a BMIX container");
    const std::uint16_t version = in.u16le();
    if (version != kBatchFormatVersion)
        throw UnsupportedVersion("container version " + std::to_string(version));
    const std::uint16_t flags = in.u16le();
    if (flags > 1) throw MalformedContainer("unknown flag bits set");
    const std::uint32_t n_items = in.u32le();
    const std::uint32_t w = in.u32le();
    const std::uint32_t h = in.u32le();
    if (n_items == 0 || n_items % 2 != 0) throw MalformedContainer("image count must be even");
    if (w == 0 || h == 0) throw MalformedContainer("zero dimensions");

    AugmentedBatch batch;
    batch.pixel_kind = (flags & 1) ? PixelKind::Float32 : PixelKind::Integer8;
    const std::size_t px = static_cast<std::size_t>(w) * h;

    if (batch.pixel_kind == PixelKind::Float32) {
        batch.items_f32.resize(n_items);
        for (auto& img : batch.items_f32) {
            img = FloatImage(static_cast<int>(w), static_cast<int>(h));
            for (std::size_t i = 0; i < px; ++i) img.pixels[i] = in.f32le();
        }
    } else {
        batch.items_u8.resize(n_items);
        for (auto& img : batch.items_u8) {
            img = GrayImage(static_cast<int>(w), static_cast<int>(h));
            in.raw(img.pixels.data(), px);
        }
    }

    batch.labels.resize(n_items);
    for (auto& label : batch.labels) {
        label = in.f32le();
        if (!(label >= 0.0f && label <= 1.0f))
            throw LabelOutOfRange("label outside [0,1]");
    }

    batch.provenance.resize(n_items / 2);
    for (auto& prov : batch.provenance) {
        const std::uint8_t d4 = in.u8();
        const std::uint8_t method = in.u8();
        if (d4 >= kD4Count) throw MalformedContainer("invalid transform code");
        if (method > static_cast<std::uint8_t>(MixMethod::MixUp))
            throw MalformedContainer("invalid method code");
        prov.transform = static_cast<D4Transform>(d4);
        prov.method = static_cast<MixMethod>(method);
        prov.box.x = static_cast<int>(in.u32le());
        prov.box.y = static_cast<int>(in.u32le());
        prov.box.w = static_cast<int>(in.u32le());
        prov.box.h = static_cast<int>(in.u32le());
        prov.lambda = in.f32le();
    }
    if (!in.exhausted()) throw MalformedContainer("trailing bytes after provenance block");
    return batch;
}

std::size_t write_batch_file(const AugmentedBatch& batch, const std::filesystem::path& path) {
    const auto bytes = write_batch(batch);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("short write to " + path.string());
    return bytes.size();
}

AugmentedBatch read_batch_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return read_batch(bytes);
}

namespace {

std::string g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

std::string write_csv_histogram(const Histogram& h) {
    std::string out = "bin_lo,bin_hi,count,frequency\n";
    const auto freq = h.frequencies();
    for (std::size_t i = 0; i < h.bins(); ++i) {
        out += g9(h.bin_edges[i]) + "," + g9(h.bin_edges[i + 1]) + "," +
               std::to_string(h.counts[i]) + "," + g9(freq[i]) + "\n";
    }
    return out;
}

std::string write_csv_scores(const MetricsSummary& summary) {
    std::string out = "metric,value\n";
    out += "p_e," + g9(summary.p_e) + "\n";
    out += "auc," + g9(summary.auc) + "\n";
    out += "n_cover," + std::to_string(summary.n_cover) + "\n";
    out += "n_stego," + std::to_string(summary.n_stego) + "\n";
    return out;
}

std::string write_csv_heatmap(const Heatmap& map) {
    std::string out = "x,y,density\n";
    const auto dens = map.density();
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x)
            out += std::to_string(x) + "," + std::to_string(y) + "," +
                   g9(dens[static_cast<std::size_t>(y) * map.width + x]) + "\n";
    return out;
}

GrayImage heatmap_to_pgm(const Heatmap& map) {
    const auto dens = map.density();
    double peak = 0.0;
    for (const double v : dens) peak = std::max(peak, v);
    GrayImage img(map.width, map.height);
    if (peak > 0.0)
        for (std::size_t i = 0; i < dens.size(); ++i)
            img.pixels[i] = static_cast<std::uint8_t>(std::lround(dens[i] / peak * 255.0));
    return img;
}

std::vector<ScoredSample> read_csv_scores(const std::string& text) {
    std::vector<ScoredSample> out;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line == "score,truth") continue;  // header optional
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) throw Error("scores row lacks a comma: " + line);
        ScoredSample s;
        try {
            std::size_t used = 0;
            s.score = std::stod(line.substr(0, comma), &used);
            if (used != comma) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw Error("bad score value: " + line);
        }
        const std::string truth = line.substr(comma + 1);
        if (truth == "stego")
            s.is_stego = true;
        else if (truth == "cover")
            s.is_stego = false;
        else
            throw Error("truth must be 'cover' or 'stego', got '" + truth + "'");
        if (!std::isfinite(s.score)) throw Error("score must be finite");
        out.push_back(s);
    }
    return out;
}

}  // namespace bitmix
