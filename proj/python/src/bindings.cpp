#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "bitmix/augment.hpp"
#include "bitmix/batch_io.hpp"
#include "bitmix/errors.hpp"
#include "bitmix/pgm.hpp"
#include "bitmix/rng.hpp"
#include "bitmix/stats.hpp"
#include "bitmix/stego_sim.hpp"

namespace py = pybind11;
using namespace bitmix;

namespace {

GrayImage gray_from_numpy(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw py::value_error("expected a 2-D uint8 array (H, W)");
    const int h = static_cast<int>(arr.shape(0));
    const int w = static_cast<int>(arr.shape(1));
    std::vector<std::uint8_t> pixels(arr.data(), arr.data() + arr.size());
    return GrayImage(w, h, std::move(pixels));
}

py::array_t<std::uint8_t> gray_to_numpy(const GrayImage& img) {
    py::array_t<std::uint8_t> out({img.height, img.width});
    std::copy(img.pixels.begin(), img.pixels.end(), out.mutable_data());
    return out;
}

py::array_t<float> float_to_numpy(const FloatImage& img) {
    py::array_t<float> out({img.height, img.width});
    std::copy(img.pixels.begin(), img.pixels.end(), out.mutable_data());
    return out;
}

py::array batch_images(const AugmentedBatch& batch) {
    const std::size_t n = batch.item_count();
    if (n == 0) throw py::value_error("empty batch");
    if (batch.pixel_kind == PixelKind::Integer8) {
        const auto& first = batch.items_u8.front();
        for (const auto& img : batch.items_u8)
            if (img.width != first.width || img.height != first.height)
                throw MixedDimensions("batch items differ in size; access items individually");
        py::array_t<std::uint8_t> out(
            {n, static_cast<std::size_t>(first.height), static_cast<std::size_t>(first.width)});
        auto* dst = out.mutable_data();
        for (const auto& img : batch.items_u8)
            dst = std::copy(img.pixels.begin(), img.pixels.end(), dst);
        return out;
    }
    const auto& first = batch.items_f32.front();
    for (const auto& img : batch.items_f32)
        if (img.width != first.width || img.height != first.height)
            throw MixedDimensions("batch items differ in size; access items individually");
    py::array_t<float> out(
        {n, static_cast<std::size_t>(first.height), static_cast<std::size_t>(first.width)});
    auto* dst = out.mutable_data();
    for (const auto& img : batch.items_f32)
        dst = std::copy(img.pixels.begin(), img.pixels.end(), dst);
    return out;
}

std::vector<std::uint8_t> bytes_to_vector(const py::bytes& data) {
    char* buffer = nullptr;
    py::ssize_t length = 0;
    if (PyBytes_AsStringAndSize(data.ptr(), &buffer, &length) != 0) throw py::error_already_set();
    return std::vector<std::uint8_t>(buffer, buffer + length);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "cover-stego pair mixing: patch-swap augmentation with "
              "embedding-adaptive labels, a +-1 embedding simulator, and "
              "detection metrics";
    m.attr("__version__") = BITMIX_VERSION;

    py::register_exception<Error>(m, "BitmixError", PyExc_ValueError);

    py::class_<GrayImage>(m, "GrayImage")
        .def(py::init(&gray_from_numpy), py::arg("array"))
        .def_readonly("width", &GrayImage::width)
        .def_readonly("height", &GrayImage::height)
        .def("to_numpy", &gray_to_numpy)
        .def("__eq__", [](const GrayImage& a, const GrayImage& b) { return a == b; })
        .def("__repr__", [](const GrayImage& img) {
            return "GrayImage(" + std::to_string(img.width) + "x" + std::to_string(img.height) + ")";
        });

    py::class_<FloatImage>(m, "FloatImage")
        .def_readonly("width", &FloatImage::width)
        .def_readonly("height", &FloatImage::height)
        .def("to_numpy", &float_to_numpy);

    py::enum_<D4Transform>(m, "D4Transform")
        .value("IDENTITY", D4Transform::Identity)
        .value("ROT90", D4Transform::Rot90)
        .value("ROT180", D4Transform::Rot180)
        .value("ROT270", D4Transform::Rot270)
        .value("FLIP_H", D4Transform::FlipH)
        .value("FLIP_H_ROT90", D4Transform::FlipHRot90)
        .value("FLIP_H_ROT180", D4Transform::FlipHRot180)
        .value("FLIP_H_ROT270", D4Transform::FlipHRot270);

    m.def("apply_d4", &apply_d4, py::arg("image"), py::arg("transform"));
    m.def("d4_inverse", &d4_inverse);
    m.def("d4_compose", &d4_compose, py::arg("a"), py::arg("b"),
          "transform equivalent to applying b first, then a");
    m.def("diff_count", &diff_count);
    m.def("diff_mask", &diff_mask);

    m.def("load_pgm", [](const py::bytes& data) { return load_pgm(bytes_to_vector(data)); });
    m.def("save_pgm", [](const GrayImage& img) {
        const auto bytes = save_pgm(img);
        return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    });
    m.def("load_pgm_file", &load_pgm_file, py::arg("path"));
    m.def("save_pgm_file", &save_pgm_file, py::arg("image"), py::arg("path"));

    py::enum_<EmbedMode>(m, "EmbedMode")
        .value("UNIFORM", EmbedMode::Uniform)
        .value("ADAPTIVE", EmbedMode::Adaptive);

    py::class_<EmbedSpec>(m, "EmbedSpec")
        .def(py::init([](double change_rate, EmbedMode mode, int adaptive_window,
                         std::uint64_t seed) {
                 EmbedSpec spec;
                 spec.change_rate = change_rate;
                 spec.mode = mode;
                 spec.adaptive_window = adaptive_window;
                 spec.seed = seed;
                 return spec;
             }),
             py::arg("change_rate") = 0.05, py::arg("mode") = EmbedMode::Uniform,
             py::arg("adaptive_window") = 5, py::arg("seed") = 0)
        .def_readwrite("change_rate", &EmbedSpec::change_rate)
        .def_readwrite("mode", &EmbedSpec::mode)
        .def_readwrite("adaptive_window", &EmbedSpec::adaptive_window)
        .def_readwrite("seed", &EmbedSpec::seed);

    py::class_<StegoPair>(m, "StegoPair")
        .def(py::init<GrayImage, GrayImage>(), py::arg("cover"), py::arg("stego"))
        .def_readonly("cover", &StegoPair::cover)
        .def_readonly("stego", &StegoPair::stego);

    m.def("bpp_to_change_rate", &bpp_to_change_rate, py::arg("alpha"),
          "change rate whose ternary entropy equals the payload in bits per pixel");
    m.def("embed_uniform", &embed_uniform, py::arg("cover"), py::arg("spec"));
    m.def("embed_adaptive", &embed_adaptive, py::arg("cover"), py::arg("spec"));
    m.def("embed", &embed, py::arg("cover"), py::arg("spec"));

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("next_u64", &Rng::next_u64)
        .def("next_unit", &Rng::next_unit)
        .def("next_below", &Rng::next_below);

    py::class_<BBox>(m, "BBox")
        .def(py::init([](int x, int y, int w, int h) { return BBox{x, y, w, h}; }), py::arg("x"),
             py::arg("y"), py::arg("w"), py::arg("h"))
        .def_readwrite("x", &BBox::x)
        .def_readwrite("y", &BBox::y)
        .def_readwrite("w", &BBox::w)
        .def_readwrite("h", &BBox::h)
        .def("area", &BBox::area)
        .def("__eq__", [](const BBox& a, const BBox& b) { return a == b; })
        .def("__repr__", [](const BBox& b) {
            return "BBox(x=" + std::to_string(b.x) + ", y=" + std::to_string(b.y) +
                   ", w=" + std::to_string(b.w) + ", h=" + std::to_string(b.h) + ")";
        });

    py::enum_<MixMethod>(m, "MixMethod")
        .value("NONE", MixMethod::None)
        .value("BITMIX", MixMethod::BitMix)
        .value("CUTMIX", MixMethod::CutMix)
        .value("MIXUP", MixMethod::MixUp);

    py::enum_<PixelKind>(m, "PixelKind")
        .value("INTEGER8", PixelKind::Integer8)
        .value("FLOAT32", PixelKind::Float32);

    py::class_<MixConfig>(m, "MixConfig")
        .def(py::init([](double gamma, MixMethod method, double apply_fraction,
                         std::uint64_t seed, bool invert_labels, double mixup_max) {
                 MixConfig config;
                 config.gamma = gamma;
                 config.method = method;
                 config.apply_fraction = apply_fraction;
                 config.seed = seed;
                 config.invert_labels = invert_labels;
                 config.mixup_max = mixup_max;
                 return config;
             }),
             py::arg("gamma") = 0.25, py::arg("method") = MixMethod::BitMix,
             py::arg("apply_fraction") = 0.5, py::arg("seed") = 0,
             py::arg("invert_labels") = false, py::arg("mixup_max") = 0.0)
        .def_readwrite("gamma", &MixConfig::gamma)
        .def_readwrite("method", &MixConfig::method)
        .def_readwrite("apply_fraction", &MixConfig::apply_fraction)
        .def_readwrite("seed", &MixConfig::seed)
        .def_readwrite("invert_labels", &MixConfig::invert_labels)
        .def_readwrite("mixup_max", &MixConfig::mixup_max);

    py::class_<MixedPair>(m, "MixedPair")
        .def_readonly("pixel_kind", &MixedPair::pixel_kind)
        .def_readonly("label_cs", &MixedPair::label_cs)
        .def_readonly("label_sc", &MixedPair::label_sc)
        .def_readonly("lambda_", &MixedPair::lambda)
        .def_readonly("box", &MixedPair::box)
        .def_property_readonly("image_cs",
                               [](const MixedPair& p) -> py::object {
                                   if (p.pixel_kind == PixelKind::Integer8)
                                       return gray_to_numpy(p.image_cs);
                                   return float_to_numpy(p.image_cs_f32);
                               })
        .def_property_readonly("image_sc", [](const MixedPair& p) -> py::object {
            if (p.pixel_kind == PixelKind::Integer8) return gray_to_numpy(p.image_sc);
            return float_to_numpy(p.image_sc_f32);
        });

    py::class_<PairProvenance>(m, "PairProvenance")
        .def_readonly("transform", &PairProvenance::transform)
        .def_readonly("method", &PairProvenance::method)
        .def_readonly("box", &PairProvenance::box)
        .def_readonly("lambda_", &PairProvenance::lambda);

    py::class_<AugmentedBatch>(m, "AugmentedBatch")
        .def_readonly("pixel_kind", &AugmentedBatch::pixel_kind)
        .def_property_readonly("provenance",
                               [](const AugmentedBatch& b) { return b.provenance; })
        .def_property_readonly("pair_count", &AugmentedBatch::pair_count)
        .def("images", &batch_images, "all items as one (2N, H, W) array")
        .def("labels", [](const AugmentedBatch& b) {
            py::array_t<float> out(static_cast<py::ssize_t>(b.labels.size()));
            std::copy(b.labels.begin(), b.labels.end(), out.mutable_data());
            return out;
        });

    m.def(
        "sample_bbox",
        [](int width, int height, double gamma, Rng& rng) {
            return sample_bbox(width, height, gamma, rng);
        },
        py::arg("width"), py::arg("height"), py::arg("gamma"), py::arg("rng"));
    m.def("bitmix_pair", &bitmix_pair, py::arg("pair"), py::arg("box"));
    m.def("bitmix_lambda", &bitmix_lambda, py::arg("pair"), py::arg("box"));
    m.def(
        "cutmix_labels",
        [](const BBox& box, int width, int height) {
            const LabelPair labels = cutmix_labels(box, width, height);
            return py::make_tuple(labels.cs, labels.sc);
        },
        py::arg("box"), py::arg("width"), py::arg("height"));
    m.def("cutmix_pair", &cutmix_pair, py::arg("pair"), py::arg("box"));
    m.def("mixup_pair", &mixup_pair, py::arg("pair"), py::arg("mix_coefficient"));
    m.def("transform_bbox", &transform_bbox, py::arg("box"), py::arg("transform"),
          py::arg("width"), py::arg("height"));
    m.def(
        "assemble_batch",
        [](const std::vector<StegoPair>& pairs, const MixConfig& config) {
            return assemble_batch(pairs, config);
        },
        py::arg("pairs"), py::arg("config"));

    py::class_<Histogram>(m, "Histogram")
        .def_readonly("bin_edges", &Histogram::bin_edges)
        .def_readonly("counts", &Histogram::counts)
        .def_readonly("total", &Histogram::total)
        .def("frequencies", &Histogram::frequencies);

    py::class_<Heatmap>(m, "Heatmap")
        .def_readonly("width", &Heatmap::width)
        .def_readonly("height", &Heatmap::height)
        .def_readonly("samples_accepted", &Heatmap::samples_accepted)
        .def("density", [](const Heatmap& h) {
            py::array_t<double> out({h.height, h.width});
            const auto dens = h.density();
            std::copy(dens.begin(), dens.end(), out.mutable_data());
            return out;
        });

    py::class_<ScoredSample>(m, "ScoredSample")
        .def(py::init([](double score, bool is_stego) {
                 ScoredSample s;
                 s.score = score;
                 s.is_stego = is_stego;
                 return s;
             }),
             py::arg("score"), py::arg("is_stego"))
        .def_readwrite("score", &ScoredSample::score)
        .def_readwrite("is_stego", &ScoredSample::is_stego);

    m.def(
        "lambda_distribution",
        [](const std::vector<StegoPair>& pairs, double gamma, std::uint64_t n_samples,
           std::size_t bins, std::uint64_t seed) {
            return lambda_distribution(pairs, gamma, n_samples, bins, seed);
        },
        py::arg("pairs"), py::arg("gamma"), py::arg("n_samples"), py::arg("bins") = 50,
        py::arg("seed") = 0);
    m.def(
        "modified_pixel_heatmap",
        [](const std::vector<StegoPair>& pairs, double gamma, double band_lo, double band_hi,
           std::uint64_t n_samples, std::uint64_t seed) {
            return modified_pixel_heatmap(pairs, gamma, band_lo, band_hi, n_samples, seed);
        },
        py::arg("pairs"), py::arg("gamma"), py::arg("band_lo"), py::arg("band_hi"),
        py::arg("n_samples"), py::arg("seed") = 0);
    m.def(
        "p_e", [](const std::vector<ScoredSample>& samples) { return p_e(samples); },
        py::arg("samples"), "minimum over thresholds of (false alarm + missed detection)/2");
    m.def(
        "auc", [](const std::vector<ScoredSample>& samples) { return auc(samples); },
        py::arg("samples"));
    m.def("ks_statistic_uniform", &ks_statistic_uniform, py::arg("values"), py::arg("hi"));
    m.def("total_variation", &total_variation, py::arg("a"), py::arg("b"));
    m.def(
        "border_frame_stats",
        [](const Heatmap& map, double frame_fraction) {
            const FrameStats stats = border_frame_stats(map, frame_fraction);
            return py::make_tuple(stats.outer_mean, stats.inner_mean);
        },
        py::arg("heatmap"), py::arg("frame_fraction") = 0.25);

    m.def("write_batch", [](const AugmentedBatch& batch) {
        const auto bytes = write_batch(batch);
        return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    });
    m.def("read_batch", [](const py::bytes& data) { return read_batch(bytes_to_vector(data)); });
    m.def("write_batch_file", &write_batch_file, py::arg("batch"), py::arg("path"));
    m.def("read_batch_file", &read_batch_file, py::arg("path"));
    m.def("write_csv_histogram", &write_csv_histogram);
}
