#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bitmix/augment.hpp"
#include "bitmix/stats.hpp"

namespace bitmix {

// BMIX batch container, all multi-byte fields little-endian:
//   magic "BMIX" | version u16 (=1) | flags u16 (bit 0: float32 pixels)
//   image_count u32 (=2N) | width u32 | height u32
//   image_count rasters, row-major (u8, or f32 LE)
//   image_count labels, f32 LE
//   N provenance records: d4 u8 | method u8 | bbox 4 x u32 | lambda f32
inline constexpr std::uint16_t kBatchFormatVersion = 1;

std::vector<std::uint8_t> write_batch(const AugmentedBatch& batch);
AugmentedBatch read_batch(const std::vector<std::uint8_t>& bytes);

std::size_t write_batch_file(const AugmentedBatch& batch, const std::filesystem::path& path);
AugmentedBatch read_batch_file(const std::filesystem::path& path);

// "bin_lo,bin_hi,count,frequency" rows, 9 significant digits, LF endings.
std::string write_csv_histogram(const Histogram& h);

struct MetricsSummary {
    double p_e = 0.0;
    double auc = 0.0;
    std::uint64_t n_cover = 0;
    std::uint64_t n_stego = 0;
};

// "metric,value" rows for the detection metrics.
std::string write_csv_scores(const MetricsSummary& summary);

// "x,y,density" rows, normalized by accepted samples.
std::string write_csv_heatmap(const Heatmap& map);

// Density scaled so the peak maps to 255; for visual inspection.
GrayImage heatmap_to_pgm(const Heatmap& map);

// Parses "score,truth" rows with truth in {cover, stego}.
std::vector<ScoredSample> read_csv_scores(const std::string& text);

}  // namespace bitmix
