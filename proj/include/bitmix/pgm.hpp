#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "bitmix/image.hpp"

namespace bitmix {

// Binary PGM (P5), maxval <= 255. Comments (#) are accepted in the header on
// read; the writer always emits the canonical form "P5\n<W> <H>\n255\n".
GrayImage load_pgm(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> save_pgm(const GrayImage& img);

GrayImage load_pgm_file(const std::filesystem::path& path);
void save_pgm_file(const GrayImage& img, const std::filesystem::path& path);

}  // namespace bitmix
