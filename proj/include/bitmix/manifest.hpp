#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace bitmix {

// Reproducibility record emitted once per CLI run, next to the outputs.
// Digests are FNV-1a 64 fingerprints of file contents (not a security
// feature). All fields except wall_time_ms are deterministic for a fixed
// command line and seed.
struct RunManifest {
    std::string command;
    std::uint64_t seed = 0;
    std::string version;
    std::vector<std::pair<std::string, std::string>> inputs;   // path, digest
    std::vector<std::pair<std::string, std::string>> outputs;  // path, digest
    std::int64_t wall_time_ms = 0;

    std::string to_json() const;
};

std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t n);
std::string fnv1a64_hex_file(const std::filesystem::path& path);

void write_manifest(const RunManifest& manifest, const std::filesystem::path& dir);

}  // namespace bitmix
