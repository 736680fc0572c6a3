#include "bitmix/manifest.hpp"

#include <fstream>

#include <json.hpp>

#include "bitmix/errors.hpp"

namespace bitmix {

std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t n) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 0x100000001B3ull;
    }
    return h;
}

std::string fnv1a64_hex_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
    return buf;
}

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["seed"] = seed;
    j["version"] = version;
    const auto listing = [](const std::vector<std::pair<std::string, std::string>>& files) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [path, digest] : files)
            arr.push_back({{"path", path}, {"fnv1a64", digest}});
        return arr;
    };
    j["inputs"] = listing(inputs);
    j["outputs"] = listing(outputs);
    j["wall_time_ms"] = wall_time_ms;
    return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& dir) {
    std::ofstream out(dir / "manifest.json", std::ios::trunc);
    if (!out) throw Error("cannot write manifest in " + dir.string());
    out << manifest.to_json();
}

}  // namespace bitmix
