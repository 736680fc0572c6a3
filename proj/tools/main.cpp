#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bitmix/augment.hpp"
#include "bitmix/batch_io.hpp"
#include "bitmix/errors.hpp"
#include "bitmix/manifest.hpp"
#include "bitmix/pgm.hpp"
#include "bitmix/rng.hpp"
#include "bitmix/stats.hpp"
#include "bitmix/stego_sim.hpp"

namespace fs = std::filesystem;
using namespace bitmix;

namespace {

#ifndef BITMIX_VERSION
#define BITMIX_VERSION "dev"
#endif

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    std::int64_t elapsed_ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

std::string join_args(int argc, char** argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) {
        if (i) out += ' ';
        out += argv[i];
    }
    return out;
}

std::uint64_t hash_name(const std::string& name) {
    return fnv1a64(reinterpret_cast<const std::uint8_t*>(name.data()), name.size());
}

std::vector<fs::path> list_sorted(const fs::path& dir, const std::string& suffix) {
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.size() >= suffix.size() &&
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
            out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

void add_files(std::vector<std::pair<std::string, std::string>>& listing,
               const std::vector<fs::path>& paths) {
    for (const auto& p : paths) listing.emplace_back(p.string(), fnv1a64_hex_file(p));
}

void emit_manifest(const std::string& command, std::uint64_t seed, const fs::path& out_dir,
                   const std::vector<fs::path>& inputs, const std::vector<fs::path>& outputs,
                   const Timer& timer) {
    RunManifest m;
    m.command = command;
    m.seed = seed;
    m.version = BITMIX_VERSION;
    add_files(m.inputs, inputs);
    add_files(m.outputs, outputs);
    m.wall_time_ms = timer.elapsed_ms();
    write_manifest(m, out_dir);
}

std::string write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    return path.string();
}

// ---------------------------------------------------------------- pair dirs

struct NamedPair {
    std::string stem;
    StegoPair pair;
};

std::vector<NamedPair> load_pair_dir(const fs::path& dir) {
    std::vector<std::string> problems;
    std::map<std::string, fs::path> covers, stegos;
    for (const auto& p : list_sorted(dir, ".cover.pgm")) {
        std::string stem = p.filename().string();
        stem.erase(stem.size() - 10);
        covers[stem] = p;
    }
    for (const auto& p : list_sorted(dir, ".stego.pgm")) {
        std::string stem = p.filename().string();
        stem.erase(stem.size() - 10);
        stegos[stem] = p;
    }
    for (const auto& [stem, p] : covers)
        if (!stegos.count(stem)) problems.push_back("unpaired cover: " + p.string());
    for (const auto& [stem, p] : stegos)
        if (!covers.count(stem)) problems.push_back("unpaired stego: " + p.string());

    std::vector<NamedPair> out;
    for (const auto& [stem, cover_path] : covers) {
        if (!stegos.count(stem)) continue;
        try {
            GrayImage cover = load_pgm_file(cover_path);
            GrayImage stego = load_pgm_file(stegos[stem]);
            out.push_back({stem, StegoPair(std::move(cover), std::move(stego))});
        } catch (const Error& e) {
            problems.push_back(stem + ": " + e.what());
        }
    }
    if (!problems.empty()) {
        for (const auto& p : problems) std::cerr << "error: " << p << "\n";
        throw Error(std::to_string(problems.size()) + " pair problem(s) in " + dir.string());
    }
    if (out.empty()) throw Error("no *.cover.pgm/*.stego.pgm pairs in " + dir.string());
    return out;
}

// Synthetic pool for --synthetic mode: noise covers, uniform embedding.
std::vector<StegoPair> synthetic_pool(double change_rate, int size, std::size_t count,
                                      std::uint64_t seed) {
    std::vector<StegoPair> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rng cover_rng = Rng::substream(seed, streams::kCover, i);
        GrayImage cover(size, size);
        for (auto& px : cover.pixels) px = static_cast<std::uint8_t>(cover_rng.next_below(256));
        EmbedSpec spec;
        spec.change_rate = change_rate;
        spec.mode = EmbedMode::Uniform;
        spec.seed = Rng::substream(seed, streams::kEmbed, i).next_u64();
        out.push_back(embed_uniform(cover, spec));
    }
    return out;
}

std::string format_gamma(double gamma) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", gamma);
    return buf;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const fs::path& covers_dir, const fs::path& out_dir, double bpp,
                 double change_rate, const std::string& mode, int window, std::uint64_t seed,
                 const std::string& command) {
    Timer timer;
    const auto cover_files = list_sorted(covers_dir, ".pgm");
    if (cover_files.empty()) {
        std::cerr << "error: no .pgm files in " << covers_dir << "\n";
        return kExitData;
    }
    fs::create_directories(out_dir);

    EmbedSpec base;
    base.change_rate = bpp > 0.0 ? bpp_to_change_rate(bpp) : change_rate;
    base.mode = mode == "adaptive" ? EmbedMode::Adaptive : EmbedMode::Uniform;
    base.adaptive_window = window;

    std::vector<fs::path> outputs;
    int failures = 0;
    for (const auto& path : cover_files) {
        const std::string stem = path.stem().string();
        try {
            const GrayImage cover = load_pgm_file(path);
            EmbedSpec spec = base;
            spec.seed = Rng::substream(seed, streams::kEmbed, hash_name(stem)).next_u64();
            const StegoPair pair = embed(cover, spec);
            const fs::path cover_out = out_dir / (stem + ".cover.pgm");
            const fs::path stego_out = out_dir / (stem + ".stego.pgm");
            save_pgm_file(pair.cover, cover_out);
            save_pgm_file(pair.stego, stego_out);
            outputs.push_back(cover_out);
            outputs.push_back(stego_out);
        } catch (const Error& e) {
            std::cerr << "error: " << path.string() << ": " << e.what() << "\n";
            ++failures;
        }
    }
    emit_manifest(command, seed, out_dir, cover_files, outputs, timer);
    if (failures > 0) {
        std::cerr << failures << " of " << cover_files.size() << " covers failed\n";
        return kExitData;
    }
    std::cout << "wrote " << outputs.size() << " files to " << out_dir.string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- augment

MixMethod parse_method(const std::string& name) {
    if (name == "bitmix") return MixMethod::BitMix;
    if (name == "cutmix") return MixMethod::CutMix;
    if (name == "mixup") return MixMethod::MixUp;
    return MixMethod::None;
}

int cmd_augment(const fs::path& pairs_dir, double gamma, const std::string& method,
                std::size_t batch_size, double apply_fraction, std::uint64_t seed,
                const fs::path& out_dir, bool invert_labels, double mixup_max,
                const std::string& command) {
    Timer timer;
    auto named = load_pair_dir(pairs_dir);

    // one container dimension per file: all pairs must be square and equal
    std::vector<std::string> offenders;
    const int w0 = named[0].pair.cover.width, h0 = named[0].pair.cover.height;
    for (const auto& np : named) {
        const auto& c = np.pair.cover;
        if (c.width != c.height)
            offenders.push_back(np.stem + ": non-square " + std::to_string(c.width) + "x" +
                                std::to_string(c.height) +
                                " (rotations would change batch dimensions)");
        else if (c.width != w0 || c.height != h0)
            offenders.push_back(np.stem + ": size differs from " + std::to_string(w0) + "x" +
                                std::to_string(h0));
    }
    if (!offenders.empty()) {
        for (const auto& o : offenders) std::cerr << "error: " << o << "\n";
        return kExitData;
    }

    // deterministic shuffle of pair order
    Rng shuffle_rng = Rng::substream(seed, streams::kShuffle, 0);
    for (std::size_t i = named.size(); i > 1; --i)
        std::swap(named[i - 1], named[shuffle_rng.next_below(i)]);

    std::vector<StegoPair> pairs;
    pairs.reserve(named.size());
    for (auto& np : named) pairs.push_back(std::move(np.pair));

    fs::create_directories(out_dir);
    std::vector<fs::path> outputs;
    std::size_t batch_index = 0;
    for (std::size_t offset = 0; offset < pairs.size(); offset += batch_size, ++batch_index) {
        const std::size_t n = std::min(batch_size, pairs.size() - offset);
        MixConfig config;
        config.gamma = gamma;
        config.method = parse_method(method);
        config.apply_fraction = apply_fraction;
        config.invert_labels = invert_labels;
        config.mixup_max = mixup_max;
        config.seed = Rng::substream(seed, streams::kBatch, batch_index).next_u64();
        const AugmentedBatch batch =
            assemble_batch(std::span<const StegoPair>(pairs.data() + offset, n), config);
        char name[32];
        std::snprintf(name, sizeof(name), "batch_%04zu.bmix", batch_index);
        const fs::path out_path = out_dir / name;
        write_batch_file(batch, out_path);
        outputs.push_back(out_path);
    }

    std::vector<fs::path> input_files = list_sorted(pairs_dir, ".cover.pgm");
    const auto stego_files = list_sorted(pairs_dir, ".stego.pgm");
    input_files.insert(input_files.end(), stego_files.begin(), stego_files.end());
    emit_manifest(command, seed, out_dir, input_files, outputs, timer);
    std::cout << "wrote " << outputs.size() << " batch container(s) to " << out_dir.string()
              << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- lambda-dist

int cmd_lambda_dist(const fs::path& pairs_dir, double synthetic_rate,
                    const std::vector<double>& gammas, std::uint64_t samples, std::size_t bins,
                    std::uint64_t seed, const fs::path& out_dir, std::size_t pool_size,
                    int synthetic_size, const std::string& command) {
    Timer timer;
    std::vector<StegoPair> pool;
    std::vector<fs::path> input_files;
    if (synthetic_rate > 0.0) {
        pool = synthetic_pool(synthetic_rate, synthetic_size, pool_size, seed);
    } else {
        auto named = load_pair_dir(pairs_dir);
        for (auto& np : named) pool.push_back(std::move(np.pair));
        input_files = list_sorted(pairs_dir, ".cover.pgm");
        const auto stego_files = list_sorted(pairs_dir, ".stego.pgm");
        input_files.insert(input_files.end(), stego_files.begin(), stego_files.end());
    }

    fs::create_directories(out_dir);
    std::vector<fs::path> outputs;
    std::string combined = "gamma,bin_lo,bin_hi,count,frequency\n";
    for (const double gamma : gammas) {
        const Histogram h = lambda_distribution(pool, gamma, samples, bins, seed);
        const fs::path csv_path = out_dir / ("lambda_gamma_" + format_gamma(gamma) + ".csv");
        write_text_file(csv_path, write_csv_histogram(h));
        outputs.push_back(csv_path);

        const auto freq = h.frequencies();
        for (std::size_t i = 0; i < h.bins(); ++i) {
            char row[128];
            std::snprintf(row, sizeof(row), "%g,%.9g,%.9g,%llu,%.9g\n", gamma, h.bin_edges[i],
                          h.bin_edges[i + 1], static_cast<unsigned long long>(h.counts[i]),
                          freq[i]);
            combined += row;
        }
    }
    const fs::path combined_path = out_dir / "lambda_all.csv";
    write_text_file(combined_path, combined);
    outputs.push_back(combined_path);
    emit_manifest(command, seed, out_dir, input_files, outputs, timer);
    std::cout << "wrote " << outputs.size() << " csv file(s) to " << out_dir.string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- metrics

int cmd_metrics(const fs::path& scores_path, const fs::path& out_dir,
                const std::string& command) {
    Timer timer;
    std::ifstream in(scores_path, std::ios::binary);
    if (!in) throw Error("cannot open " + scores_path.string());
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto samples = read_csv_scores(text);

    MetricsSummary summary;
    summary.p_e = p_e(samples);
    summary.auc = auc(samples);
    for (const auto& s : samples) (s.is_stego ? summary.n_stego : summary.n_cover) += 1;

    fs::create_directories(out_dir);
    const fs::path csv_path = out_dir / "metrics.csv";
    write_text_file(csv_path, write_csv_scores(summary));
    emit_manifest(command, 0, out_dir, {scores_path}, {csv_path}, timer);
    std::printf("P_E=%.4f AUC=%.4f\n", summary.p_e, summary.auc);
    return kExitOk;
}

// ---------------------------------------------------------------- heatmap

int cmd_heatmap(const fs::path& pairs_dir, double synthetic_rate, double gamma,
                const std::string& band, std::uint64_t samples, std::uint64_t seed,
                const fs::path& out_dir, std::size_t pool_size, int synthetic_size,
                const std::string& command) {
    Timer timer;
    double lo = 0.0, hi = 0.0;
    if (std::sscanf(band.c_str(), "%lf:%lf", &lo, &hi) != 2 || !(lo >= 0.0) || !(lo < hi) ||
        !(hi <= 1.0)) {
        std::cerr << "error: --band expects lo:hi with 0 <= lo < hi <= 1\n";
        return kExitUsage;
    }

    std::vector<StegoPair> pool;
    std::vector<fs::path> input_files;
    if (synthetic_rate > 0.0) {
        pool = synthetic_pool(synthetic_rate, synthetic_size, pool_size, seed);
    } else {
        auto named = load_pair_dir(pairs_dir);
        for (auto& np : named) pool.push_back(std::move(np.pair));
        input_files = list_sorted(pairs_dir, ".cover.pgm");
        const auto stego_files = list_sorted(pairs_dir, ".stego.pgm");
        input_files.insert(input_files.end(), stego_files.begin(), stego_files.end());
    }

    const Heatmap map = modified_pixel_heatmap(pool, gamma, lo, hi, samples, seed);

    fs::create_directories(out_dir);
    const fs::path csv_path = out_dir / "heatmap.csv";
    const fs::path pgm_path = out_dir / "heatmap.pgm";
    write_text_file(csv_path, write_csv_heatmap(map));
    save_pgm_file(heatmap_to_pgm(map), pgm_path);
    emit_manifest(command, seed, out_dir, input_files, {csv_path, pgm_path}, timer);

    const FrameStats frame = border_frame_stats(map, 0.25);
    std::printf("accepted=%llu outer_mean=%.6g inner_mean=%.6g\n",
                static_cast<unsigned long long>(map.samples_accepted), frame.outer_mean,
                frame.inner_mean);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cover-stego pair mixing toolkit"};
    app.set_version_flag("--version", std::string(BITMIX_VERSION));
    app.require_subcommand(1);
    const std::string command = join_args(argc, argv);

    // simulate
    auto* sim = app.add_subcommand("simulate", "embed simulated +-1 stego signals into covers");
    fs::path sim_covers, sim_out;
    double sim_bpp = 0.0, sim_rate = 0.0;
    std::string sim_mode = "uniform";
    int sim_window = 5;
    std::uint64_t sim_seed = 0;
    sim->add_option("covers_dir", sim_covers, "directory of cover .pgm files")
        ->required()
        ->check(CLI::ExistingDirectory);
    sim->add_option("out_dir", sim_out, "output directory")->required();
    auto* bpp_opt =
        sim->add_option("--bpp", sim_bpp, "payload in bits per pixel")->check(CLI::Range(1e-9, 1.584));
    auto* rate_opt = sim->add_option("--change-rate", sim_rate, "fraction of pixels to modify")
                         ->check(CLI::Range(1e-9, 0.999999));
    bpp_opt->excludes(rate_opt);
    rate_opt->excludes(bpp_opt);
    sim->add_option("--mode", sim_mode, "uniform|adaptive")
        ->check(CLI::IsMember({"uniform", "adaptive"}));
    sim->add_option("--window", sim_window, "adaptive local-variance window (odd, >=3)");
    sim->add_option("--seed", sim_seed, "master RNG seed");

    // augment
    auto* aug = app.add_subcommand("augment", "assemble augmented batches from cover/stego pairs");
    fs::path aug_pairs, aug_out = "batches";
    double aug_gamma = 0.25, aug_fraction = 0.5, aug_mixup_max = 0.0;
    std::string aug_method = "bitmix";
    std::size_t aug_batch = 16;
    std::uint64_t aug_seed = 0;
    bool aug_invert = false;
    aug->add_option("pairs_dir", aug_pairs, "directory of *.cover.pgm / *.stego.pgm pairs")
        ->required()
        ->check(CLI::ExistingDirectory);
    aug->add_option("--gamma", aug_gamma, "maximum mix ratio in (0,1]")
        ->check(CLI::Range(1e-9, 1.0));
    aug->add_option("--method", aug_method, "bitmix|cutmix|mixup|none")
        ->check(CLI::IsMember({"bitmix", "cutmix", "mixup", "none"}));
    aug->add_option("--batch-size", aug_batch, "pairs per container")->check(CLI::PositiveNumber);
    aug->add_option("--apply-fraction", aug_fraction, "share of pairs augmented per batch")
        ->check(CLI::Range(0.0, 1.0));
    aug->add_option("--seed", aug_seed, "master RNG seed");
    aug->add_option("--out", aug_out, "output directory");
    aug->add_flag("--invert-labels", aug_invert, "use cover=0/stego=1 labels");
    aug->add_option("--mixup-max", aug_mixup_max, "upper bound of the mixup coefficient");

    // lambda-dist
    auto* dist = app.add_subcommand("lambda-dist", "mix-ratio distribution over gamma values");
    fs::path dist_pairs, dist_out = "lambda";
    double dist_rate = 0.0;
    std::vector<double> dist_gammas{0.25};
    std::uint64_t dist_samples = 10000, dist_seed = 0;
    std::size_t dist_bins = 50, dist_pool = 64;
    int dist_size = 256;
    auto* dist_dir_opt = dist->add_option("pairs_dir", dist_pairs, "pair directory")
                             ->check(CLI::ExistingDirectory);
    auto* dist_syn_opt =
        dist->add_option("--synthetic", dist_rate, "simulate pairs at this change rate")
            ->check(CLI::Range(1e-9, 0.999999));
    dist_syn_opt->excludes(dist_dir_opt);
    dist->add_option("--gamma", dist_gammas, "maximum mix ratio(s)")
        ->delimiter(',')
        ->check(CLI::Range(1e-9, 1.0));
    dist->add_option("--samples", dist_samples, "draws per gamma")->check(CLI::PositiveNumber);
    dist->add_option("--bins", dist_bins, "histogram bins")->check(CLI::Range(2, 100000));
    dist->add_option("--seed", dist_seed, "master RNG seed");
    dist->add_option("--out", dist_out, "output directory");
    dist->add_option("--pool", dist_pool, "synthetic pool size")->check(CLI::PositiveNumber);
    dist->add_option("--size", dist_size, "synthetic image size")->check(CLI::Range(8, 4096));

    // metrics
    auto* met = app.add_subcommand("metrics", "detection error and AUC from scored samples");
    fs::path met_scores, met_out = ".";
    met->add_option("scores_csv", met_scores, "CSV with columns score,truth")
        ->required()
        ->check(CLI::ExistingFile);
    met->add_option("--out", met_out, "output directory");

    // heatmap
    auto* heat = app.add_subcommand("heatmap", "spatial density of surviving modified pixels");
    fs::path heat_pairs, heat_out = "heatmap";
    double heat_rate = 0.0, heat_gamma = 0.25;
    std::string heat_band = "0.85:0.95";
    std::uint64_t heat_samples = 100000, heat_seed = 0;
    std::size_t heat_pool = 64;
    int heat_size = 256;
    auto* heat_dir_opt = heat->add_option("pairs_dir", heat_pairs, "pair directory")
                             ->check(CLI::ExistingDirectory);
    auto* heat_syn_opt =
        heat->add_option("--synthetic", heat_rate, "simulate pairs at this change rate")
            ->check(CLI::Range(1e-9, 0.999999));
    heat_syn_opt->excludes(heat_dir_opt);
    heat->add_option("--gamma", heat_gamma, "maximum mix ratio in (0,1]")
        ->check(CLI::Range(1e-9, 1.0));
    heat->add_option("--band", heat_band, "accepted lambda band, lo:hi");
    heat->add_option("--samples", heat_samples, "number of draws")->check(CLI::PositiveNumber);
    heat->add_option("--seed", heat_seed, "master RNG seed");
    heat->add_option("--out", heat_out, "output directory");
    heat->add_option("--pool", heat_pool, "synthetic pool size")->check(CLI::PositiveNumber);
    heat->add_option("--size", heat_size, "synthetic image size")->check(CLI::Range(8, 4096));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sim->parsed()) {
            if (sim_bpp == 0.0 && sim_rate == 0.0) {
                std::cerr << "error: one of --bpp or --change-rate is required\n";
                return kExitUsage;
            }
            if (sim_window < 3 || sim_window % 2 == 0) {
                std::cerr << "error: --window must be odd and >= 3\n";
                return kExitUsage;
            }
            return cmd_simulate(sim_covers, sim_out, sim_bpp, sim_rate, sim_mode, sim_window,
                                sim_seed, command);
        }
        if (aug->parsed())
            return cmd_augment(aug_pairs, aug_gamma, aug_method, aug_batch, aug_fraction,
                               aug_seed, aug_out, aug_invert, aug_mixup_max, command);
        if (dist->parsed()) {
            if (dist_rate == 0.0 && dist_pairs.empty()) {
                std::cerr << "error: give a pairs_dir or --synthetic <rate>\n";
                return kExitUsage;
            }
            return cmd_lambda_dist(dist_pairs, dist_rate, dist_gammas, dist_samples, dist_bins,
                                   dist_seed, dist_out, dist_pool, dist_size, command);
        }
        if (met->parsed()) return cmd_metrics(met_scores, met_out, command);
        if (heat->parsed()) {
            if (heat_rate == 0.0 && heat_pairs.empty()) {
                std::cerr << "error: give a pairs_dir or --synthetic <rate>\n";
                return kExitUsage;
            }
            return cmd_heatmap(heat_pairs, heat_rate, heat_gamma, heat_band, heat_samples,
                               heat_seed, heat_out, heat_pool, heat_size, command);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
