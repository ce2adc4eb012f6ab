// voxwheat: point-cloud to 3D-tensor conversion pipeline and dataset tooling.
//
// Exit codes: 0 success, 2 partial conversion failure, 64 usage error,
// 65 unusable label table, 66 corrupt tensor file.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "voxwheat/archgen.hpp"
#include "voxwheat/dataset.hpp"
#include "voxwheat/errors.hpp"
#include "voxwheat/parallel.hpp"
#include "voxwheat/ply.hpp"
#include "voxwheat/resample.hpp"
#include "voxwheat/tensor_io.hpp"
#include "voxwheat/voxelize.hpp"

namespace fs = std::filesystem;
using namespace voxwheat;

namespace {

constexpr int kExitPartial = 2;
constexpr int kExitUsage = 64;
constexpr int kExitLabels = 65;
constexpr int kExitCorrupt = 66;

unsigned default_threads() {
    if (const char* env = std::getenv("VOXWHEAT_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n >= 1) return unsigned(n);
        std::cerr << "warning: ignoring malformed VOXWHEAT_THREADS=" << env << "\n";
    }
    return default_thread_count();
}

// '*' and '?' wildcards within one path component.
bool wildcard_match(std::string_view pattern, std::string_view name) {
    std::size_t p = 0, n = 0;
    std::size_t star = std::string_view::npos, star_n = 0;
    while (n < name.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
            ++p;
            ++n;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            star_n = n;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            n = ++star_n;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs) {
    std::vector<std::string> paths;
    for (const auto& input : inputs) {
        if (input.find('*') == std::string::npos && input.find('?') == std::string::npos) {
            paths.push_back(input);
            continue;
        }
        const fs::path pattern(input);
        const fs::path dir = pattern.has_parent_path() ? pattern.parent_path() : fs::path(".");
        const std::string name_pattern = pattern.filename().string();
        std::vector<std::string> matched;
        if (fs::exists(dir)) {
            for (const auto& entry : fs::directory_iterator(dir)) {
                if (!entry.is_regular_file()) continue;
                if (wildcard_match(name_pattern, entry.path().filename().string()))
                    matched.push_back(entry.path().string());
            }
        }
        std::sort(matched.begin(), matched.end());
        paths.insert(paths.end(), matched.begin(), matched.end());
    }
    return paths;
}

bool parse_dims(const std::string& text, std::vector<std::uint32_t>& out, std::size_t count) {
    out.clear();
    std::istringstream stream(text);
    std::string item;
    while (std::getline(stream, item, 'x')) {
        try {
            const int v = std::stoi(item);
            if (v < 1) return false;
            out.push_back(std::uint32_t(v));
        } catch (const std::exception&) {
            return false;
        }
    }
    return out.size() == count;
}

struct ConvertOptions {
    std::vector<std::string> inputs;
    std::string out_dir = ".";
    double resolution = 1.0;
    std::string channels = "rgb";
    std::string envelope = "none";
    std::string format = "v3d";
    unsigned threads = 0;
};

int cmd_convert(const ConvertOptions& opt) {
    const auto paths = expand_inputs(opt.inputs);
    if (paths.empty()) {
        std::cerr << "error: no input files matched\n";
        return kExitUsage;
    }

    ChannelMode mode;
    TensorFormat format;
    bool use_envelope = false;
    Envelope envelope{};
    try {
        mode = channel_mode_from_name(opt.channels);
        format = tensor_format_from_name(opt.format);
        if (opt.envelope != "none") {
            std::vector<std::uint32_t> dims;
            if (parse_dims(opt.envelope, dims, 3)) envelope = {dims[0], dims[1], dims[2]};
            else envelope = envelope_preset(opt.envelope);
            use_envelope = true;
        }
        if (!(opt.resolution > 0.0))
            throw InvalidResolutionError("resolution must be positive");
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    fs::create_directories(opt.out_dir);
    const unsigned threads = opt.threads ? opt.threads : default_threads();

    struct FileResult {
        bool ok = false;
        std::string line;
    };
    std::vector<FileResult> results(paths.size());

    // Across files when there are many; inside the conversion otherwise.
    const bool file_parallel = paths.size() >= std::size_t(threads);
    const unsigned outer = file_parallel ? threads : 1;
    const unsigned inner = file_parallel ? 1 : threads;

    parallel_tasks(paths.size(), outer, [&](std::size_t i) {
        const auto& path = paths[i];
        const auto t0 = std::chrono::steady_clock::now();
        std::ostringstream line;
        try {
            auto parsed = parse_ply_file(path);
            std::vector<PointCloud> batch{std::move(parsed.cloud)};
            auto grids = convert_batch(batch, opt.resolution, mode, inner);
            VoxelGrid grid = std::move(grids[0]);
            if (use_envelope) grid = fit_to_envelope(grid, envelope);

            const fs::path out_path =
                fs::path(opt.out_dir) /
                (fs::path(path).stem().string() + std::string(tensor_format_extension(format)));
            write_tensor_file(out_path.string(), grid, format);

            const double ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count();
            line << "ok path=" << path << " out=" << out_path.string() << " dims=" << grid.width
                 << "x" << grid.height << "x" << grid.depth << " channels=" << grid.channels
                 << " occupied=" << occupied_count(grid) << " ms=" << ms;
            if (!parsed.report.missing_channels.empty()) {
                line << " warnings=missing:";
                for (std::size_t c = 0; c < parsed.report.missing_channels.size(); ++c) {
                    if (c) line << ";";
                    line << parsed.report.missing_channels[c];
                }
            }
            results[i] = {true, line.str()};
        } catch (const std::exception& e) {
            line << "error path=" << path << " reason=" << e.what();
            results[i] = {false, line.str()};
        }
    });

    std::size_t failures = 0;
    for (const auto& result : results) {
        std::cout << result.line << "\n";
        if (!result.ok) ++failures;
    }
    std::cout << "done converted=" << paths.size() - failures << " failed=" << failures << "\n";
    return failures == 0 ? 0 : kExitPartial;
}

struct SplitOptions {
    std::string labels;
    std::string out;
    double test_fraction = 0.1;
    int folds = 5;
    std::uint64_t seed = 0;
};

int cmd_split(const SplitOptions& opt) {
    DatasetManifest manifest;
    try {
        manifest = read_manifest_file(opt.labels);
        fill_severity(manifest);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitLabels;
    }

    const auto missing = unlabeled_paths(manifest);
    if (!missing.empty()) {
        std::cerr << "error: records lack labels:\n";
        for (const auto& path : missing) std::cerr << "  " << path << "\n";
        return kExitLabels;
    }

    try {
        std::vector<std::string> warnings;
        stratified_split(manifest, opt.test_fraction, opt.seed, &warnings);
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
        if (opt.folds > 0) assign_folds(manifest, opt.folds, opt.seed);
        write_manifest_file(opt.out, manifest);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitLabels;
    }

    std::size_t train = 0, test = 0;
    for (const auto& rec : manifest.records) {
        train += rec.split == Split::Train;
        test += rec.split == Split::Test;
    }
    std::cout << "manifest=" << opt.out << " records=" << manifest.records.size()
              << " train=" << train << " test=" << test << " folds=" << opt.folds
              << " seed=" << opt.seed << "\n";
    return 0;
}

struct ArchgenOptions {
    std::string task = "detection";
    std::size_t batch_size = 20;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string input_dims;
};

int cmd_archgen(const ArchgenOptions& opt) {
    Task task;
    if (opt.task == "detection") task = Task::Detection;
    else if (opt.task == "regression") task = Task::Regression;
    else {
        std::cerr << "error: task must be detection or regression\n";
        return kExitUsage;
    }

    std::vector<ModelSpec> batch;
    try {
        if (!opt.input_dims.empty()) {
            std::vector<std::uint32_t> dims;
            if (!parse_dims(opt.input_dims, dims, 4)) {
                std::cerr << "error: --input-dims must be WxHxDxC\n";
                return kExitUsage;
            }
            batch = sample_batch(opt.seed, opt.batch_size, task,
                                 {dims[0], dims[1], dims[2], dims[3]});
        } else {
            batch = sample_batch(opt.seed, opt.batch_size, task);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    fs::create_directories(opt.out_dir);
    int width = 1;
    for (std::size_t n = batch.size(); n >= 10; n /= 10) ++width;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        std::ostringstream name;
        name << "model_";
        name.width(width);
        name.fill('0');
        name << i + 1;
        const fs::path path = fs::path(opt.out_dir) / (name.str() + ".spec");
        const std::string doc = emit_spec(batch[i]);
        write_file_bytes(path.string(),
                         std::as_bytes(std::span<const char>(doc.data(), doc.size())));
        std::cout << "spec=" << path.string() << " conv=" << batch[i].conv_neurons.size()
                  << " dense=" << batch[i].dense_neurons.size() + 1
                  << " params=" << param_count(batch[i]) << "\n";
    }
    return 0;
}

int cmd_inspect(const std::string& path) {
    try {
        TensorFormat format;
        VoxelGrid grid = read_tensor_file(path, &format);
        std::cout << "magic " << (format == TensorFormat::V3d ? "V3D1" : "NUMPY") << "\n";
        std::cout << "dims " << grid.width << " " << grid.height << " " << grid.depth << "\n";
        std::cout << "channels " << grid.channels << "\n";
        std::cout << "occupied " << occupied_count(grid) << "\n";
        return 0;
    } catch (const FormatError& e) {
        std::cerr << "error: " << path << ": " << e.what() << "\n";
        return kExitCorrupt;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

struct BenchOptions {
    std::size_t points = 1000000;
    std::size_t clouds = 10;
    double resolution = 1.0;
    std::string threads = "1,2,4,8";
    std::uint64_t seed = 1;
};

int cmd_bench(const BenchOptions& opt) {
    std::vector<unsigned> thread_counts;
    {
        std::istringstream stream(opt.threads);
        std::string item;
        while (std::getline(stream, item, ',')) {
            try {
                const int n = std::stoi(item);
                if (n < 1) throw std::invalid_argument("thread count");
                thread_counts.push_back(unsigned(n));
            } catch (const std::exception&) {
                std::cerr << "error: bad thread list entry " << item << "\n";
                return kExitUsage;
            }
        }
    }
    if (thread_counts.empty() || opt.points == 0 || opt.clouds == 0) {
        std::cerr << "error: bench needs points, clouds, and a thread list\n";
        return kExitUsage;
    }

    std::vector<PointCloud> clouds;
    clouds.reserve(opt.clouds);
    for (std::size_t i = 0; i < opt.clouds; ++i) {
        SyntheticSpec spec;
        spec.lo = {0, 0, 0};
        spec.hi = {100, 300, 100};  // plant-scale extents in mm
        spec.count = opt.points;
        spec.seed = opt.seed + i;
        clouds.push_back(generate_synthetic_cloud(spec));
    }
    const double total_points = double(opt.points) * double(opt.clouds);

    // Every run is compared against a single-thread reference conversion.
    std::vector<VoxelGrid> reference =
        convert_batch(clouds, opt.resolution, ChannelMode::Rgbn, 1);
    bool deterministic = true;
    for (unsigned threads : thread_counts) {
        const auto t0 = std::chrono::steady_clock::now();
        auto grids = convert_batch(clouds, opt.resolution, ChannelMode::Rgbn, threads);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        deterministic &= grids == reference;

        std::cout << "threads=" << threads << " points=" << std::size_t(total_points)
                  << " seconds=" << seconds
                  << " points_per_s=" << std::size_t(total_points / seconds) << "\n";
    }
    std::cout << "determinism " << (deterministic ? "ok" : "MISMATCH") << "\n";
    return deterministic ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"point-cloud voxelization pipeline"};
    app.require_subcommand(1);

    ConvertOptions convert_opt;
    auto* convert = app.add_subcommand("convert", "convert PLY files into 3D tensor files");
    convert->add_option("--input", convert_opt.inputs, "input files or globs")->required();
    convert->add_option("--out", convert_opt.out_dir, "output directory");
    convert->add_option("--resolution", convert_opt.resolution, "resolution factor R");
    convert->add_option("--channels", convert_opt.channels, "rgb|nir|rgbn");
    convert->add_option("--envelope", convert_opt.envelope, "none|spike-rgb|head|dataset2|WxHxD");
    convert->add_option("--format", convert_opt.format, "v3d|npy");
    convert->add_option("--threads", convert_opt.threads, "worker threads");

    SplitOptions split_opt;
    auto* split = app.add_subcommand("split", "write a stratified train/test manifest");
    split->add_option("--labels", split_opt.labels, "label table (manifest CSV)")->required();
    split->add_option("--test-frac", split_opt.test_fraction, "test fraction");
    split->add_option("--folds", split_opt.folds, "cross-validation fold count");
    split->add_option("--seed", split_opt.seed, "random seed");
    split->add_option("--out", split_opt.out, "output manifest path")->required();

    ArchgenOptions archgen_opt;
    auto* archgen = app.add_subcommand("archgen", "sample valid 3D-CNN architecture specs");
    archgen->add_option("--task", archgen_opt.task, "detection|regression");
    archgen->add_option("--batch-size", archgen_opt.batch_size, "specs per batch");
    archgen->add_option("--seed", archgen_opt.seed, "random seed");
    archgen->add_option("--out", archgen_opt.out_dir, "output directory");
    archgen->add_option("--input-dims", archgen_opt.input_dims, "WxHxDxC input tensor dims");

    std::string inspect_path;
    auto* inspect = app.add_subcommand("inspect", "print a tensor file header");
    inspect->add_option("file", inspect_path, "tensor file")->required();

    BenchOptions bench_opt;
    auto* bench = app.add_subcommand("bench", "measure conversion throughput");
    bench->add_option("--points", bench_opt.points, "points per synthetic cloud");
    bench->add_option("--clouds", bench_opt.clouds, "clouds per batch");
    bench->add_option("--resolution", bench_opt.resolution, "resolution factor R");
    bench->add_option("--threads", bench_opt.threads, "comma-separated thread counts");
    bench->add_option("--seed", bench_opt.seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (convert->parsed()) return cmd_convert(convert_opt);
        if (split->parsed()) return cmd_split(split_opt);
        if (archgen->parsed()) return cmd_archgen(archgen_opt);
        if (inspect->parsed()) return cmd_inspect(inspect_path);
        if (bench->parsed()) return cmd_bench(bench_opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
