#include "nirfuse/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include <json.hpp>

#include "nirfuse/errors.hpp"
#include "nirfuse/image_io.hpp"
#include "nirfuse/version.hpp"

namespace nirfuse {

namespace {

using nlohmann::json;

std::string iso_timestamp_utc() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string sanitize_id(const std::string& id) {
    std::string out;
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '.' || c == '-';
        out += ok ? c : '_';
    }
    // keep distinct ids distinct after substitution
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : id) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char tag[10];
    std::snprintf(tag, sizeof(tag), "-%08x", static_cast<unsigned>(h & 0xffffffffu));
    return out + tag;
}

struct Task {
    std::size_t pair_index;
    std::string method; // "rgb" or a fusion tag
};

json row_to_json(const EvalRow& row) {
    json j;
    j["schema"] = 1;
    j["image_id"] = row.image_id;
    j["method"] = row.method;
    j["counts"] = row.counts;
    j["mse"] = row.mse_value;
    j["clamped_pixels"] = row.clamped_pixels;
    j["fuse_time_sec"] = row.fuse_time_sec;
    j["error"] = row.error;
    return j;
}

std::optional<EvalRow> row_from_cache(const std::filesystem::path& file, const std::string& id,
                                      const std::string& method, std::size_t n_transforms) {
    std::ifstream in(file);
    if (!in) return std::nullopt;
    json j;
    try {
        in >> j;
        if (j.at("schema").get<int>() != 1) return std::nullopt;
        if (j.at("image_id").get<std::string>() != id) return std::nullopt;
        if (j.at("method").get<std::string>() != method) return std::nullopt;
        EvalRow row;
        row.image_id = id;
        row.method = method;
        row.counts = j.at("counts").get<std::vector<long>>();
        row.mse_value = j.at("mse").get<double>();
        row.clamped_pixels = j.at("clamped_pixels").get<long>();
        row.fuse_time_sec = j.at("fuse_time_sec").get<double>();
        row.error = j.at("error").get<std::string>();
        if (row.error.empty() && row.counts.size() != n_transforms) return std::nullopt;
        row.psnr_db = psnr_from_mse(row.mse_value);
        return row;
    } catch (const json::exception&) {
        return std::nullopt;
    }
}

void write_cache(const std::filesystem::path& file, const EvalRow& row) {
    const std::filesystem::path tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) return; // cache is best-effort
        out << row_to_json(row).dump(2) << "\n";
    }
    std::error_code ec;
    std::filesystem::rename(tmp, file, ec);
}

} // namespace

RunOutcome run_eval(const RunConfig& cfg, std::ostream& log) {
    namespace fs = std::filesystem;
    RunOutcome outcome;

    std::vector<PairEntry> pairs = cfg.manifest.empty()
                                       ? discover_pairs(cfg.dataset_root, &outcome.warnings)
                                       : read_manifest(cfg.manifest);
    if (cfg.max_pairs > 0 && static_cast<int>(pairs.size()) > cfg.max_pairs) {
        pairs.resize(cfg.max_pairs);
    }
    outcome.pairs_total = static_cast<int>(pairs.size());

    if (cfg.methods.empty()) {
        throw ConfigError("eval needs at least one fusion method");
    }

    const std::string hash = config_hash(cfg);
    const fs::path cache_dir = cfg.output_dir / "cache";
    fs::create_directories(cache_dir);
    if (cfg.emit_images) fs::create_directories(cfg.output_dir / "images");

    // Task grid: baseline first, then each configured method, per pair.
    std::vector<std::string> row_methods = {"rgb"};
    for (FusionTag t : cfg.methods) row_methods.push_back(to_string(t));
    std::vector<Task> tasks;
    tasks.reserve(pairs.size() * row_methods.size());
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
        for (const std::string& m : row_methods) tasks.push_back({pi, m});
    }

    std::vector<EvalRow> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<int> cache_hits{0};
    std::mutex log_mutex;

    auto run_task = [&](const Task& task) {
        const PairEntry& pair = pairs[task.pair_index];
        EvalRow row;
        row.image_id = pair.id;
        row.method = task.method;

        const fs::path cache_file =
            cache_dir / (sanitize_id(pair.id) + "__" + task.method + "__" + hash + ".json");
        if (!cfg.emit_images) {
            if (auto cached = row_from_cache(cache_file, pair.id, task.method, cfg.transforms.size())) {
                cache_hits.fetch_add(1, std::memory_order_relaxed);
                return *cached;
            }
        }

        try {
            const ColorImage rgb = load_color(pair.rgb);
            if (task.method == "rgb") {
                row.counts = count_matches(rgb, cfg.transforms, cfg.eval);
                row.mse_value = 0.0;
                row.psnr_db = psnr_from_mse(0.0);
            } else {
                const Plane nir = load_gray(pair.nir);
                const FusionMethod m = cfg.method(fusion_tag_from_string(task.method));
                const auto t0 = std::chrono::steady_clock::now();
                const FuseResult fused = fuse(rgb, nir, m);
                const auto t1 = std::chrono::steady_clock::now();
                row.fuse_time_sec = std::chrono::duration<double>(t1 - t0).count();
                row.clamped_pixels = fused.clamped_pixels;
                row.counts = count_matches(fused.image, cfg.transforms, cfg.eval);
                row.mse_value = mse(fused.image, rgb);
                row.psnr_db = psnr_from_mse(row.mse_value);
                if (cfg.emit_images) {
                    save_png(cfg.output_dir / "images" / (sanitize_id(pair.id) + "__" + task.method + ".png"),
                             fused.image);
                }
            }
        } catch (const std::exception& e) {
            row.error = e.what();
            std::lock_guard<std::mutex> lk(log_mutex);
            log << "[" << pair.id << " / " << task.method << "] failed: " << e.what() << "\n";
        }
        write_cache(cache_file, row);
        return row;
    };

    const int threads = std::max(1, cfg.threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) results[i] = run_task(tasks[i]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                    if (i >= tasks.size()) return;
                    results[i] = run_task(tasks[i]);
                }
            });
        }
        for (std::thread& t : pool) t.join();
    }
    outcome.cache_hits = cache_hits.load();

    // Deterministic assembly: tasks are already in (pair, method) order.
    Report& report = outcome.report;
    report.version = kVersion;
    report.config_hash = hash;
    report.timestamp = iso_timestamp_utc();
    for (TransformKind t : cfg.transforms) report.transform_names.push_back(to_string(t));
    report.method_order = row_methods;

    const std::size_t per_pair = row_methods.size();
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
        EvalRow& baseline = results[pi * per_pair];
        bool all_failed = true;
        if (baseline.error.empty()) {
            baseline.rel_change = relative_change(baseline.counts, baseline.counts);
            if (!baseline.rel_change) {
                outcome.warnings.push_back("image '" + pairs[pi].id +
                                           "' has zero baseline matches; rel_change undefined");
            }
            all_failed = false;
        } else {
            ++outcome.rows_failed;
        }
        report.rows.push_back(baseline);
        for (std::size_t mi = 1; mi < per_pair; ++mi) {
            EvalRow& row = results[pi * per_pair + mi];
            if (row.error.empty()) {
                all_failed = false;
                if (baseline.error.empty()) {
                    row.rel_change = relative_change(row.counts, baseline.counts);
                }
            } else {
                ++outcome.rows_failed;
            }
            report.rows.push_back(row);
        }
        if (all_failed) ++outcome.pairs_failed;
    }
    compute_aggregates(report);

    write_per_image_csv(cfg.output_dir / "per_image.csv", report);
    write_timing_csv(cfg.output_dir / "timing.csv", report);
    write_summary_csv(cfg.output_dir / "summary.csv", report);
    {
        std::ofstream txt(cfg.output_dir / "summary.txt", std::ios::binary);
        txt << render_summary_text(report);
    }
    return outcome;
}

} // namespace nirfuse
