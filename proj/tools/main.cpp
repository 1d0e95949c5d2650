// nirfuse command-line driver: fuse one RGB/NIR pair, batch-evaluate a
// dataset, or re-render a summary from a previous run's CSV.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nirfuse/config.hpp"
#include "nirfuse/errors.hpp"
#include "nirfuse/image_io.hpp"
#include "nirfuse/runner.hpp"
#include "nirfuse/version.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitInvalid = 2;

struct CliOverrides {
    nirfuse::KeyValues kv;
    void add(const std::string& key, const std::string& value) { kv.emplace_back(key, value); }
};

int run_fuse(const std::string& rgb_path, const std::string& nir_path, const std::string& method,
             const std::string& out_path, const std::string& config_file, const CliOverrides& ov) {
    nirfuse::RunConfig cfg = nirfuse::parse_config(config_file, ov.kv);
    const nirfuse::FusionMethod m = cfg.method(nirfuse::fusion_tag_from_string(method));

    const nirfuse::ColorImage rgb = nirfuse::load_color(rgb_path);
    const nirfuse::Plane nir = nirfuse::load_gray(nir_path);

    const auto t0 = std::chrono::steady_clock::now();
    const nirfuse::FuseResult fused = nirfuse::fuse(rgb, nir, m);
    const auto t1 = std::chrono::steady_clock::now();

    if (!out_path.empty()) {
        const fs::path out(out_path);
        if (out.has_parent_path()) fs::create_directories(out.parent_path());
        nirfuse::save_png(out, fused.image);
    }
    std::cout << "fused " << rgb.width() << "x" << rgb.height() << " pair with " << method << " in "
              << std::chrono::duration<double>(t1 - t0).count() << " s";
    if (fused.clamped_pixels > 0) std::cout << " (" << fused.clamped_pixels << " luminance samples clamped)";
    std::cout << "\n";
    return kExitOk;
}

int run_eval_cmd(const std::string& config_file, const CliOverrides& ov) {
    nirfuse::RunConfig cfg = nirfuse::parse_config(config_file, ov.kv);
    if (cfg.dataset_root.empty() && cfg.manifest.empty()) {
        throw nirfuse::ConfigError("eval needs --dataset (or a manifest)");
    }
    fs::create_directories(cfg.output_dir);
    const nirfuse::RunOutcome outcome = nirfuse::run_eval(cfg, std::cerr);

    for (const std::string& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << nirfuse::render_summary_text(outcome.report);
    std::cout << "pairs: " << outcome.pairs_total << " (" << outcome.pairs_failed << " failed entirely), "
              << "rows failed: " << outcome.rows_failed << ", cache hits: " << outcome.cache_hits << "\n"
              << "reports under " << cfg.output_dir.string() << "\n";

    if (outcome.pairs_failed == outcome.pairs_total) return kExitPartial;
    return outcome.rows_failed > 0 ? kExitPartial : kExitOk;
}

int run_report(const std::string& from_csv, const std::string& out_dir) {
    nirfuse::Report report = nirfuse::read_per_image_csv(from_csv);
    const fs::path timing = fs::path(from_csv).parent_path() / "timing.csv";
    if (fs::exists(timing)) nirfuse::read_timing_csv(timing, report);

    std::cout << nirfuse::render_summary_text(report);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        nirfuse::write_summary_csv(fs::path(out_dir) / "summary.csv", report);
        std::ofstream txt(fs::path(out_dir) / "summary.txt", std::ios::binary);
        txt << nirfuse::render_summary_text(report);
        std::cout << "summary rewritten under " << out_dir << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Visible/NIR image fusion via edge-preserving base-detail decomposition, "
                 "with dense-SIFT feature-quality evaluation"};
    app.set_version_flag("--version", std::string("nirfuse ") + nirfuse::kVersion);
    app.require_subcommand(1);

    // fuse ------------------------------------------------------------
    auto* fuse_cmd = app.add_subcommand("fuse", "Fuse one RGB/NIR pair to a PNG");
    std::string rgb_path, nir_path, method = "bfwls-avg", out_path, config_file;
    fuse_cmd->add_option("--rgb", rgb_path, "RGB input image")->required();
    fuse_cmd->add_option("--nir", nir_path, "NIR input image")->required();
    fuse_cmd->add_option("--method", method, "bfwls-avg | bfwls-max | swap-bf | swap-wls");
    fuse_cmd->add_option("--out", out_path, "output PNG path")->required();
    fuse_cmd->add_option("--config", config_file, "key=value config file");

    // eval ------------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("eval", "Batch fusion + feature evaluation over a dataset");
    std::string dataset, eval_config, methods_csv, transforms_csv, out_dir, manifest;
    int threads = -1, max_pairs = -1;
    bool emit_images = false;
    eval_cmd->add_option("--dataset", dataset, "dataset root (\"*_rgb/*_nir\" pairs)");
    eval_cmd->add_option("--config", eval_config, "key=value config file");
    eval_cmd->add_option("--methods", methods_csv, "comma-separated method tags");
    eval_cmd->add_option("--transforms", transforms_csv, "comma-separated transform tags");
    eval_cmd->add_option("--out-dir", out_dir, "report directory (default nirfuse-out)");
    eval_cmd->add_option("--threads", threads, "worker threads (or env NIRFUSE_THREADS)");
    eval_cmd->add_option("--max-pairs", max_pairs, "evaluate only the first N pairs");
    eval_cmd->add_option("--manifest", manifest, "pair list file (id,rgb_path,nir_path)");
    eval_cmd->add_flag("--emit-images", emit_images, "write fused PNGs next to the reports");

    // generic parameter overrides, shared by fuse and eval
    std::vector<std::string> set_kv;
    for (auto* cmd : {fuse_cmd, eval_cmd}) {
        cmd->add_option("--set", set_kv, "override any config key, e.g. --set lambda=0.25")
            ->take_all();
    }

    // report ----------------------------------------------------------
    auto* report_cmd = app.add_subcommand("report", "Re-render summaries from a per-image CSV");
    std::string from_csv, report_out;
    report_cmd->add_option("--from", from_csv, "per_image.csv of a previous run")->required();
    report_cmd->add_option("--out-dir", report_out, "rewrite summary files here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        CliOverrides ov;
        for (const std::string& kv : set_kv) {
            const std::size_t eq = kv.find('=');
            if (eq == std::string::npos) {
                throw nirfuse::ConfigError("--set expects key=value, got '" + kv + "'");
            }
            ov.add(kv.substr(0, eq), kv.substr(eq + 1));
        }

        if (fuse_cmd->parsed()) {
            return run_fuse(rgb_path, nir_path, method, out_path, config_file, ov);
        }
        if (eval_cmd->parsed()) {
            if (!dataset.empty()) ov.add("dataset_root", dataset);
            if (!methods_csv.empty()) ov.add("methods", methods_csv);
            if (!transforms_csv.empty()) ov.add("transforms", transforms_csv);
            if (!out_dir.empty()) ov.add("output_dir", out_dir);
            if (!manifest.empty()) ov.add("manifest", manifest);
            if (max_pairs >= 0) ov.add("max_pairs", std::to_string(max_pairs));
            if (threads >= 0) {
                ov.add("threads", std::to_string(threads));
            } else if (const char* env = std::getenv("NIRFUSE_THREADS")) {
                ov.add("threads", env);
            }
            if (emit_images) ov.add("emit_images", "true");
            return run_eval_cmd(eval_config, ov);
        }
        if (report_cmd->parsed()) {
            return run_report(from_csv, report_out);
        }
    } catch (const nirfuse::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPartial;
    } catch (const nirfuse::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPartial;
    }
    return kExitOk;
}
