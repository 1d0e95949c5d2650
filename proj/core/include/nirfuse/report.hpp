#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nirfuse/eval.hpp"

namespace nirfuse {

struct MethodAggregate {
    std::string method;
    int rows_total = 0;
    int rows_failed = 0;  // error rows, excluded from every mean
    int rel_defined = 0;  // rows contributing to mean_rel_change
    double mean_rel_change = 0.0;
    double mean_time = 0.0;
    double mean_psnr = 0.0;
    double mean_mse = 0.0;
};

/// A full evaluation run: per-image rows plus the Table-1-shaped aggregate.
struct Report {
    std::string version;
    std::string config_hash;
    std::string timestamp; // the one non-deterministic header line
    std::vector<std::string> transform_names;
    std::vector<std::string> method_order; // "rgb" first, then configured methods
    std::vector<EvalRow> rows;             // sorted by (image_id, method_order)
    std::vector<MethodAggregate> aggregates;
};

/// Recomputes `aggregates` from `rows` (fixed row order, so the sums are
/// reproducible bit-for-bit).
void compute_aggregates(Report& report);

/// Canonical per-image CSV: every deterministic EvalRow field. Fuse times
/// go to the timing CSV instead - wall-clock measurements would break the
/// byte-reproducibility of this file.
void write_per_image_csv(const std::filesystem::path& path, const Report& report);

/// Wall-clock fuse times per row; diagnostic, not reproducible run to run.
void write_timing_csv(const std::filesystem::path& path, const Report& report);

/// Aggregate summary, one column per method plus reserved `schaul-ext` /
/// `farbman-ext` slots for externally produced numbers.
void write_summary_csv(const std::filesystem::path& path, const Report& report);

/// Human-readable aligned table of the same summary.
std::string render_summary_text(const Report& report);

/// Reads a per-image CSV back into a Report (rows, config hash, transform
/// names, method order). Pair with read_timing_csv to restore times.
Report read_per_image_csv(const std::filesystem::path& path);

/// Merges fuse times from a timing CSV into matching rows; rows without an
/// entry keep 0. Returns the number of rows updated.
int read_timing_csv(const std::filesystem::path& path, Report& report);

} // namespace nirfuse
