#pragma once

#include <iosfwd>

#include "nirfuse/config.hpp"
#include "nirfuse/dataset.hpp"
#include "nirfuse/report.hpp"

namespace nirfuse {

struct RunOutcome {
    Report report;
    int pairs_total = 0;
    int pairs_failed = 0; // every row of the pair errored
    int rows_failed = 0;
    int cache_hits = 0;
    std::vector<std::string> warnings;
};

/// Batch evaluation: discovers pairs (or reads the manifest), runs the
/// (pair x method) task grid on a small thread pool, assembles rows in a
/// deterministic order and writes per_image.csv / timing.csv / summary.csv /
/// summary.txt under cfg.output_dir.
///
/// Completed tasks are cached under output_dir/cache keyed by
/// (image_id, method, config hash); an interrupted run resumes from the
/// cache and reproduces the original report byte-for-byte.
RunOutcome run_eval(const RunConfig& cfg, std::ostream& log);

} // namespace nirfuse
