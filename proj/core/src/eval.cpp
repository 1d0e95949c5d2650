#include "nirfuse/eval.hpp"

#include <chrono>

#include "nirfuse/errors.hpp"

namespace nirfuse {

std::vector<long> count_matches(const ColorImage& img, const std::vector<TransformKind>& transforms,
                                const EvalOptions& opts) {
    const Plane luma = luminance(img);
    const DescriptorSet da = dense_sift(luma, opts.bin_size, opts.step);

    std::vector<long> counts;
    counts.reserve(transforms.size());
    for (const TransformKind t : transforms) {
        const ColorImage timg = apply_transform(img, t);
        const Plane tluma = luminance(timg);
        DescriptorSet db;
        if (t == TransformKind::Rot45) {
            const Plane mask = transform_valid_mask(img.width(), img.height(), t);
            db = dense_sift_masked(tluma, mask, opts.bin_size, opts.step);
        } else {
            db = dense_sift(tluma, opts.bin_size, opts.step);
        }
        const MatchSet ms = match_descriptors(da, db, opts.match_threshold);
        counts.push_back(static_cast<long>(ms.pairs.size()));
    }
    return counts;
}

std::optional<double> relative_change(const std::vector<long>& fused_counts,
                                      const std::vector<long>& rgb_counts) {
    if (fused_counts.size() != rgb_counts.size()) {
        throw ShapeError("relative_change: transform sets differ");
    }
    long sum_fused = 0, sum_rgb = 0;
    for (long c : fused_counts) sum_fused += c;
    for (long c : rgb_counts) sum_rgb += c;
    if (sum_rgb == 0) return std::nullopt;
    return 100.0 * static_cast<double>(sum_fused - sum_rgb) / static_cast<double>(sum_rgb);
}

std::vector<EvalRow> evaluate_pair(const ColorImage& rgb, const Plane& nir,
                                   const std::vector<FusionMethod>& methods,
                                   const std::vector<TransformKind>& transforms,
                                   const EvalOptions& opts, const std::string& image_id) {
    std::vector<EvalRow> rows;
    rows.reserve(methods.size() + 1);

    EvalRow baseline;
    baseline.image_id = image_id;
    baseline.method = "rgb";
    baseline.counts = count_matches(rgb, transforms, opts);
    baseline.rel_change = relative_change(baseline.counts, baseline.counts); // 0, or empty
    baseline.mse_value = 0.0;
    baseline.psnr_db = psnr_from_mse(0.0);
    rows.push_back(baseline);

    for (const FusionMethod& m : methods) {
        EvalRow row;
        row.image_id = image_id;
        row.method = to_string(m.tag);
        try {
            const auto t0 = std::chrono::steady_clock::now();
            const FuseResult fused = fuse(rgb, nir, m);
            const auto t1 = std::chrono::steady_clock::now();
            row.fuse_time_sec = std::chrono::duration<double>(t1 - t0).count();
            row.clamped_pixels = fused.clamped_pixels;
            row.counts = count_matches(fused.image, transforms, opts);
            row.rel_change = relative_change(row.counts, baseline.counts);
            row.mse_value = mse(fused.image, rgb);
            row.psnr_db = psnr_from_mse(row.mse_value);
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace nirfuse
