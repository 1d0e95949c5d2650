#pragma once

#include <string>
#include <vector>

#include "nirfuse/image.hpp"

namespace nirfuse {

enum class TransformKind { Rot45, Rot90, Rot180, Scale050, Scale075 };

/// Canonical spellings: rot45, rot90, rot180, scale050, scale075.
std::string to_string(TransformKind t);
TransformKind transform_from_string(const std::string& s);
std::vector<TransformKind> default_transforms();

/// Synthetic evaluation transforms. ROT90/ROT180 are exact pixel
/// permutations (ROT90 swaps dimensions); SCALE_* resizes to
/// round(dim * factor) with bilinear sampling; ROT45 rotates about the image
/// center onto the enlarged bounding-box canvas with bilinear sampling and
/// zero fill.
Plane apply_transform(const Plane& src, TransformKind t);
ColorImage apply_transform(const ColorImage& src, TransformKind t);

/// 1.0 where the transformed pixel is backed by source data, 0.0 where it is
/// zero fill. Only ROT45 produces fill pixels.
Plane transform_valid_mask(int width, int height, TransformKind t);

} // namespace nirfuse
