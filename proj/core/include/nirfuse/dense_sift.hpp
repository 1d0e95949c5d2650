#pragma once

#include <vector>

#include "nirfuse/image.hpp"

namespace nirfuse {

/// Dense SIFT descriptors on a regular grid. Each descriptor is a
/// 4x4-spatial-bin x 8-orientation-bin histogram (128 components, layout
/// [by][bx][orientation]) of bilinearly weighted gradient magnitudes over a
/// flat 4*bin_size window, normalized / clamped at 0.2 / renormalized.
/// Zero-gradient windows keep the all-zero descriptor.
struct DescriptorSet {
    int bin_size = 8;
    int step = 4;
    std::vector<float> descriptors; // 128 per grid point
    std::vector<float> center_x;    // window centers, pixels
    std::vector<float> center_y;

    std::size_t count() const { return center_x.size(); }
    const float* descriptor(std::size_t i) const { return descriptors.data() + i * 128; }
};

/// Number of grid points per axis: (extent - 4*bin_size) / step + 1.
int dense_sift_grid_count(int extent, int bin_size, int step);

/// Throws SizeError when the plane is smaller than 4*bin_size on either axis.
DescriptorSet dense_sift(const Plane& luma, int bin_size = 8, int step = 4);

/// As dense_sift, but descriptors whose support window (plus the one-pixel
/// central-difference halo) touches a masked-out pixel (mask < 0.5) are
/// dropped from the set.
DescriptorSet dense_sift_masked(const Plane& luma, const Plane& mask, int bin_size = 8,
                                int step = 4);

} // namespace nirfuse
