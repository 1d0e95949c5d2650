#pragma once

#include <filesystem>

#include "nirfuse/image.hpp"

namespace nirfuse {

/// Decodes PNG (8/16-bit), JPEG (8-bit) or TIFF (8/16-bit), sniffing the
/// format from the file's magic bytes. Samples map linearly to [0,1]
/// (16-bit: divide by 65535). Multi-channel inputs are reduced with the
/// BT.601 luminance weights. Throws IoError / FormatError.
Plane load_gray(const std::filesystem::path& path);

/// As load_gray but keeps three channels; single-channel files are rejected.
ColorImage load_color(const std::filesystem::path& path);

/// Writes an 8-bit PNG, round-to-nearest of v*255.
void save_png(const std::filesystem::path& path, const ColorImage& img);
void save_png(const std::filesystem::path& path, const Plane& gray);

} // namespace nirfuse
