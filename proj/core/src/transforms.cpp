#include "nirfuse/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nirfuse/errors.hpp"

namespace nirfuse {

std::string to_string(TransformKind t) {
    switch (t) {
        case TransformKind::Rot45: return "rot45";
        case TransformKind::Rot90: return "rot90";
        case TransformKind::Rot180: return "rot180";
        case TransformKind::Scale050: return "scale050";
        case TransformKind::Scale075: return "scale075";
    }
    return "?";
}

TransformKind transform_from_string(const std::string& s) {
    if (s == "rot45") return TransformKind::Rot45;
    if (s == "rot90") return TransformKind::Rot90;
    if (s == "rot180") return TransformKind::Rot180;
    if (s == "scale050") return TransformKind::Scale050;
    if (s == "scale075") return TransformKind::Scale075;
    throw ConfigError("unknown transform '" + s +
                      "' (expected rot45, rot90, rot180, scale050 or scale075)");
}

std::vector<TransformKind> default_transforms() {
    return {TransformKind::Rot45, TransformKind::Rot90, TransformKind::Rot180,
            TransformKind::Scale050, TransformKind::Scale075};
}

namespace {

double bilinear(const Plane& p, double sx, double sy) {
    sx = std::min(std::max(sx, 0.0), static_cast<double>(p.width - 1));
    sy = std::min(std::max(sy, 0.0), static_cast<double>(p.height - 1));
    const int x0 = static_cast<int>(sx);
    const int y0 = static_cast<int>(sy);
    const int x1 = std::min(x0 + 1, p.width - 1);
    const int y1 = std::min(y0 + 1, p.height - 1);
    const double fx = sx - x0;
    const double fy = sy - y0;
    const double a = p(x0, y0) * (1.0 - fx) + p(x1, y0) * fx;
    const double b = p(x0, y1) * (1.0 - fx) + p(x1, y1) * fx;
    return a * (1.0 - fy) + b * fy;
}

Plane rot90(const Plane& src) {
    Plane out(src.height, src.width);
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            out(src.height - 1 - y, x) = src(x, y);
        }
    }
    return out;
}

Plane rot180(const Plane& src) {
    Plane out(src.width, src.height);
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            out(src.width - 1 - x, src.height - 1 - y) = src(x, y);
        }
    }
    return out;
}

Plane scale(const Plane& src, double factor) {
    const int ow = static_cast<int>(std::lround(src.width * factor));
    const int oh = static_cast<int>(std::lround(src.height * factor));
    Plane out(ow, oh);
    for (int y = 0; y < oh; ++y) {
        const double sy = (y + 0.5) / factor - 0.5;
        for (int x = 0; x < ow; ++x) {
            const double sx = (x + 0.5) / factor - 0.5;
            out(x, y) = bilinear(src, sx, sy);
        }
    }
    return out;
}

struct Rot45Geometry {
    int out_w, out_h;
    double cx_in, cy_in, cx_out, cy_out;
    double c, s;

    Rot45Geometry(int w, int h) {
        c = s = std::numbers::sqrt2 / 2.0;
        out_w = static_cast<int>(std::ceil(w * c + h * s));
        out_h = static_cast<int>(std::ceil(w * s + h * c));
        cx_in = (w - 1) / 2.0;
        cy_in = (h - 1) / 2.0;
        cx_out = (out_w - 1) / 2.0;
        cy_out = (out_h - 1) / 2.0;
    }

    // Inverse map: output pixel -> source coordinates.
    void source(int x, int y, double& sx, double& sy) const {
        const double dx = x - cx_out;
        const double dy = y - cy_out;
        sx = c * dx + s * dy + cx_in;
        sy = -s * dx + c * dy + cy_in;
    }
};

Plane rot45(const Plane& src) {
    const Rot45Geometry geo(src.width, src.height);
    Plane out(geo.out_w, geo.out_h, 0.0);
    for (int y = 0; y < geo.out_h; ++y) {
        for (int x = 0; x < geo.out_w; ++x) {
            double sx, sy;
            geo.source(x, y, sx, sy);
            if (sx >= 0.0 && sx <= src.width - 1 && sy >= 0.0 && sy <= src.height - 1) {
                out(x, y) = bilinear(src, sx, sy);
            }
        }
    }
    return out;
}

} // namespace

Plane apply_transform(const Plane& src, TransformKind t) {
    switch (t) {
        case TransformKind::Rot45: return rot45(src);
        case TransformKind::Rot90: return rot90(src);
        case TransformKind::Rot180: return rot180(src);
        case TransformKind::Scale050: return scale(src, 0.5);
        case TransformKind::Scale075: return scale(src, 0.75);
    }
    throw ConfigError("unknown transform kind");
}

ColorImage apply_transform(const ColorImage& src, TransformKind t) {
    return {apply_transform(src.r, t), apply_transform(src.g, t), apply_transform(src.b, t)};
}

Plane transform_valid_mask(int width, int height, TransformKind t) {
    if (t != TransformKind::Rot45) {
        // Dimensions follow the transform; contents are all-valid.
        switch (t) {
            case TransformKind::Rot90: return Plane(height, width, 1.0);
            case TransformKind::Rot180: return Plane(width, height, 1.0);
            case TransformKind::Scale050:
                return Plane(static_cast<int>(std::lround(width * 0.5)),
                             static_cast<int>(std::lround(height * 0.5)), 1.0);
            case TransformKind::Scale075:
                return Plane(static_cast<int>(std::lround(width * 0.75)),
                             static_cast<int>(std::lround(height * 0.75)), 1.0);
            default: break;
        }
    }
    const Rot45Geometry geo(width, height);
    Plane mask(geo.out_w, geo.out_h, 0.0);
    for (int y = 0; y < geo.out_h; ++y) {
        for (int x = 0; x < geo.out_w; ++x) {
            double sx, sy;
            geo.source(x, y, sx, sy);
            if (sx >= 0.0 && sx <= width - 1 && sy >= 0.0 && sy <= height - 1) {
                mask(x, y) = 1.0;
            }
        }
    }
    return mask;
}

} // namespace nirfuse
