#include "nirfuse/image_io.hpp"

#include <bit>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include <jpeglib.h>
#include <png.h>
#include <tiffio.h>

#include "nirfuse/errors.hpp"

namespace nirfuse {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr fp(std::fopen(path.string().c_str(), mode));
    if (!fp) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return fp;
}

// Interleaved decode buffer in [0,1]; channels is 1 or 3.
struct RawImage {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<double> data;
};

enum class Sniffed { Png, Jpeg, Tiff, Unknown };

Sniffed sniff(std::FILE* fp) {
    unsigned char magic[8] = {};
    const std::size_t got = std::fread(magic, 1, sizeof(magic), fp);
    std::rewind(fp);
    if (got >= 8 && std::memcmp(magic, "\x89PNG\r\n\x1a\n", 8) == 0) return Sniffed::Png;
    if (got >= 3 && magic[0] == 0xFF && magic[1] == 0xD8 && magic[2] == 0xFF) return Sniffed::Jpeg;
    if (got >= 4 && (std::memcmp(magic, "II*\0", 4) == 0 || std::memcmp(magic, "MM\0*", 4) == 0)) return Sniffed::Tiff;
    return Sniffed::Unknown;
}

// ---------------------------------------------------------------- PNG ----

RawImage decode_png(std::FILE* fp, const std::string& name) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error("libpng init failed");
    }

    RawImage out;
    std::vector<unsigned char> row;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("PNG decode failed for '" + name + "'");
    }

    png_init_io(png, fp);
    png_read_info(png, info);

    const png_byte color_type = png_get_color_type(png, info);
    png_byte bit_depth = png_get_bit_depth(png, info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    if (bit_depth == 16 && std::endian::native == std::endian::little) png_set_swap(png);
    png_read_update_info(png, info);

    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.channels = png_get_channels(png, info);
    bit_depth = png_get_bit_depth(png, info);

    if (out.channels != 1 && out.channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("PNG with " + std::to_string(out.channels) + " channels not supported: '" + name + "'");
    }

    const double scale = bit_depth == 16 ? 1.0 / 65535.0 : 1.0 / 255.0;
    out.data.resize(static_cast<std::size_t>(out.width) * out.height * out.channels);
    row.resize(png_get_rowbytes(png, info));

    for (int y = 0; y < out.height; ++y) {
        png_read_row(png, row.data(), nullptr);
        double* dst = out.data.data() + static_cast<std::size_t>(y) * out.width * out.channels;
        const std::size_t samples = static_cast<std::size_t>(out.width) * out.channels;
        if (bit_depth == 16) {
            const auto* src = reinterpret_cast<const std::uint16_t*>(row.data());
            for (std::size_t i = 0; i < samples; ++i) dst[i] = src[i] * scale;
        } else {
            for (std::size_t i = 0; i < samples; ++i) dst[i] = row[i] * scale;
        }
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

// --------------------------------------------------------------- JPEG ----

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
};

void jpeg_error_exit_throw(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    longjmp(err->jump, 1);
}

RawImage decode_jpeg(std::FILE* fp, const std::string& name) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit_throw;

    RawImage out;
    std::vector<unsigned char> row;
    if (setjmp(jerr.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw FormatError("JPEG decode failed for '" + name + "'");
    }

    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, fp);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = cinfo.jpeg_color_space == JCS_GRAYSCALE ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);

    out.width = static_cast<int>(cinfo.output_width);
    out.height = static_cast<int>(cinfo.output_height);
    out.channels = cinfo.output_components;
    out.data.resize(static_cast<std::size_t>(out.width) * out.height * out.channels);
    row.resize(static_cast<std::size_t>(out.width) * out.channels);

    constexpr double scale = 1.0 / 255.0;
    while (cinfo.output_scanline < cinfo.output_height) {
        unsigned char* rowp = row.data();
        const int y = static_cast<int>(cinfo.output_scanline);
        jpeg_read_scanlines(&cinfo, &rowp, 1);
        double* dst = out.data.data() + static_cast<std::size_t>(y) * out.width * out.channels;
        for (std::size_t i = 0; i < row.size(); ++i) dst[i] = row[i] * scale;
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return out;
}

// --------------------------------------------------------------- TIFF ----

struct TiffCloser {
    void operator()(TIFF* t) const {
        if (t) TIFFClose(t);
    }
};

RawImage decode_tiff(const std::filesystem::path& path) {
    TIFFSetErrorHandler(nullptr);
    TIFFSetWarningHandler(nullptr);
    std::unique_ptr<TIFF, TiffCloser> tif(TIFFOpen(path.string().c_str(), "r"));
    if (!tif) throw FormatError("TIFF decode failed for '" + path.string() + "'");

    std::uint32_t w = 0, h = 0;
    std::uint16_t bps = 1, spp = 1, planar = PLANARCONFIG_CONTIG, sf = SAMPLEFORMAT_UINT;
    TIFFGetField(tif.get(), TIFFTAG_IMAGEWIDTH, &w);
    TIFFGetField(tif.get(), TIFFTAG_IMAGELENGTH, &h);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_BITSPERSAMPLE, &bps);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLESPERPIXEL, &spp);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_PLANARCONFIG, &planar);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLEFORMAT, &sf);

    if (w == 0 || h == 0) throw FormatError("TIFF with empty dimensions: '" + path.string() + "'");
    if (bps != 8 && bps != 16) {
        throw FormatError("TIFF bit depth " + std::to_string(bps) + " not supported: '" + path.string() + "'");
    }
    if (sf != SAMPLEFORMAT_UINT && sf != SAMPLEFORMAT_VOID) {
        throw FormatError("non-integer TIFF samples not supported: '" + path.string() + "'");
    }
    if (spp != 1 && spp != 3 && spp != 4) {
        throw FormatError("TIFF with " + std::to_string(spp) + " samples/pixel not supported: '" + path.string() + "'");
    }
    if (spp > 1 && planar != PLANARCONFIG_CONTIG) {
        throw FormatError("planar (non-interleaved) TIFF not supported: '" + path.string() + "'");
    }
    if (TIFFIsTiled(tif.get())) {
        throw FormatError("tiled TIFF not supported: '" + path.string() + "'");
    }

    RawImage out;
    out.width = static_cast<int>(w);
    out.height = static_cast<int>(h);
    out.channels = spp >= 3 ? 3 : 1;
    out.data.resize(static_cast<std::size_t>(out.width) * out.height * out.channels);

    std::vector<unsigned char> row(TIFFScanlineSize(tif.get()));
    const double scale = bps == 16 ? 1.0 / 65535.0 : 1.0 / 255.0;
    for (std::uint32_t y = 0; y < h; ++y) {
        if (TIFFReadScanline(tif.get(), row.data(), y) < 0) {
            throw FormatError("TIFF scanline read failed for '" + path.string() + "'");
        }
        double* dst = out.data.data() + static_cast<std::size_t>(y) * out.width * out.channels;
        for (std::uint32_t x = 0; x < w; ++x) {
            for (int c = 0; c < out.channels; ++c) {
                const std::size_t si = static_cast<std::size_t>(x) * spp + c;
                const double v = bps == 16 ? reinterpret_cast<const std::uint16_t*>(row.data())[si] * scale
                                           : row[si] * scale;
                dst[static_cast<std::size_t>(x) * out.channels + c] = v;
            }
        }
    }
    return out;
}

RawImage decode(const std::filesystem::path& path) {
    FilePtr fp = open_file(path, "rb");
    switch (sniff(fp.get())) {
        case Sniffed::Png:
            return decode_png(fp.get(), path.string());
        case Sniffed::Jpeg:
            return decode_jpeg(fp.get(), path.string());
        case Sniffed::Tiff:
            fp.reset();
            return decode_tiff(path);
        case Sniffed::Unknown:
            break;
    }
    throw FormatError("unsupported raster format: '" + path.string() + "'");
}

} // namespace

Plane load_gray(const std::filesystem::path& path) {
    const RawImage raw = decode(path);
    Plane out(raw.width, raw.height);
    if (raw.channels == 1) {
        out.data = raw.data;
    } else {
        for (std::size_t i = 0, n = out.size(); i < n; ++i) {
            const double* px = raw.data.data() + i * 3;
            out.data[i] = clamp01(kLumaR * px[0] + kLumaG * px[1] + kLumaB * px[2]);
        }
    }
    return out;
}

ColorImage load_color(const std::filesystem::path& path) {
    const RawImage raw = decode(path);
    if (raw.channels != 3) {
        throw FormatError("grayscale input where color is required: '" + path.string() + "'");
    }
    ColorImage img;
    img.r = Plane(raw.width, raw.height);
    img.g = Plane(raw.width, raw.height);
    img.b = Plane(raw.width, raw.height);
    for (std::size_t i = 0, n = img.r.size(); i < n; ++i) {
        img.r.data[i] = raw.data[i * 3 + 0];
        img.g.data[i] = raw.data[i * 3 + 1];
        img.b.data[i] = raw.data[i * 3 + 2];
    }
    return img;
}

namespace {

unsigned char to_byte(double v) {
    return static_cast<unsigned char>(std::lround(clamp01(v) * 255.0));
}

void write_png8(const std::filesystem::path& path, int width, int height, int channels,
                const std::vector<unsigned char>& interleaved) {
    FilePtr fp = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG write failed for '" + path.string() + "'");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, width, height, 8,
                 channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < height; ++y) {
        png_write_row(png, const_cast<unsigned char*>(interleaved.data()) +
                               static_cast<std::size_t>(y) * width * channels);
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

} // namespace

void save_png(const std::filesystem::path& path, const ColorImage& img) {
    std::vector<unsigned char> buf(static_cast<std::size_t>(img.width()) * img.height() * 3);
    for (std::size_t i = 0, n = img.r.size(); i < n; ++i) {
        buf[i * 3 + 0] = to_byte(img.r.data[i]);
        buf[i * 3 + 1] = to_byte(img.g.data[i]);
        buf[i * 3 + 2] = to_byte(img.b.data[i]);
    }
    write_png8(path, img.width(), img.height(), 3, buf);
}

void save_png(const std::filesystem::path& path, const Plane& gray) {
    std::vector<unsigned char> buf(gray.size());
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = to_byte(gray.data[i]);
    write_png8(path, gray.width, gray.height, 1, buf);
}

} // namespace nirfuse
