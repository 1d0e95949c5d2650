#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <png.h>
#include <tiffio.h>

#include "nirfuse/errors.hpp"
#include "nirfuse/image.hpp"
#include "nirfuse/image_io.hpp"
#include "support/synth.hpp"
#include "support/tmpdir.hpp"

using namespace nirfuse;

namespace {

// Fixture writers, independent of the library's own encoders.

void write_png16_gray(const std::filesystem::path& path, int w, int h,
                      const std::vector<std::uint16_t>& samples) {
    std::FILE* fp = std::fopen(path.string().c_str(), "wb");
    REQUIRE(fp != nullptr);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    REQUIRE(setjmp(png_jmpbuf(png)) == 0);
    png_init_io(png, fp);
    png_set_IHDR(png, info, w, h, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<std::uint8_t> row(static_cast<std::size_t>(w) * 2);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::uint16_t v = samples[static_cast<std::size_t>(y) * w + x];
            row[x * 2] = static_cast<std::uint8_t>(v >> 8); // big-endian per PNG
            row[x * 2 + 1] = static_cast<std::uint8_t>(v & 0xff);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

void write_tiff16_gray(const std::filesystem::path& path, int w, int h,
                       const std::vector<std::uint16_t>& samples) {
    TIFF* tif = TIFFOpen(path.string().c_str(), "w");
    REQUIRE(tif != nullptr);
    TIFFSetField(tif, TIFFTAG_IMAGEWIDTH, w);
    TIFFSetField(tif, TIFFTAG_IMAGELENGTH, h);
    TIFFSetField(tif, TIFFTAG_BITSPERSAMPLE, 16);
    TIFFSetField(tif, TIFFTAG_SAMPLESPERPIXEL, 1);
    TIFFSetField(tif, TIFFTAG_PHOTOMETRIC, PHOTOMETRIC_MINISBLACK);
    TIFFSetField(tif, TIFFTAG_PLANARCONFIG, PLANARCONFIG_CONTIG);
    TIFFSetField(tif, TIFFTAG_ROWSPERSTRIP, 1);
    for (int y = 0; y < h; ++y) {
        REQUIRE(TIFFWriteScanline(tif, const_cast<std::uint16_t*>(samples.data() + static_cast<std::size_t>(y) * w), y) == 1);
    }
    TIFFClose(tif);
}

ColorImage make_rgb(int w, int h, double r, double g, double b) {
    return {Plane(w, h, r), Plane(w, h, g), Plane(w, h, b)};
}

double max_abs_diff(const Plane& a, const Plane& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

} // namespace

TEST_CASE("rgb_to_ycbcr maps the achromatic axis to zero chroma") {
    for (double v : {0.0, 0.25, 0.5, 1.0}) {
        const LumaChroma lc = rgb_to_ycbcr(make_rgb(3, 2, v, v, v));
        CHECK(lc.y(0, 0) == doctest::Approx(v).epsilon(1e-12));
        CHECK(lc.cb(1, 1) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(lc.cr(2, 0) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("rgb_to_ycbcr of pure red matches the BT.601 matrix") {
    const LumaChroma lc = rgb_to_ycbcr(make_rgb(1, 1, 1.0, 0.0, 0.0));
    CHECK(lc.y(0, 0) == doctest::Approx(0.299).epsilon(1e-9));
    CHECK(lc.cb(0, 0) == doctest::Approx(-0.299 / 1.772).epsilon(1e-9)); // ~ -0.1687
    CHECK(lc.cr(0, 0) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("ycbcr_to_rgb inverts the forward transform") {
    LumaChroma lc;
    lc.y = Plane(1, 1, 0.299);
    lc.cb = Plane(1, 1, -0.299 / 1.772);
    lc.cr = Plane(1, 1, 0.5);
    const ColorImage img = ycbcr_to_rgb(lc);
    CHECK(img.r(0, 0) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(img.g(0, 0) == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(img.b(0, 0) == doctest::Approx(0.0).epsilon(1e-3));
}

TEST_CASE("colorspace round-trip is identity within 1e-3") {
    const ColorImage img = synth::natural_color(37, 23, 5);
    const ColorImage back = ycbcr_to_rgb(rgb_to_ycbcr(img));
    CHECK(max_abs_diff(img.r, back.r) < 1e-3);
    CHECK(max_abs_diff(img.g, back.g) < 1e-3);
    CHECK(max_abs_diff(img.b, back.b) < 1e-3);
}

TEST_CASE("mse examples and symmetry") {
    const ColorImage a = make_rgb(4, 4, 0.5, 0.5, 0.5);
    const ColorImage b = make_rgb(4, 4, 0.25, 0.25, 0.25);
    CHECK(mse(a, a) == 0.0);
    CHECK(mse(a, b) == doctest::Approx(0.0625).epsilon(1e-12));
    const ColorImage x = synth::natural_color(9, 7, 2);
    const ColorImage y = synth::natural_color(9, 7, 3);
    CHECK(mse(x, y) == mse(y, x));
    CHECK(mse(x, x) == 0.0);
    CHECK_THROWS_AS((void)mse(x, synth::natural_color(8, 7, 2)), ShapeError);
}

TEST_CASE("psnr follows 10*log10(1/mse) exactly and handles mse == 0") {
    const ColorImage a = make_rgb(4, 4, 0.5, 0.5, 0.5);
    const ColorImage b = make_rgb(4, 4, 0.25, 0.25, 0.25);
    CHECK(psnr(a, a) == std::numeric_limits<double>::infinity());
    CHECK(psnr(a, b) == doctest::Approx(12.0412).epsilon(1e-4));
    CHECK(psnr(a, b) == 10.0 * std::log10(1.0 / mse(a, b)));
    CHECK(psnr_from_mse(6.45e-4) == doctest::Approx(31.90).epsilon(1e-3));

    const ColorImage x = synth::natural_color(9, 7, 2);
    const ColorImage y = synth::natural_color(9, 7, 3);
    CHECK(psnr(x, y) == psnr_from_mse(mse(x, y)));
}

TEST_CASE("8-bit PNG save/load round-trip is idempotent") {
    synth::TempDir tmp("img_png8");
    const ColorImage img = synth::natural_color(31, 17, 11);
    save_png(tmp / "a.png", img);
    const ColorImage once = load_color(tmp / "a.png");
    save_png(tmp / "b.png", once);
    const ColorImage twice = load_color(tmp / "b.png");
    CHECK(max_abs_diff(once.r, twice.r) == 0.0);
    CHECK(max_abs_diff(once.g, twice.g) == 0.0);
    CHECK(max_abs_diff(once.b, twice.b) == 0.0);
    // quantization error of the first write stays within half a step
    CHECK(max_abs_diff(img.r, once.r) <= 0.5 / 255.0 + 1e-12);
}

TEST_CASE("full-scale and zero 8-bit samples map to 1 and 0") {
    synth::TempDir tmp("img_scale");
    Plane p(2, 1);
    p(0, 0) = 1.0;
    p(1, 0) = 0.0;
    save_png(tmp / "v.png", p);
    const Plane back = load_gray(tmp / "v.png");
    CHECK(back(0, 0) == 1.0);
    CHECK(back(1, 0) == 0.0);
}

TEST_CASE("16-bit PNG and TIFF samples scale by 1/65535") {
    synth::TempDir tmp("img_16bit");
    const std::vector<std::uint16_t> samples = {0, 32768, 65535, 1234};
    write_png16_gray(tmp / "p.png", 2, 2, samples);
    write_tiff16_gray(tmp / "t.tif", 2, 2, samples);
    for (const auto& file : {tmp / "p.png", tmp / "t.tif"}) {
        const Plane p = load_gray(file);
        CHECK(p(0, 0) == 0.0);
        CHECK(p(1, 0) == doctest::Approx(32768.0 / 65535.0).epsilon(1e-12));
        CHECK(p(0, 1) == 1.0);
        CHECK(p(1, 1) == doctest::Approx(1234.0 / 65535.0).epsilon(1e-12));
    }
}

TEST_CASE("load_gray reduces color inputs with the luminance weights") {
    synth::TempDir tmp("img_reduce");
    const ColorImage img = synth::natural_color(9, 9, 4);
    save_png(tmp / "c.png", img);
    const ColorImage color = load_color(tmp / "c.png");
    const Plane gray = load_gray(tmp / "c.png");
    CHECK(max_abs_diff(gray, luminance(color)) < 1e-12);
}

TEST_CASE("load_color rejects grayscale files") {
    synth::TempDir tmp("img_rejects");
    save_png(tmp / "g.png", Plane(5, 5, 0.5));
    CHECK_THROWS_AS((void)load_color(tmp / "g.png"), FormatError);
}

TEST_CASE("loader errors: missing file vs unsupported format") {
    synth::TempDir tmp("img_errors");
    CHECK_THROWS_AS((void)load_gray(tmp / "nope.png"), IoError);
    std::ofstream(tmp / "junk.png") << "this is not a raster";
    CHECK_THROWS_AS((void)load_gray(tmp / "junk.png"), FormatError);
}

TEST_CASE("shape preserved through color load") {
    synth::TempDir tmp("img_shape");
    save_png(tmp / "s.png", synth::natural_color(24, 10, 6));
    const ColorImage img = load_color(tmp / "s.png");
    CHECK(img.width() == 24);
    CHECK(img.height() == 10);
    CHECK(img.g.width == 24);
    CHECK(img.b.height == 10);
}
