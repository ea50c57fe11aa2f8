// Copyright (c) 2026 The texsg authors.
// SPDX-License-Identifier: Apache-2.0

#include "texsg/image.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>

#include "texsg/util.hpp"

namespace texsg {

bool Image::any_nan() const {
    for (const auto& p : pixels_)
        if (has_nan(p)) return true;
    return false;
}

double srgb_encode(double linear) {
    double v = std::clamp(linear, 0.0, 1.0);
    return v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

double srgb_decode(double encoded) {
    double v = std::clamp(encoded, 0.0, 1.0);
    return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

void write_pfm(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << "PF\n" << img.width() << " " << img.height() << "\n-1.0\n";
    std::vector<float> row(size_t(img.width()) * 3);
    for (int r = img.height() - 1; r >= 0; --r) {  // bottom-up
        for (int c = 0; c < img.width(); ++c) {
            const Rgb& p = img.at(r, c);
            row[c * 3 + 0] = float(p.x);
            row[c * 3 + 1] = float(p.y);
            row[c * 3 + 2] = float(p.z);
        }
        out.write(reinterpret_cast<const char*>(row.data()), row.size() * sizeof(float));
    }
}

Image read_pfm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::string magic;
    in >> magic;
    bool color = magic == "PF";
    if (!color && magic != "Pf") throw InputError(path + ": not a PFM file");
    int w = 0, h = 0;
    double scale = 0.0;
    in >> w >> h >> scale;
    in.get();  // single whitespace after header
    if (w <= 0 || h <= 0) throw InputError(path + ": bad PFM dimensions");
    bool little = scale < 0.0;
    int nc = color ? 3 : 1;
    std::vector<float> row(size_t(w) * nc);
    Image img(w, h);
    for (int r = h - 1; r >= 0; --r) {
        in.read(reinterpret_cast<char*>(row.data()), row.size() * sizeof(float));
        if (!in) throw InputError(path + ": truncated PFM data");
        for (int c = 0; c < w; ++c) {
            float v[3];
            for (int k = 0; k < nc; ++k) {
                float f = row[c * nc + k];
                if (!little) {  // byte-swap big-endian input
                    uint32_t u;
                    std::memcpy(&u, &f, 4);
                    u = __builtin_bswap32(u);
                    std::memcpy(&f, &u, 4);
                }
                v[k] = f;
            }
            img.at(r, c) = color ? Rgb{v[0], v[1], v[2]} : Rgb{v[0], v[0], v[0]};
        }
    }
    return img;
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

void write_png(const Image& img, const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw InputError("cannot write " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw NumericalError("libpng failure writing " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_byte> row(size_t(img.width()) * 3);
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            const Rgb& p = img.at(r, c);
            row[c * 3 + 0] = png_byte(std::lround(srgb_encode(p.x) * 255.0));
            row[c * 3 + 1] = png_byte(std::lround(srgb_encode(p.y) * 255.0));
            row[c * 3 + 2] = png_byte(std::lround(srgb_encode(p.z) * 255.0));
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

Image read_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw InputError("cannot open " + path);
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw InputError("libpng failure reading " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);
    int w = png_get_image_width(png, info);
    int h = png_get_image_height(png, info);
    std::vector<png_byte> row(size_t(w) * 3);
    Image img(w, h);
    for (int r = 0; r < h; ++r) {
        png_read_row(png, row.data(), nullptr);
        for (int c = 0; c < w; ++c)
            img.at(r, c) = {srgb_decode(row[c * 3 + 0] / 255.0),
                            srgb_decode(row[c * 3 + 1] / 255.0),
                            srgb_decode(row[c * 3 + 2] / 255.0)};
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

namespace {

Rgb rgbe_to_rgb(const unsigned char rgbe[4]) {
    if (rgbe[3] == 0) return {0, 0, 0};
    double f = std::ldexp(1.0, int(rgbe[3]) - (128 + 8));
    return {rgbe[0] * f, rgbe[1] * f, rgbe[2] * f};
}

}  // namespace

Image read_hdr(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("#?", 0) != 0)
        throw InputError(path + ": not a Radiance HDR file");
    while (std::getline(in, line) && !line.empty()) {
        // header lines (FORMAT=..., comments) until the blank separator
    }
    if (!std::getline(in, line)) throw InputError(path + ": missing resolution line");
    int w = 0, h = 0;
    if (std::sscanf(line.c_str(), "-Y %d +X %d", &h, &w) != 2 || w <= 0 || h <= 0)
        throw InputError(path + ": unsupported resolution line '" + line + "'");
    Image img(w, h);
    std::vector<unsigned char> scan(size_t(w) * 4);
    for (int r = 0; r < h; ++r) {
        unsigned char head[4];
        in.read(reinterpret_cast<char*>(head), 4);
        if (!in) throw InputError(path + ": truncated HDR data");
        if (head[0] == 2 && head[1] == 2 && (head[2] << 8 | head[3]) == w) {
            // New-style RLE: four separated component streams.
            for (int k = 0; k < 4; ++k) {
                int c = 0;
                while (c < w) {
                    int code = in.get();
                    if (code < 0) throw InputError(path + ": truncated HDR scanline");
                    if (code > 128) {
                        int count = code - 128;
                        int val = in.get();
                        while (count-- > 0) scan[size_t(c++) * 4 + k] = (unsigned char)val;
                    } else {
                        int count = code;
                        while (count-- > 0) scan[size_t(c++) * 4 + k] = (unsigned char)in.get();
                    }
                }
            }
        } else {
            // Flat scanline; the first pixel was already consumed.
            std::memcpy(scan.data(), head, 4);
            in.read(reinterpret_cast<char*>(scan.data() + 4), (size_t(w) - 1) * 4);
            if (!in) throw InputError(path + ": truncated HDR data");
        }
        for (int c = 0; c < w; ++c) img.at(r, c) = rgbe_to_rgb(&scan[size_t(c) * 4]);
    }
    return img;
}

Image read_image(const std::string& path) {
    auto dotpos = path.find_last_of('.');
    std::string ext = dotpos == std::string::npos ? "" : path.substr(dotpos);
    for (auto& ch : ext) ch = char(std::tolower(ch));
    if (ext == ".pfm") return read_pfm(path);
    if (ext == ".png") return read_png(path);
    if (ext == ".hdr") return read_hdr(path);
    throw InputError("unsupported image format: " + path);
}

double psnr(const Image& a, const Image& b, double peak) {
    if (a.width() != b.width() || a.height() != b.height())
        throw InputError("psnr: image sizes differ");
    double se = 0.0;
    for (size_t i = 0; i < a.pixels().size(); ++i) {
        Vec3 d = a.pixels()[i] - b.pixels()[i];
        se += dot(d, d);
    }
    double mse = se / (a.pixels().size() * 3.0);
    if (mse <= 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

}  // namespace texsg
