// Copyright (c) 2026 The texsg authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "texsg/vec.hpp"

namespace texsg {

// Row-major linear-RGB raster. Row 0 is the top of the image.
class Image {
  public:
    Image() = default;
    Image(int width, int height, Rgb fill = {0, 0, 0})
        : width_(width), height_(height), pixels_(size_t(width) * height, fill) {}

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return pixels_.empty(); }

    Rgb& at(int row, int col) { return pixels_[size_t(row) * width_ + col]; }
    const Rgb& at(int row, int col) const { return pixels_[size_t(row) * width_ + col]; }

    std::vector<Rgb>& pixels() { return pixels_; }
    const std::vector<Rgb>& pixels() const { return pixels_; }

    bool any_nan() const;

  private:
    int width_ = 0, height_ = 0;
    std::vector<Rgb> pixels_;
};

double srgb_encode(double linear);
double srgb_decode(double encoded);

// Portable float map, 32-bit little-endian, bottom-up scanlines.
void write_pfm(const Image& img, const std::string& path);
Image read_pfm(const std::string& path);

// 8-bit RGB PNG; values are sRGB-encoded on write and linearized on read.
void write_png(const Image& img, const std::string& path);
Image read_png(const std::string& path);

// Radiance RGBE (.hdr), equirectangular convention left to the caller.
Image read_hdr(const std::string& path);

// Dispatch on extension: .pfm / .png / .hdr.
Image read_image(const std::string& path);

// Peak signal-to-noise ratio over linear RGB with the given peak value.
double psnr(const Image& a, const Image& b, double peak = 1.0);

}  // namespace texsg
