// Copyright (c) 2026 The texsg authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "texsg/vec.hpp"

namespace texsg {

// Bilinear texture grid with clamp addressing; texel centers at (i+0.5)/size.
template <typename T>
struct Grid {
    int width = 1, height = 1;
    std::vector<T> texels{T{}};

    static Grid constant(const T& value, int w = 1, int h = 1) {
        Grid g;
        g.width = w;
        g.height = h;
        g.texels.assign(size_t(w) * h, value);
        return g;
    }

    T& at(int x, int y) { return texels[size_t(y) * width + x]; }
    const T& at(int x, int y) const { return texels[size_t(y) * width + x]; }

    T sample(const Vec2& uv) const {
        double fx = std::clamp(uv.x, 0.0, 1.0) * width - 0.5;
        double fy = std::clamp(uv.y, 0.0, 1.0) * height - 0.5;
        int x0 = int(std::floor(fx)), y0 = int(std::floor(fy));
        double tx = fx - x0, ty = fy - y0;
        int x1 = std::min(x0 + 1, width - 1), y1 = std::min(y0 + 1, height - 1);
        x0 = std::max(x0, 0);
        y0 = std::max(y0, 0);
        return at(x0, y0) * ((1 - tx) * (1 - ty)) + at(x1, y0) * (tx * (1 - ty)) +
               at(x0, y1) * ((1 - tx) * ty) + at(x1, y1) * (tx * ty);
    }

    // Bilinear footprint of a UV location: up to 4 (texel index, weight) pairs.
    struct Tap {
        int index;
        double weight;
    };
    int footprint(const Vec2& uv, Tap taps[4]) const {
        double fx = std::clamp(uv.x, 0.0, 1.0) * width - 0.5;
        double fy = std::clamp(uv.y, 0.0, 1.0) * height - 0.5;
        int x0 = int(std::floor(fx)), y0 = int(std::floor(fy));
        double tx = fx - x0, ty = fy - y0;
        int x1 = std::min(x0 + 1, width - 1), y1 = std::min(y0 + 1, height - 1);
        x0 = std::max(x0, 0);
        y0 = std::max(y0, 0);
        taps[0] = {y0 * width + x0, (1 - tx) * (1 - ty)};
        taps[1] = {y0 * width + x1, tx * (1 - ty)};
        taps[2] = {y1 * width + x0, (1 - tx) * ty};
        taps[3] = {y1 * width + x1, tx * ty};
        return 4;
    }
};

// Skin tone #E0AC69, the initial value for indirect hand illumination.
inline constexpr Rgb kDefaultIndirect{224.0 / 255.0, 172.0 / 255.0, 105.0 / 255.0};

struct Material {
    Grid<Rgb> albedo = Grid<Rgb>::constant(Rgb{0.5, 0.5, 0.5});
    Grid<double> roughness = Grid<double>::constant(0.5);
    Rgb specular_reflectance{0.04, 0.04, 0.04};
    Rgb indirect_illumination = kDefaultIndirect;

    void validate() const;
};

// Material JSON: grids are embedded ({width, height, texels}) or referenced as
// PNGs ({png: path}); scalars as plain arrays/numbers.
Material load_material(const std::string& path);
void save_material(const Material& mat, const std::string& path);

}  // namespace texsg
