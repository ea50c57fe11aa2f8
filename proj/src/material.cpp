// Copyright (c) 2026 The texsg authors.
// SPDX-License-Identifier: Apache-2.0

#include "texsg/material.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "texsg/image.hpp"
#include "texsg/util.hpp"

namespace texsg {

void Material::validate() const {
    for (const auto& t : albedo.texels)
        if (min_component(t) < 0.0 || max_component(t) > 1.0)
            throw InputError("albedo texels must lie in [0,1]");
    for (double r : roughness.texels)
        if (!(r > 0.0 && r <= 1.0)) throw InputError("roughness must lie in (0,1]");
    if (min_component(specular_reflectance) < 0.0 || max_component(specular_reflectance) > 1.0)
        throw InputError("specular reflectance must lie in [0,1]");
    if (min_component(indirect_illumination) < 0.0)
        throw InputError("indirect illumination must be nonnegative");
}

namespace {

namespace fs = std::filesystem;

Grid<Rgb> parse_color_grid(const nlohmann::json& j, const fs::path& base) {
    Grid<Rgb> g;
    if (j.contains("png")) {
        Image img = read_png((base / std::string(j.at("png"))).string());
        g.width = img.width();
        g.height = img.height();
        g.texels = img.pixels();
        return g;
    }
    g.width = j.at("width");
    g.height = j.at("height");
    g.texels.clear();
    for (const auto& t : j.at("texels")) g.texels.push_back({t.at(0), t.at(1), t.at(2)});
    if (g.texels.size() != size_t(g.width) * g.height)
        throw InputError("color grid texel count mismatch");
    return g;
}

Grid<double> parse_scalar_grid(const nlohmann::json& j, const fs::path& base) {
    Grid<double> g;
    if (j.is_number()) return Grid<double>::constant(double(j));
    if (j.contains("png")) {
        Image img = read_png((base / std::string(j.at("png"))).string());
        g.width = img.width();
        g.height = img.height();
        g.texels.clear();
        for (const auto& p : img.pixels()) g.texels.push_back(p.x);
        return g;
    }
    g.width = j.at("width");
    g.height = j.at("height");
    g.texels.clear();
    for (const auto& t : j.at("texels")) g.texels.push_back(double(t));
    if (g.texels.size() != size_t(g.width) * g.height)
        throw InputError("scalar grid texel count mismatch");
    return g;
}

}  // namespace

Material load_material(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open material: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InputError("bad material JSON " + path + ": " + e.what());
    }
    fs::path base = fs::path(path).parent_path();
    Material m;
    if (j.contains("albedo")) m.albedo = parse_color_grid(j.at("albedo"), base);
    if (j.contains("roughness")) m.roughness = parse_scalar_grid(j.at("roughness"), base);
    if (j.contains("specular_reflectance")) {
        auto s = j.at("specular_reflectance");
        m.specular_reflectance = {s.at(0), s.at(1), s.at(2)};
    }
    if (j.contains("indirect_illumination")) {
        auto s = j.at("indirect_illumination");
        m.indirect_illumination = {s.at(0), s.at(1), s.at(2)};
    }
    m.validate();
    return m;
}

void save_material(const Material& mat, const std::string& path) {
    nlohmann::json j;
    j["albedo"]["width"] = mat.albedo.width;
    j["albedo"]["height"] = mat.albedo.height;
    for (const auto& t : mat.albedo.texels) j["albedo"]["texels"].push_back({t.x, t.y, t.z});
    j["roughness"]["width"] = mat.roughness.width;
    j["roughness"]["height"] = mat.roughness.height;
    for (double t : mat.roughness.texels) j["roughness"]["texels"].push_back(t);
    j["specular_reflectance"] = {mat.specular_reflectance.x, mat.specular_reflectance.y,
                                 mat.specular_reflectance.z};
    j["indirect_illumination"] = {mat.indirect_illumination.x, mat.indirect_illumination.y,
                                  mat.indirect_illumination.z};
    std::ofstream out(path);
    if (!out) throw InputError("cannot write material: " + path);
    out << j.dump() << "\n";
}

}  // namespace texsg
