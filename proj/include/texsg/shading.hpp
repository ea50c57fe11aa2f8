// Copyright (c) 2026 The texsg authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "texsg/image.hpp"
#include "texsg/occlusion.hpp"
#include "texsg/scene.hpp"

namespace texsg {

struct SurfaceSample {
    Vec3 position;          // object canonical frame
    Vec3 normal{0, 0, 1};   // unit, front-facing
    Vec3 view_dir{0, 0, 1}; // omega_o, from the point toward the camera
    Vec2 uv;
};

struct BrdfValue {
    Rgb value{0, 0, 0};
    bool clamped = false;  // grazing denominator was clamped
};

// Diffuse albedo/pi plus the microfacet specular lobe. The normal distribution
// is the SG form 1/(pi r^4) exp(2/r^4 (dot(h,n)-1)), Fresnel is Schlick on the
// half vector and shadowing is height-correlated Smith with alpha = r^2.
BrdfValue brdf_eval(const Material& mat, const SurfaceSample& sample, const Vec3& omega_i);

// Blend of direct lobe amplitudes with the indirect hand term, one fraction
// per lobe: amplitude' = mu * (1 - F) + L_i * F. Axes and sharpness unchanged.
std::vector<SphericalGaussian> final_illumination(const SGEnvironment& env, const Rgb& indirect,
                                                  const std::vector<double>& fractions);

// Everything about a frame that shading needs in the object canonical frame.
struct FrameContext {
    const Scene* scene = nullptr;
    int frame = 0;
    SGEnvironment env_canonical;    // environment counter-rotated by the object pose
    HandSphereSet spheres_canonical;
    bool has_hand = false;
};

FrameContext make_frame_context(const Scene& scene, int frame);

// Per-point, material-independent shading factors. Radiance is affine in the
// effective lobe amplitudes, which lets the inverse solver cache these.
struct PointShadeData {
    std::vector<double> fraction;  // occluded lobe fraction, per lobe
    std::vector<double> k_diff;    // hemispherical (lobe x cosine) factor, per lobe
    std::vector<double> k_spec;    // same with the warped specular lobe, per lobe
    Rgb spec_fresnel_base{0, 0, 0};   // M = base + scale * s (Schlick in s)
    Rgb spec_fresnel_scale{0, 0, 0};
    bool clamped = false;
    double occlusion_aov = 0.0;    // mass-weighted mean fraction
};

PointShadeData compute_point_shade_data(const FrameContext& ctx, const SurfaceSample& sample,
                                        int grid_res = 64);

Rgb shade_with_data(const PointShadeData& data, const FrameContext& ctx, const Rgb& albedo,
                    const Rgb& indirect, Rgb* specular_only = nullptr);

// Full shading of one canonical-frame surface sample (Eq. 1 with all SG
// approximations applied).
Rgb shade_point(const Scene& scene, int frame, const SurfaceSample& sample, int grid_res = 64);

struct RenderOutput {
    Image rgb;
    std::map<std::string, Image> aovs;
};

// Known AOV names: albedo, occlusion, specular, mask, homask.
std::vector<std::string> parse_aov_list(const std::string& csv);

RenderOutput render_frame(const Scene& scene, int frame, int width, int height,
                          const std::vector<std::string>& aovs = {}, int grid_res = 64);

// Swap the environment, keep the material. Rendering the result applies the
// usual per-frame counter-rotation.
Scene relight(const Scene& scene, const SGEnvironment& new_env);

// Canonical-frame primary ray and surface hit for a pixel; shared by the
// analytic renderer and the Monte-Carlo reference.
struct PixelGeometry {
    bool hit = false;
    bool hand_blocked = false;  // a posed hand sphere covers the camera ray
    SurfaceSample sample;
    double t = 0.0;
};

PixelGeometry trace_pixel(const Scene& scene, const FrameContext& ctx, int frame, double px,
                          double py, int width, int height);

}  // namespace texsg
