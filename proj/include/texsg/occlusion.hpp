// Copyright (c) 2026 The texsg authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "texsg/hand.hpp"
#include "texsg/sg.hpp"
#include "texsg/vec.hpp"

namespace texsg {

// Projection of an occluder sphere onto the unit sphere of directions around a
// shading point. `degenerate` marks a point inside the sphere; such a cap
// blocks every direction.
struct SphericalCap {
    Vec3 axis{0, 0, 1};
    double cos_half = 1.0;
    bool degenerate = false;
};

SphericalCap project_sphere_to_cap(const Vec3& x, const SphereSeed& sphere);
std::vector<SphericalCap> project_spheres(const Vec3& x, const std::vector<SphereSeed>& spheres);

// Patch grid over the lobe hemisphere, (theta, phi) in [0, pi]^2 with the lobe
// axis at the center (see isg_raw for the direction parameterization). Patch
// occupancy is a bitmask; marking is a union, so it is idempotent and
// order-independent.
struct PatchGrid {
    int resolution = 64;
    Vec3 lobe_axis{0, 0, 1};
    Vec3 t1{1, 0, 0}, t2{0, 1, 0};
    std::vector<uint64_t> occupancy;  // resolution rows x words_per_row() bits

    int words_per_row() const { return (resolution + 63) / 64; }
    bool occupied(int i, int j) const {
        return occupancy[size_t(i) * words_per_row() + (j >> 6)] >> (j & 63) & 1;
    }
    size_t occupied_count() const;
    Vec3 patch_center_dir(int i, int j) const;
};

PatchGrid make_patch_grid(const Vec3& lobe_axis, int resolution = 64);

// Mark every patch whose center lies inside some cap and above the horizon of
// surface normal n.
void collect_occluded_patches(PatchGrid& grid, const std::vector<SphericalCap>& caps,
                              const Vec3& n);

// Fraction of the lobe mass covered by the occupied patches: the sum of the
// per-patch corner combinations of the normalized ISG, clamped to [0, 1].
double occlusion_fraction(const PatchGrid& grid, double eta, const IsgCoefficients& coeffs = {});

struct OcclusionQuery {
    Vec3 surface_point;
    Vec3 surface_normal{0, 0, 1};
    const HandSphereSet* posed_spheres = nullptr;
};

struct OccludedIntegral {
    Rgb occluded{0, 0, 0};
    Rgb unoccluded{0, 0, 0};
    double fraction = 0.0;
    bool degenerate = false;
};

// Analytic approximation of the partially-occluded lobe integral:
// occluded ~= F * integral(G), unoccluded = (1 - F) * integral(G).
OccludedIntegral occluded_sg_integral(const SphericalGaussian& sg, const OcclusionQuery& query,
                                      int grid_res = 64);

}  // namespace texsg
