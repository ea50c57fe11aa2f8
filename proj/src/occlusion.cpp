// Copyright (c) 2026 The texsg authors.
// SPDX-License-Identifier: Apache-2.0

#include "texsg/occlusion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace texsg {

SphericalCap project_sphere_to_cap(const Vec3& x, const SphereSeed& sphere) {
    Vec3 to_center = sphere.center - x;
    double dist = length(to_center);
    if (dist <= 0.0) throw InputError("occluder sphere centered on the query point");
    SphericalCap cap;
    cap.axis = to_center / dist;
    if (dist <= sphere.radius) {
        cap.cos_half = 0.0;  // reported half-angle pi/2
        cap.degenerate = true;
    } else {
        double half = std::asin(std::min(1.0, sphere.radius / dist));
        cap.cos_half = std::cos(half);
    }
    return cap;
}

std::vector<SphericalCap> project_spheres(const Vec3& x, const std::vector<SphereSeed>& spheres) {
    std::vector<SphericalCap> caps;
    caps.reserve(spheres.size());
    for (const auto& s : spheres) caps.push_back(project_sphere_to_cap(x, s));
    return caps;
}

size_t PatchGrid::occupied_count() const {
    size_t n = 0;
    for (uint64_t w : occupancy) n += std::popcount(w);
    return n;
}

Vec3 PatchGrid::patch_center_dir(int i, int j) const {
    double step = kPi / resolution;
    double theta = (i + 0.5) * step, phi = (j + 0.5) * step;
    return std::cos(theta) * t1 + std::sin(theta) * std::cos(phi) * t2 +
           std::sin(theta) * std::sin(phi) * lobe_axis;
}

PatchGrid make_patch_grid(const Vec3& lobe_axis, int resolution) {
    if (resolution < 1) throw InputError("patch grid resolution must be positive");
    PatchGrid g;
    g.resolution = resolution;
    g.lobe_axis = normalize(lobe_axis);
    orthonormal_basis(g.lobe_axis, g.t1, g.t2);
    g.occupancy.assign(size_t(resolution) * g.words_per_row(), 0);
    return g;
}

namespace {

// Mark columns j in [0, res) whose center phi lies within +-arc of phi_c
// (great-circle azimuth), writing into one bitmask row.
void mark_phi_interval(uint64_t* row, int res, double phi_c, double arc) {
    if (arc <= 0.0) return;
    double step = kPi / res;
    auto mark_range = [&](double lo, double hi) {
        lo = std::max(lo, 0.0);
        hi = std::min(hi, kPi);
        if (hi <= lo) return;
        int j0 = std::max(0, int(std::floor(lo / step - 0.5)));
        int j1 = std::min(res - 1, int(std::ceil(hi / step - 0.5)));
        for (int j = j0; j <= j1; ++j) {
            double phi = (j + 0.5) * step;
            if (phi >= lo - 1e-15 && phi <= hi + 1e-15) row[j >> 6] |= uint64_t(1) << (j & 63);
        }
    };
    if (arc >= kPi) {
        mark_range(0.0, kPi);
        return;
    }
    for (double shift : {-kTwoPi, 0.0, kTwoPi}) mark_range(phi_c - arc + shift, phi_c + arc + shift);
}

// Per-row azimuthal extent of a cap: directions within angular distance
// alpha of a center at colatitude theta_c, evaluated at colatitude theta.
// Returns the half-width of the phi interval, pi for a full row, <0 for none.
double row_arc(double cos_alpha, double theta, double theta_c) {
    double st = std::sin(theta), ct = std::cos(theta);
    double sc = std::sin(theta_c), cc = std::cos(theta_c);
    double denom = st * sc;
    if (denom < 1e-12) return ct * cc >= cos_alpha ? kPi : -1.0;
    double q = (cos_alpha - ct * cc) / denom;
    if (q >= 1.0) return -1.0;
    if (q <= -1.0) return kPi;
    return std::acos(q);
}

}  // namespace

void collect_occluded_patches(PatchGrid& grid, const std::vector<SphericalCap>& caps,
                              const Vec3& n) {
    const int res = grid.resolution;
    const int wpr = grid.words_per_row();
    const double step = kPi / res;

    // Horizon rows: directions with dot(omega, n) > 0 form a cap of half-angle
    // pi/2 about n; reuse the same interval machinery.
    std::vector<uint64_t> horizon(size_t(res) * wpr, 0);
    double theta_n = std::acos(std::clamp(dot(n, grid.t1), -1.0, 1.0));
    double phi_n = std::atan2(dot(n, grid.lobe_axis), dot(n, grid.t2));
    for (int i = 0; i < res; ++i) {
        double theta = (i + 0.5) * step;
        double arc = row_arc(1e-12, theta, theta_n);  // strict > 0 via tiny margin
        if (arc > 0.0) mark_phi_interval(&horizon[size_t(i) * wpr], res, phi_n, arc);
    }

    std::vector<uint64_t> rowbits(wpr);
    for (const auto& cap : caps) {
        double theta_c = std::acos(std::clamp(dot(cap.axis, grid.t1), -1.0, 1.0));
        double phi_c = std::atan2(dot(cap.axis, grid.lobe_axis), dot(cap.axis, grid.t2));
        double alpha = cap.degenerate ? kPi : std::acos(std::clamp(cap.cos_half, -1.0, 1.0));
        int i0 = cap.degenerate ? 0 : std::max(0, int(std::floor((theta_c - alpha) / step - 0.5)));
        int i1 = cap.degenerate ? res - 1
                                : std::min(res - 1, int(std::ceil((theta_c + alpha) / step - 0.5)));
        for (int i = i0; i <= i1; ++i) {
            double theta = (i + 0.5) * step;
            double arc = cap.degenerate ? kPi : row_arc(cap.cos_half, theta, theta_c);
            if (arc <= 0.0) continue;
            std::fill(rowbits.begin(), rowbits.end(), 0);
            mark_phi_interval(rowbits.data(), res, phi_c, arc);
            uint64_t* dst = &grid.occupancy[size_t(i) * wpr];
            const uint64_t* hz = &horizon[size_t(i) * wpr];
            for (int w = 0; w < wpr; ++w) dst[w] |= rowbits[w] & hz[w];
        }
    }

    // Clear any padding bits beyond the last column.
    int tail = res & 63;
    if (tail) {
        uint64_t mask = (uint64_t(1) << tail) - 1;
        for (int i = 0; i < res; ++i) grid.occupancy[size_t(i) * wpr + wpr - 1] &= mask;
    }
}

double occlusion_fraction(const PatchGrid& grid, double eta, const IsgCoefficients& coeffs) {
    if (!(eta > 0.0)) throw InputError("occlusion_fraction: sharpness must be positive");
    const int res = grid.resolution;
    const int wpr = grid.words_per_row();
    const double step = kPi / res;
    const double g = coeffs.g(eta), h = coeffs.h(eta);
    auto sigmoid = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };

    // The normalized ISG is a product of 1D sigmoids, so the per-patch corner
    // combination factors into (dSg_i)(dSh_j).
    std::vector<double> sg(res + 1), sh(res + 1);
    for (int k = 0; k <= res; ++k) {
        double a = k * step - kPi / 2;
        sg[k] = sigmoid(g * a);
        sh[k] = sigmoid(h * a);
    }
    double total = 0.0;
    for (int i = 0; i < res; ++i) {
        double wt = sg[i + 1] - sg[i];
        if (wt == 0.0) continue;
        double row = 0.0;
        const uint64_t* bits = &grid.occupancy[size_t(i) * wpr];
        for (int w = 0; w < wpr; ++w) {
            uint64_t word = bits[w];
            while (word) {
                int j = (w << 6) + std::countr_zero(word);
                word &= word - 1;
                row += sh[j + 1] - sh[j];
            }
        }
        total += wt * row;
    }
    return std::clamp(total, 0.0, 1.0);
}

OccludedIntegral occluded_sg_integral(const SphericalGaussian& sg, const OcclusionQuery& query,
                                      int grid_res) {
    if (!query.posed_spheres) throw InputError("occluded_sg_integral: missing sphere set");
    OccludedIntegral out;
    std::vector<SphericalCap> caps;
    caps.reserve(query.posed_spheres->spheres.size());
    for (const auto& s : query.posed_spheres->spheres) {
        caps.push_back(project_sphere_to_cap(query.surface_point, s));
        out.degenerate = out.degenerate || caps.back().degenerate;
    }
    PatchGrid grid = make_patch_grid(sg.axis, grid_res);
    collect_occluded_patches(grid, caps, query.surface_normal);
    out.fraction = occlusion_fraction(grid, sg.sharpness);
    Rgb full = sg_integral_sphere(sg);
    out.occluded = full * out.fraction;
    out.unoccluded = full * (1.0 - out.fraction);
    return out;
}

}  // namespace texsg
