// Copyright (c) 2026 The texsg authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "texsg/util.hpp"
#include "texsg/vec.hpp"

namespace texsg {

class Image;

// One spherical Gaussian lobe: amplitude * exp(sharpness * (dot(v, axis) - 1)).
struct SphericalGaussian {
    Vec3 axis{0, 0, 1};     // unit lobe direction
    double sharpness = 1;   // > 0
    Rgb amplitude{1, 1, 1}; // >= 0 per channel for light-carrying lobes

    void validate() const;
};

// Environment radiance as a mixture of SG lobes, with a rigid rotation that is
// applied to every lobe axis at evaluation time. Rendering a dynamic object in
// its canonical frame counter-rotates this frame against the object pose.
struct SGEnvironment {
    std::vector<SphericalGaussian> lobes;
    Mat3 frame_rotation = Mat3::identity();

    static constexpr int kDefaultLobeCount = 128;

    void validate() const;
    Vec3 lobe_axis(size_t j) const { return frame_rotation * lobes[j].axis; }
    SphericalGaussian effective_lobe(size_t j) const {
        SphericalGaussian sg = lobes[j];
        sg.axis = frame_rotation * sg.axis;
        return sg;
    }
    Rgb radiance(const Vec3& dir) const;
};

// Sigmoid-slope polynomials for the normalized integral spherical Gaussian.
// g and h are quartics in (sharpness / 100); the constant terms keep the
// slopes finite as sharpness tends to zero.
struct IsgCoefficients {
    double g4 = -2.6856e-6, g3 = 7e-4, g2 = -0.0571, g1 = 3.9529, g0 = 17.6028;
    double h4 = -2.6875e-6, h3 = 7e-4, h2 = -0.0592, h1 = 3.9900, h0 = 17.5003;

    double g(double sharpness) const {
        double x = sharpness / 100.0;
        return (((g4 * x + g3) * x + g2) * x + g1) * x + g0;
    }
    double h(double sharpness) const {
        double x = sharpness / 100.0;
        return (((h4 * x + h3) * x + h2) * x + h1) * x + h0;
    }
};

// Evaluate one lobe along a unit direction.
Rgb sg_evaluate(const SphericalGaussian& sg, const Vec3& v);

// Closed-form integral over the full sphere: 2*pi*mu/eta * (1 - exp(-2*eta)).
Rgb sg_integral_sphere(const SphericalGaussian& sg);

// Integral over the hemisphere above normal n. Exact 1D reduction of the
// spherical integral (Bessel I0 kernel), evaluated by quadrature.
Rgb sg_integral_hemisphere(const SphericalGaussian& sg, const Vec3& n);
double sg_integral_hemisphere_unit(double sharpness, double cos_axis_normal);

// Pointwise product of two lobes is again a lobe (exact identity). Antiparallel
// equal-sharpness inputs degenerate to a constant lobe with epsilon sharpness.
SphericalGaussian sg_product(const SphericalGaussian& a, const SphericalGaussian& b);

// Cumulative mass of a unit-amplitude lobe over the angular rectangle
// [0,theta] x [0,phi] of the lobe-centered parameterization
//   omega(t, p) = cos(t) * T1 + sin(t)cos(p) * T2 + sin(t)sin(p) * axis,
// i.e. S = int int exp(eta*(sin t sin p - 1)) sin t dt dp. The lobe axis sits
// at (pi/2, pi/2) and (pi, pi) covers its whole hemisphere.
double isg_raw(double theta, double phi, double eta);

// Sigmoid-product approximation of isg_raw normalized by the full-hemisphere
// mass; clamped to [0, 1].
double isg_normalized(double theta, double phi, double eta,
                      const IsgCoefficients& coeffs = {});

struct CosineApproximation {
    SphericalGaussian lobe;
    double offset = 0.0;
};

// SG surrogate for the cosine factor of the rendering integral:
// dot(omega, n) ~= G(omega; n, 32.7080, 0.0315) - 31.7003.
CosineApproximation cosine_sg_approx(const Vec3& n);

// Counter-rotate every lobe axis by the inverse of an object rotation.
SGEnvironment env_rotate(const SGEnvironment& env, const Mat3& object_rotation);

struct EnvFitResult {
    SGEnvironment env;
    double rmse = 0.0;  // solid-angle-weighted reconstruction RMSE
};

// Fit lobe amplitudes to an equirectangular radiance map. Axes are placed on a
// spherical Fibonacci spiral and amplitudes solved per channel by projected
// gradient nonnegative least squares (200 iterations, deterministic).
EnvFitResult env_fit(const Image& radiance_map, int num_lobes, double sharpness);

// Deterministic Fibonacci-spiral unit directions.
std::vector<Vec3> fibonacci_directions(int count);

// Direction for an equirectangular pixel center; +z forward, +y up.
Vec3 equirect_direction(int row, int col, int width, int height);

// JSON array of {axis, sharpness, amplitude}.
SGEnvironment load_environment(const std::string& path);
void save_environment(const SGEnvironment& env, const std::string& path);

}  // namespace texsg
