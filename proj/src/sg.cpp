// Copyright (c) 2026 The texsg authors.
// SPDX-License-Identifier: Apache-2.0

#include "texsg/sg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "texsg/image.hpp"

namespace texsg {

namespace {

void check_unit(const Vec3& v, const char* what) {
    if (std::fabs(length(v) - 1.0) > 1e-6)
        throw InputError(std::string(what) + " must be a unit vector");
}

// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct Quadrature {
    std::vector<double> node, weight;
};

const Quadrature& gauss_legendre_16() {
    static const Quadrature q = [] {
        const int n = 16;
        Quadrature out;
        out.node.resize(n);
        out.weight.resize(n);
        for (int i = 0; i < n; ++i) {
            // Newton iteration from the Chebyshev estimate.
            double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
            double p1 = x, dp = 1.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0;
                p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-15) break;
            }
            out.node[n - 1 - i] = x;
            out.weight[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return out;
    }();
    return q;
}

}  // namespace

void SphericalGaussian::validate() const {
    check_unit(axis, "SG axis");
    if (!(sharpness > 0.0)) throw InputError("SG sharpness must be positive");
    if (amplitude.x < 0.0 || amplitude.y < 0.0 || amplitude.z < 0.0)
        throw InputError("SG amplitude must be nonnegative");
}

void SGEnvironment::validate() const {
    if (lobes.empty()) throw InputError("environment needs at least one lobe");
    if (!is_rotation(frame_rotation)) throw InputError("environment frame_rotation is not a rotation");
    for (const auto& l : lobes) l.validate();
}

Rgb SGEnvironment::radiance(const Vec3& dir) const {
    Rgb sum{0, 0, 0};
    for (const auto& l : lobes) {
        double d = dot(dir, frame_rotation * l.axis);
        sum += l.amplitude * std::exp(l.sharpness * (d - 1.0));
    }
    return sum;
}

Rgb sg_evaluate(const SphericalGaussian& sg, const Vec3& v) {
    check_unit(v, "direction");
    return sg.amplitude * std::exp(sg.sharpness * (dot(v, sg.axis) - 1.0));
}

Rgb sg_integral_sphere(const SphericalGaussian& sg) {
    double f = kTwoPi / sg.sharpness * (1.0 - std::exp(-2.0 * sg.sharpness));
    return sg.amplitude * f;
}

namespace {

double log_bessel_i0(double x) {
    if (x < 20.0) return std::log(std::cyl_bessel_i(0.0, x));
    // Asymptotic expansion; relative error < 1e-12 at the switch point.
    double ix = 1.0 / x;
    double series = 1.0 + ix * (0.125 + ix * (0.0703125 + ix * 0.0732421875));
    return x - 0.5 * std::log(kTwoPi * x) + std::log(series);
}

}  // namespace

double sg_integral_hemisphere_unit(double sharpness, double cos_axis_normal) {
    double c = std::clamp(cos_axis_normal, -1.0, 1.0);
    double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    const Quadrature& q = gauss_legendre_16();
    int panels = std::clamp(int(std::sqrt(sharpness)) / 2 + 2, 2, 32);
    double total = 0.0;
    double width = (kPi / 2) / panels;
    for (int p = 0; p < panels; ++p) {
        double a = p * width;
        for (size_t i = 0; i < q.node.size(); ++i) {
            double t = a + 0.5 * width * (q.node[i] + 1.0);
            double st = std::sin(t), ct = std::cos(t);
            double log_f = sharpness * (c * ct - 1.0) + log_bessel_i0(sharpness * s * st);
            total += 0.5 * width * q.weight[i] * st * std::exp(log_f);
        }
    }
    return kTwoPi * total;
}

Rgb sg_integral_hemisphere(const SphericalGaussian& sg, const Vec3& n) {
    check_unit(n, "normal");
    return sg.amplitude * sg_integral_hemisphere_unit(sg.sharpness, dot(sg.axis, n));
}

SphericalGaussian sg_product(const SphericalGaussian& a, const SphericalGaussian& b) {
    Vec3 m = a.axis * a.sharpness + b.axis * b.sharpness;
    double eta = length(m);
    SphericalGaussian out;
    if (eta < 1e-12) {
        // Antiparallel, equal sharpness: the pointwise product is the constant
        // exp(-eta_a - eta_b); represent it as a near-flat lobe.
        out.axis = a.axis;
        out.sharpness = 1e-8;
        out.amplitude = a.amplitude * b.amplitude * std::exp(-(a.sharpness + b.sharpness));
        return out;
    }
    out.axis = m / eta;
    out.sharpness = eta;
    out.amplitude = a.amplitude * b.amplitude * std::exp(eta - a.sharpness - b.sharpness);
    return out;
}

namespace {

void check_isg_domain(double theta, double phi, double eta) {
    if (!(theta >= 0.0 && theta <= kPi + 1e-12) || !(phi >= 0.0 && phi <= kPi + 1e-12))
        throw InputError("ISG angles must lie in [0, pi]");
    if (!(eta > 0.0)) throw InputError("ISG sharpness must be positive");
}

}  // namespace

double isg_raw(double theta, double phi, double eta) {
    check_isg_domain(theta, phi, eta);
    if (theta <= 0.0 || phi <= 0.0) return 0.0;
    const Quadrature& q = gauss_legendre_16();
    int nt = std::clamp(int(theta / kPi * (4.0 + std::sqrt(eta))), 1, 64);
    int np = std::clamp(int(phi / kPi * (4.0 + std::sqrt(eta))), 1, 64);
    double wt = theta / nt, wp = phi / np;
    // Cache the phi-axis evaluation points.
    std::vector<double> sp(np * q.node.size());
    for (int pp = 0; pp < np; ++pp)
        for (size_t j = 0; j < q.node.size(); ++j)
            sp[pp * q.node.size() + j] = std::sin(pp * wp + 0.5 * wp * (q.node[j] + 1.0));
    double total = 0.0;
    for (int pt = 0; pt < nt; ++pt) {
        for (size_t i = 0; i < q.node.size(); ++i) {
            double t = pt * wt + 0.5 * wt * (q.node[i] + 1.0);
            double st = std::sin(t);
            double inner = 0.0;
            for (int pp = 0; pp < np; ++pp)
                for (size_t j = 0; j < q.node.size(); ++j)
                    inner += 0.5 * wp * q.weight[j] *
                             std::exp(eta * (st * sp[pp * q.node.size() + j] - 1.0));
            total += 0.5 * wt * q.weight[i] * st * inner;
        }
    }
    return total;
}

double isg_normalized(double theta, double phi, double eta, const IsgCoefficients& coeffs) {
    check_isg_domain(theta, phi, eta);
    double sg = 1.0 / (1.0 + std::exp(-coeffs.g(eta) * (theta - kPi / 2)));
    double sh = 1.0 / (1.0 + std::exp(-coeffs.h(eta) * (phi - kPi / 2)));
    return std::clamp(sg * sh, 0.0, 1.0);
}

CosineApproximation cosine_sg_approx(const Vec3& n) {
    check_unit(n, "normal");
    CosineApproximation out;
    out.lobe.axis = n;
    out.lobe.sharpness = 0.0315;
    out.lobe.amplitude = {32.7080, 32.7080, 32.7080};
    out.offset = -31.7003;
    return out;
}

SGEnvironment env_rotate(const SGEnvironment& env, const Mat3& object_rotation) {
    if (!is_rotation(object_rotation)) throw InputError("object_rotation is not a rotation");
    SGEnvironment out = env;
    out.frame_rotation = transpose(object_rotation) * env.frame_rotation;
    return out;
}

std::vector<Vec3> fibonacci_directions(int count) {
    std::vector<Vec3> dirs(count);
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < count; ++j) {
        double z = 1.0 - (2.0 * j + 1.0) / count;
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double a = golden * j;
        dirs[j] = {r * std::cos(a), r * std::sin(a), z};
    }
    return dirs;
}

Vec3 equirect_direction(int row, int col, int width, int height) {
    double v = (row + 0.5) / height;
    double u = (col + 0.5) / width;
    double polar = v * kPi;          // from +y (up)
    double azim = (u - 0.5) * kTwoPi; // 0 at +z (forward)
    double sp = std::sin(polar);
    return {sp * std::sin(azim), std::cos(polar), sp * std::cos(azim)};
}

EnvFitResult env_fit(const Image& radiance_map, int num_lobes, double sharpness) {
    if (radiance_map.width() <= 0 || radiance_map.height() <= 0)
        throw InputError("env_fit: empty radiance map");
    if (num_lobes < 1) throw InputError("env_fit: need at least one lobe");
    if (!(sharpness > 0.0)) throw InputError("env_fit: sharpness must be positive");

    // Pool the map so the normal-equation assembly stays cheap.
    int ph = std::min(radiance_map.height(), 64);
    int pw = std::min(radiance_map.width(), 128);
    std::vector<Vec3> pix(size_t(ph) * pw, Vec3{0, 0, 0});
    std::vector<double> cnt(size_t(ph) * pw, 0.0);
    for (int r = 0; r < radiance_map.height(); ++r) {
        int rr = std::min(ph - 1, r * ph / radiance_map.height());
        for (int c = 0; c < radiance_map.width(); ++c) {
            Rgb val = radiance_map.at(r, c);
            if (has_nan(val)) throw InputError("env_fit: NaN pixel in radiance map");
            int cc = std::min(pw - 1, c * pw / radiance_map.width());
            pix[size_t(rr) * pw + cc] += val;
            cnt[size_t(rr) * pw + cc] += 1.0;
        }
    }
    size_t npix = pix.size();
    std::vector<double> w(npix);
    std::vector<Vec3> dir(npix);
    for (int r = 0; r < ph; ++r)
        for (int c = 0; c < pw; ++c) {
            size_t i = size_t(r) * pw + c;
            if (cnt[i] > 0) pix[i] = pix[i] / cnt[i];
            dir[i] = equirect_direction(r, c, pw, ph);
            w[i] = std::sin((r + 0.5) / ph * kPi);  // relative solid angle
        }

    const int K = num_lobes;
    std::vector<Vec3> axes = fibonacci_directions(K);
    std::vector<double> A(npix * K);
    parallel_for(npix, [&](size_t i) {
        for (int k = 0; k < K; ++k)
            A[i * K + k] = std::exp(sharpness * (dot(dir[i], axes[k]) - 1.0));
    });

    // Normal equations with solid-angle weights.
    std::vector<double> G(size_t(K) * K, 0.0);
    std::vector<Vec3> b(K, Vec3{0, 0, 0});
    for (size_t i = 0; i < npix; ++i) {
        const double* ai = &A[i * K];
        for (int k = 0; k < K; ++k) {
            double wa = w[i] * ai[k];
            b[k] += pix[i] * wa;
            for (int l = k; l < K; ++l) G[size_t(k) * K + l] += wa * ai[l];
        }
    }
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < k; ++l) G[size_t(k) * K + l] = G[size_t(l) * K + k];

    double lip = 0.0;
    for (int k = 0; k < K; ++k) {
        double rs = 0.0;
        for (int l = 0; l < K; ++l) rs += std::fabs(G[size_t(k) * K + l]);
        lip = std::max(lip, rs);
    }
    lip = std::max(lip, 1e-12);

    // Projected gradient NNLS, fixed 200 iterations.
    std::vector<Vec3> mu(K, Vec3{0, 0, 0});
    std::vector<Vec3> grad(K);
    for (int it = 0; it < 200; ++it) {
        for (int k = 0; k < K; ++k) {
            Vec3 g{0, 0, 0};
            for (int l = 0; l < K; ++l) g += mu[l] * G[size_t(k) * K + l];
            grad[k] = g - b[k];
        }
        for (int k = 0; k < K; ++k) {
            mu[k] = mu[k] - grad[k] / lip;
            mu[k] = max(mu[k], Vec3{0, 0, 0});
        }
    }

    EnvFitResult out;
    out.env.lobes.resize(K);
    for (int k = 0; k < K; ++k)
        out.env.lobes[k] = SphericalGaussian{axes[k], sharpness, mu[k]};

    double se = 0.0, wsum = 0.0;
    for (size_t i = 0; i < npix; ++i) {
        Vec3 rec{0, 0, 0};
        for (int k = 0; k < K; ++k) rec += mu[k] * A[i * K + k];
        Vec3 d = rec - pix[i];
        se += w[i] * dot(d, d);
        wsum += w[i];
    }
    out.rmse = std::sqrt(se / (wsum * 3.0));
    return out;
}

SGEnvironment load_environment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open environment file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InputError("bad environment JSON " + path + ": " + e.what());
    }
    SGEnvironment env;
    if (!j.is_array()) throw InputError("environment file must be a JSON array: " + path);
    for (const auto& e : j) {
        SphericalGaussian sg;
        auto ax = e.at("axis");
        sg.axis = normalize(Vec3{ax.at(0), ax.at(1), ax.at(2)});
        sg.sharpness = e.at("sharpness");
        auto am = e.at("amplitude");
        sg.amplitude = {am.at(0), am.at(1), am.at(2)};
        env.lobes.push_back(sg);
    }
    env.validate();
    return env;
}

void save_environment(const SGEnvironment& env, const std::string& path) {
    nlohmann::json j = nlohmann::json::array();
    for (size_t i = 0; i < env.lobes.size(); ++i) {
        SphericalGaussian sg = env.effective_lobe(i);
        j.push_back({{"axis", {sg.axis.x, sg.axis.y, sg.axis.z}},
                     {"sharpness", sg.sharpness},
                     {"amplitude", {sg.amplitude.x, sg.amplitude.y, sg.amplitude.z}}});
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot write environment file: " + path);
    out << j.dump(1) << "\n";
}

}  // namespace texsg
