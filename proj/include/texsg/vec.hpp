// Copyright (c) 2026 The texsg authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>

namespace texsg {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kFourPi = 4.0 * kPi;

struct Vec2 {
    double x = 0.0, y = 0.0;
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](int i) { return (&x)[i]; }
    double operator[](int i) const { return (&x)[i]; }

    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

// RGB radiance/reflectance triples share the vector type.
using Rgb = Vec3;

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator*(Vec3 a, double s) { return a *= s; }
inline Vec3 operator*(double s, Vec3 a) { return a *= s; }
inline Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }
inline Vec3 operator*(const Vec3& a, const Vec3& b) { return {a.x * b.x, a.y * b.y, a.z * b.z}; }
inline Vec3 operator/(const Vec3& a, const Vec3& b) { return {a.x / b.x, a.y / b.y, a.z / b.z}; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double length_squared(const Vec3& v) { return dot(v, v); }
inline double length(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalize(const Vec3& v) { return v / length(v); }
inline double max_component(const Vec3& v) { return std::max(v.x, std::max(v.y, v.z)); }
inline double min_component(const Vec3& v) { return std::min(v.x, std::min(v.y, v.z)); }
inline double luminance(const Rgb& c) { return 0.2126 * c.x + 0.7152 * c.y + 0.0722 * c.z; }
inline bool has_nan(const Vec3& v) { return std::isnan(v.x) || std::isnan(v.y) || std::isnan(v.z); }

inline Vec3 min(const Vec3& a, const Vec3& b) {
    return {std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)};
}
inline Vec3 max(const Vec3& a, const Vec3& b) {
    return {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)};
}
inline Vec3 clamp(const Vec3& v, double lo, double hi) {
    return {std::clamp(v.x, lo, hi), std::clamp(v.y, lo, hi), std::clamp(v.z, lo, hi)};
}
inline Vec3 abs(const Vec3& v) { return {std::fabs(v.x), std::fabs(v.y), std::fabs(v.z)}; }

inline std::ostream& operator<<(std::ostream& os, const Vec3& v) {
    return os << "(" << v.x << ", " << v.y << ", " << v.z << ")";
}

// Column-major 3x3 matrix: columns are the images of the basis vectors.
struct Mat3 {
    std::array<Vec3, 3> col{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};

    static Mat3 identity() { return {}; }
    static Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) { return {{c0, c1, c2}}; }
    static Mat3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
        return from_columns({r0.x, r1.x, r2.x}, {r0.y, r1.y, r2.y}, {r0.z, r1.z, r2.z});
    }

    Vec3 row(int i) const { return {col[0][i], col[1][i], col[2][i]}; }
    double operator()(int r, int c) const { return col[c][r]; }
    double& operator()(int r, int c) { return col[c][r]; }
};

inline Vec3 operator*(const Mat3& m, const Vec3& v) {
    return m.col[0] * v.x + m.col[1] * v.y + m.col[2] * v.z;
}
inline Mat3 operator*(const Mat3& a, const Mat3& b) {
    return Mat3::from_columns(a * b.col[0], a * b.col[1], a * b.col[2]);
}
inline Mat3 transpose(const Mat3& m) {
    return Mat3::from_columns(m.row(0), m.row(1), m.row(2));
}
inline double determinant(const Mat3& m) {
    return dot(m.col[0], cross(m.col[1], m.col[2]));
}
inline Mat3 inverse(const Mat3& m) {
    Vec3 r0 = cross(m.col[1], m.col[2]);
    Vec3 r1 = cross(m.col[2], m.col[0]);
    Vec3 r2 = cross(m.col[0], m.col[1]);
    double inv_det = 1.0 / dot(m.col[0], r0);
    return Mat3::from_rows(r0 * inv_det, r1 * inv_det, r2 * inv_det);
}

inline Mat3 rotation_about_axis(const Vec3& axis, double angle) {
    Vec3 u = normalize(axis);
    double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
    return Mat3::from_rows({t * u.x * u.x + c, t * u.x * u.y - s * u.z, t * u.x * u.z + s * u.y},
                           {t * u.x * u.y + s * u.z, t * u.y * u.y + c, t * u.y * u.z - s * u.x},
                           {t * u.x * u.z - s * u.y, t * u.y * u.z + s * u.x, t * u.z * u.z + c});
}

inline bool is_rotation(const Mat3& m, double tol = 1e-6) {
    Mat3 mtm = transpose(m) * m;
    double dev = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) dev = std::max(dev, std::fabs(mtm(r, c) - (r == c ? 1.0 : 0.0)));
    return dev <= tol && std::fabs(determinant(m) - 1.0) <= tol;
}

// Deterministic right-handed tangent frame: returns (t1, t2) with t1 x t2 = n.
inline void orthonormal_basis(const Vec3& n, Vec3& t1, Vec3& t2) {
    // Duff et al. branchless construction.
    double sign = std::copysign(1.0, n.z);
    double a = -1.0 / (sign + n.z);
    double b = n.x * n.y * a;
    t1 = {1.0 + sign * n.x * n.x * a, sign * b, -sign * n.x};
    t2 = {b, sign + n.y * n.y * a, -n.y};
}

// Rigid/affine 4x4 transform stored as 3x3 linear part plus translation.
struct Mat4 {
    Mat3 linear;
    Vec3 translation;

    static Mat4 identity() { return {}; }
    static Mat4 from_rigid(const Mat3& rot, const Vec3& t) { return {rot, t}; }

    Vec3 transform_point(const Vec3& p) const { return linear * p + translation; }
    Vec3 transform_vector(const Vec3& v) const { return linear * v; }
};

inline Mat4 operator*(const Mat4& a, const Mat4& b) {
    return {a.linear * b.linear, a.linear * b.translation + a.translation};
}
inline Mat4 operator+(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (int c = 0; c < 3; ++c) r.linear.col[c] = a.linear.col[c] + b.linear.col[c];
    r.translation = a.translation + b.translation;
    return r;
}
inline Mat4 operator*(const Mat4& a, double s) {
    Mat4 r;
    for (int c = 0; c < 3; ++c) r.linear.col[c] = a.linear.col[c] * s;
    r.translation = a.translation * s;
    return r;
}
inline Mat4 inverse_affine(const Mat4& m) {
    Mat3 inv = inverse(m.linear);
    return {inv, -(inv * m.translation)};
}

}  // namespace texsg
