// Copyright (c) 2026 The texsg authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "texsg/hand.hpp"
#include "texsg/material.hpp"
#include "texsg/mesh.hpp"
#include "texsg/sg.hpp"
#include "texsg/vec.hpp"

namespace texsg {

struct RigidPose {
    Mat3 rotation = Mat3::identity();
    Vec3 translation;

    void validate() const;
    Vec3 to_world(const Vec3& canonical) const { return rotation * canonical + translation; }
};

// Eq. of the object inverse pose: canonical = R^-1 (x' - t).
Vec3 object_inverse_transform(const RigidPose& pose, const Vec3& x_world);

// Pinhole camera; rotation maps camera axes (x right, y down, z forward) into
// world space and `position` is the optical center. Intrinsics refer to the
// stored reference resolution and scale with the render target.
struct Camera {
    double fx = 128, fy = 128, cx = 64, cy = 64;
    int width = 128, height = 128;
    Mat3 rotation = Mat3::identity();
    Vec3 position;

    void validate() const;
    Ray primary_ray(double px, double py, int render_w, int render_h) const;
};

struct FramePose {
    RigidPose object_pose;
    HandPose hand_pose;
    Camera camera;
};

struct Scene {
    TriangleMesh object_mesh;
    std::shared_ptr<Bvh> bvh;
    std::optional<Vec3> box_half_extents;  // analytic SDF if present
    bool trace_sdf = false;                // sphere-trace instead of BVH rays
    SGEnvironment environment;
    Material material;
    std::optional<SkinnedHand> hand;
    std::vector<SphereSeed> sphere_seeds;
    HandSphereSet canonical_spheres;  // power partition of the canonical hand
    std::vector<FramePose> frames;
    Rgb background{0, 0, 0};

    bool has_hand() const { return hand.has_value() && !sphere_seeds.empty(); }
    void prepare();  // builds the BVH and the canonical sphere partition
    void validate() const;

    // Signed distance to the object in its canonical frame.
    double object_sdf(const Vec3& p) const;

    // Hand spheres posed for a frame and expressed in the object canonical
    // frame (centers transformed, radii unchanged).
    HandSphereSet posed_spheres_canonical(int frame) const;
    // Same, in world coordinates.
    HandSphereSet posed_spheres_world(int frame) const;
};

Scene load_scene(const std::string& path);

}  // namespace texsg
