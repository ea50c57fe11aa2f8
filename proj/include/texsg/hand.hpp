// Copyright (c) 2026 The texsg authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <vector>

#include "texsg/util.hpp"
#include "texsg/vec.hpp"

namespace texsg {

class SkinningError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

struct Joint {
    std::string name;
    int parent = -1;  // -1 for the root
    Vec3 head;        // canonical joint position
};

// Canonical skinned hand: vertices, outward normals, and convex per-vertex
// weights over the joints.
struct SkinnedHand {
    std::vector<Vec3> canonical_vertices;
    std::vector<Vec3> canonical_normals;
    std::vector<double> skinning_weights;  // row-major [vertex][joint]
    int joint_count = 0;
    std::vector<Joint> joints;             // optional tree, used for posing
    std::vector<std::array<int, 3>> triangles;  // optional surface topology

    size_t vertex_count() const { return canonical_vertices.size(); }
    const double* weights_of(size_t v) const { return &skinning_weights[v * joint_count]; }
    void validate() const;
};

// Rigid transform per joint, canonical -> posed.
struct HandPose {
    std::vector<Mat4> joint_transforms;

    static HandPose identity(int joint_count);
    void validate() const;
};

struct PosedHand {
    std::vector<Vec3> vertices;
    std::vector<Vec3> normals;
};

struct SphereSeed {
    Vec3 center;
    double radius = 0.0;
};

// Occluder spheres plus the power-diagram assignment of hand vertices.
struct HandSphereSet {
    std::vector<SphereSeed> spheres;
    std::vector<std::vector<int>> partition;  // vertex indices per sphere
    std::vector<int> empty_cells;             // spheres whose cell is empty

    void validate(size_t vertex_count) const;
};

// Linear blend skinning: x' = (sum_i w_i T_i) x per vertex; normals go through
// the blended linear part and are renormalized.
PosedHand lbs_forward(const SkinnedHand& hand, const HandPose& pose);

// Blended transform for an explicit weight vector.
Mat4 lbs_blend(const HandPose& pose, const double* weights, int joint_count);

// Inverse skinning of an observed point under the given weights. Throws
// SkinningError when the blend is numerically singular.
Vec3 lbs_inverse(const SkinnedHand& hand, const HandPose& pose, const Vec3& x_obs,
                 const std::vector<double>& weights);

// Inverse-distance interpolation of skinning weights over the k nearest
// canonical vertices.
std::vector<double> interpolate_weights(const SkinnedHand& hand, const Vec3& point, int k = 4);

// Power-diagram assignment: each canonical vertex goes to the seed minimizing
// |x - p|^2 - r^2, ties to the lowest index. Empty cells are reported, not
// dropped.
HandSphereSet power_partition(const SkinnedHand& hand, const std::vector<SphereSeed>& seeds);

// Re-derive sphere centers and radii from posed vertices: center = cell mean,
// radius = mean |n_j . (v_j - center)|. Spheres with empty cells keep their
// previous parameters.
HandSphereSet update_posed_spheres(const HandSphereSet& set,
                                   const std::vector<Vec3>& posed_vertices,
                                   const std::vector<Vec3>& posed_normals);

// Forward kinematics from per-joint local rotations about the joint heads.
HandPose pose_from_local_rotations(const SkinnedHand& hand, const std::vector<Mat3>& local);

// Asset files: hand JSON {vertices, normals, weights, joints[, triangles]},
// sphere seeds as a JSON array of {center, radius}.
SkinnedHand load_hand(const std::string& path);
void save_hand(const SkinnedHand& hand, const std::string& path);
std::vector<SphereSeed> load_sphere_seeds(const std::string& path);
void save_sphere_seeds(const std::vector<SphereSeed>& seeds, const std::string& path);

}  // namespace texsg
