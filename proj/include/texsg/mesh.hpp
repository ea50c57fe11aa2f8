// Copyright (c) 2026 The texsg authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "texsg/vec.hpp"

namespace texsg {

struct Ray {
    Vec3 origin;
    Vec3 dir;  // unit
    double t_min = 1e-9;
    double t_max = std::numeric_limits<double>::infinity();
};

struct TriangleMesh {
    std::vector<Vec3> positions;
    std::vector<Vec3> normals;  // per vertex, filled by compute_vertex_normals if absent
    std::vector<Vec2> uvs;      // per vertex
    std::vector<std::array<int, 3>> indices;

    void compute_vertex_normals();
    void validate() const;  // rejects zero-area triangles
    Vec3 face_normal(int tri) const;
};

struct SurfaceHit {
    bool valid = false;
    double t = 0.0;
    int tri = -1;
    double b1 = 0.0, b2 = 0.0;  // barycentrics of vertices 1 and 2
    Vec3 position;
    Vec3 normal;       // shading normal (interpolated)
    Vec3 geom_normal;  // face normal
    Vec2 uv;
};

struct ClosestPoint {
    double distance_sq = std::numeric_limits<double>::infinity();
    int tri = -1;
    Vec3 point;
};

// Midpoint-split bounding volume hierarchy over mesh triangles.
class Bvh {
  public:
    explicit Bvh(const TriangleMesh& mesh);

    SurfaceHit intersect(const Ray& ray) const;
    bool intersect_any(const Ray& ray) const;
    ClosestPoint closest_point(const Vec3& p) const;

    // Signed distance with angle-weighted pseudonormal sign classification;
    // requires a closed orientable surface for a meaningful sign.
    double signed_distance(const Vec3& p) const;

    const TriangleMesh& mesh() const { return mesh_; }

  private:
    struct Node {
        Vec3 lo, hi;
        int left = -1, right = -1;  // internal children
        int first = 0, count = 0;   // leaf triangle range
    };
    void build(int node, std::vector<int>& tris, int first, int count);
    void hit_leaf(const Node& node, const Ray& ray, SurfaceHit& best) const;

    TriangleMesh mesh_;
    std::vector<Node> nodes_;
    std::vector<int> order_;  // triangle permutation
    std::vector<Vec3> vertex_pseudonormal_;
    // Edge pseudonormals keyed by (min vertex, max vertex).
    std::vector<std::pair<uint64_t, Vec3>> edge_pseudonormal_;
    Vec3 edge_normal(int a, int b) const;
};

TriangleMesh load_obj(const std::string& path);
void save_obj(const TriangleMesh& mesh, const std::string& path);

// Axis-aligned box centered at the origin; the analytic SDF used by the
// bundled demo scene.
double box_sdf(const Vec3& p, const Vec3& half_extents);

TriangleMesh make_box_mesh(const Vec3& half_extents);

}  // namespace texsg
