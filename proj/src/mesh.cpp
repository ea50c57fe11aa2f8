// Copyright (c) 2026 The texsg authors.
// SPDX-License-Identifier: Apache-2.0

#include "texsg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "texsg/util.hpp"

namespace texsg {

void TriangleMesh::compute_vertex_normals() {
    normals.assign(positions.size(), Vec3{0, 0, 0});
    for (const auto& tri : indices) {
        Vec3 fn = cross(positions[tri[1]] - positions[tri[0]], positions[tri[2]] - positions[tri[0]]);
        for (int k = 0; k < 3; ++k) normals[tri[k]] += fn;  // area weighting
    }
    for (auto& n : normals) {
        double len = length(n);
        n = len > 1e-18 ? n / len : Vec3{0, 0, 1};
    }
}

void TriangleMesh::validate() const {
    if (normals.size() != positions.size()) throw InputError("mesh is missing vertex normals");
    for (const auto& tri : indices) {
        Vec3 fn = cross(positions[tri[1]] - positions[tri[0]], positions[tri[2]] - positions[tri[0]]);
        if (length(fn) < 1e-18) throw InputError("mesh contains a zero-area triangle");
    }
}

Vec3 TriangleMesh::face_normal(int tri) const {
    const auto& t = indices[tri];
    return normalize(cross(positions[t[1]] - positions[t[0]], positions[t[2]] - positions[t[0]]));
}

namespace {

struct Aabb {
    Vec3 lo{1e30, 1e30, 1e30}, hi{-1e30, -1e30, -1e30};
    void extend(const Vec3& p) {
        lo = min(lo, p);
        hi = max(hi, p);
    }
    Vec3 center() const { return (lo + hi) * 0.5; }
};

bool slab_test(const Vec3& lo, const Vec3& hi, const Ray& ray, double best_t) {
    double t0 = ray.t_min, t1 = std::min(ray.t_max, best_t);
    for (int a = 0; a < 3; ++a) {
        double inv = 1.0 / ray.dir[a];
        double n = (lo[a] - ray.origin[a]) * inv;
        double f = (hi[a] - ray.origin[a]) * inv;
        if (inv < 0.0) std::swap(n, f);
        t0 = std::max(t0, n);
        t1 = std::min(t1, f);
        if (t0 > t1) return false;
    }
    return true;
}

// Moller-Trumbore.
bool ray_triangle(const Ray& ray, const Vec3& p0, const Vec3& p1, const Vec3& p2, double& t,
                  double& b1, double& b2) {
    Vec3 e1 = p1 - p0, e2 = p2 - p0;
    Vec3 pv = cross(ray.dir, e2);
    double det = dot(e1, pv);
    if (std::fabs(det) < 1e-18) return false;
    double inv = 1.0 / det;
    Vec3 tv = ray.origin - p0;
    b1 = dot(tv, pv) * inv;
    if (b1 < 0.0 || b1 > 1.0) return false;
    Vec3 qv = cross(tv, e1);
    b2 = dot(ray.dir, qv) * inv;
    if (b2 < 0.0 || b1 + b2 > 1.0) return false;
    t = dot(e2, qv) * inv;
    return t >= ray.t_min && t <= ray.t_max;
}

Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    // Ericson, Real-Time Collision Detection.
    Vec3 ab = b - a, ac = c - a, ap = p - a;
    double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;
    Vec3 bp = p - b;
    double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3) return b;
    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));
    Vec3 cp = p - c;
    double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6) return c;
    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));
    double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (uint64_t(uint32_t(a)) << 32) | uint32_t(b);
}

}  // namespace

Bvh::Bvh(const TriangleMesh& mesh) : mesh_(mesh) {
    mesh_.validate();
    order_.resize(mesh_.indices.size());
    for (size_t i = 0; i < order_.size(); ++i) order_[i] = int(i);
    nodes_.reserve(order_.size() * 2);
    nodes_.emplace_back();
    build(0, order_, 0, int(order_.size()));

    // Angle-weighted vertex pseudonormals and edge pseudonormals for the
    // signed-distance sign test.
    vertex_pseudonormal_.assign(mesh_.positions.size(), Vec3{0, 0, 0});
    std::map<uint64_t, Vec3> edges;
    for (size_t t = 0; t < mesh_.indices.size(); ++t) {
        const auto& tri = mesh_.indices[t];
        Vec3 fn = mesh_.face_normal(int(t));
        for (int k = 0; k < 3; ++k) {
            Vec3 e0 = normalize(mesh_.positions[tri[(k + 1) % 3]] - mesh_.positions[tri[k]]);
            Vec3 e1 = normalize(mesh_.positions[tri[(k + 2) % 3]] - mesh_.positions[tri[k]]);
            double angle = std::acos(std::clamp(dot(e0, e1), -1.0, 1.0));
            vertex_pseudonormal_[tri[k]] += fn * angle;
            edges[edge_key(tri[k], tri[(k + 1) % 3])] += fn;
        }
    }
    for (auto& n : vertex_pseudonormal_)
        if (length(n) > 1e-18) n = normalize(n);
    edge_pseudonormal_.assign(edges.begin(), edges.end());
}

void Bvh::build(int node, std::vector<int>& tris, int first, int count) {
    Aabb box, cbox;
    for (int i = first; i < first + count; ++i)
        for (int k = 0; k < 3; ++k) box.extend(mesh_.positions[mesh_.indices[tris[i]][k]]);
    for (int i = first; i < first + count; ++i) {
        const auto& tri = mesh_.indices[tris[i]];
        cbox.extend((mesh_.positions[tri[0]] + mesh_.positions[tri[1]] + mesh_.positions[tri[2]]) /
                    3.0);
    }
    nodes_[node].lo = box.lo;
    nodes_[node].hi = box.hi;
    if (count <= 4) {
        nodes_[node].first = first;
        nodes_[node].count = count;
        return;
    }
    Vec3 extent = cbox.hi - cbox.lo;
    int axis = extent.x > extent.y ? (extent.x > extent.z ? 0 : 2) : (extent.y > extent.z ? 1 : 2);
    double split = cbox.center()[axis];
    auto mid_it = std::partition(tris.begin() + first, tris.begin() + first + count, [&](int t) {
        const auto& tri = mesh_.indices[t];
        Vec3 c = (mesh_.positions[tri[0]] + mesh_.positions[tri[1]] + mesh_.positions[tri[2]]) / 3.0;
        return c[axis] < split;
    });
    int mid = int(mid_it - tris.begin());
    if (mid == first || mid == first + count) mid = first + count / 2;  // degenerate split
    int left = int(nodes_.size());
    nodes_.emplace_back();
    nodes_.emplace_back();
    nodes_[node].left = left;
    nodes_[node].right = left + 1;
    build(left, tris, first, mid - first);
    build(left + 1, tris, mid, first + count - mid);
}

void Bvh::hit_leaf(const Node& node, const Ray& ray, SurfaceHit& best) const {
    for (int i = node.first; i < node.first + node.count; ++i) {
        int ti = order_[i];
        const auto& tri = mesh_.indices[ti];
        double t, b1, b2;
        Ray r = ray;
        if (best.valid) r.t_max = std::min(r.t_max, best.t);
        if (ray_triangle(r, mesh_.positions[tri[0]], mesh_.positions[tri[1]],
                         mesh_.positions[tri[2]], t, b1, b2)) {
            best.valid = true;
            best.t = t;
            best.tri = ti;
            best.b1 = b1;
            best.b2 = b2;
        }
    }
}

SurfaceHit Bvh::intersect(const Ray& ray) const {
    SurfaceHit best;
    int stack[64];
    int sp = 0;
    stack[sp++] = 0;
    while (sp) {
        const Node& node = nodes_[stack[--sp]];
        if (!slab_test(node.lo, node.hi, ray, best.valid ? best.t : ray.t_max)) continue;
        if (node.count > 0) {
            hit_leaf(node, ray, best);
        } else {
            stack[sp++] = node.left;
            stack[sp++] = node.right;
        }
    }
    if (best.valid) {
        const auto& tri = mesh_.indices[best.tri];
        double b0 = 1.0 - best.b1 - best.b2;
        best.position = ray.origin + ray.dir * best.t;
        best.geom_normal = mesh_.face_normal(best.tri);
        best.normal = normalize(mesh_.normals[tri[0]] * b0 + mesh_.normals[tri[1]] * best.b1 +
                                mesh_.normals[tri[2]] * best.b2);
        if (!mesh_.uvs.empty()) {
            Vec2 uv0 = mesh_.uvs[tri[0]], uv1 = mesh_.uvs[tri[1]], uv2 = mesh_.uvs[tri[2]];
            best.uv = {uv0.x * b0 + uv1.x * best.b1 + uv2.x * best.b2,
                       uv0.y * b0 + uv1.y * best.b1 + uv2.y * best.b2};
        }
    }
    return best;
}

bool Bvh::intersect_any(const Ray& ray) const {
    int stack[64];
    int sp = 0;
    stack[sp++] = 0;
    while (sp) {
        const Node& node = nodes_[stack[--sp]];
        if (!slab_test(node.lo, node.hi, ray, ray.t_max)) continue;
        if (node.count > 0) {
            for (int i = node.first; i < node.first + node.count; ++i) {
                const auto& tri = mesh_.indices[order_[i]];
                double t, b1, b2;
                if (ray_triangle(ray, mesh_.positions[tri[0]], mesh_.positions[tri[1]],
                                 mesh_.positions[tri[2]], t, b1, b2))
                    return true;
            }
        } else {
            stack[sp++] = node.left;
            stack[sp++] = node.right;
        }
    }
    return false;
}

ClosestPoint Bvh::closest_point(const Vec3& p) const {
    ClosestPoint best;
    // Ordered traversal by box distance.
    struct Entry {
        double d2;
        int node;
    };
    Entry stack[64];
    int sp = 0;
    auto box_d2 = [&](const Node& n) {
        Vec3 q = max(n.lo, min(p, n.hi));
        return length_squared(q - p);
    };
    stack[sp++] = {box_d2(nodes_[0]), 0};
    while (sp) {
        Entry e = stack[--sp];
        if (e.d2 >= best.distance_sq) continue;
        const Node& node = nodes_[e.node];
        if (node.count > 0) {
            for (int i = node.first; i < node.first + node.count; ++i) {
                int ti = order_[i];
                const auto& tri = mesh_.indices[ti];
                Vec3 cp = closest_on_triangle(p, mesh_.positions[tri[0]], mesh_.positions[tri[1]],
                                              mesh_.positions[tri[2]]);
                double d2 = length_squared(cp - p);
                if (d2 < best.distance_sq) {
                    best.distance_sq = d2;
                    best.tri = ti;
                    best.point = cp;
                }
            }
        } else {
            Entry a{box_d2(nodes_[node.left]), node.left};
            Entry b{box_d2(nodes_[node.right]), node.right};
            if (a.d2 > b.d2) std::swap(a, b);  // push the nearer child last
            stack[sp++] = b;
            stack[sp++] = a;
        }
    }
    return best;
}

Vec3 Bvh::edge_normal(int a, int b) const {
    uint64_t key = edge_key(a, b);
    auto it = std::lower_bound(edge_pseudonormal_.begin(), edge_pseudonormal_.end(), key,
                               [](const auto& e, uint64_t k) { return e.first < k; });
    if (it != edge_pseudonormal_.end() && it->first == key) return it->second;
    return {0, 0, 0};
}

double Bvh::signed_distance(const Vec3& p) const {
    ClosestPoint cp = closest_point(p);
    const auto& tri = mesh_.indices[cp.tri];
    const Vec3 a = mesh_.positions[tri[0]], b = mesh_.positions[tri[1]], c = mesh_.positions[tri[2]];
    // Classify the closest feature by barycentric coordinates.
    Vec3 n = cross(b - a, c - a);
    double den = dot(n, n);
    Vec3 q = cp.point;
    double w2 = dot(cross(b - a, q - a), n) / den;
    double w1 = dot(cross(q - a, c - a), n) / den;
    double w0 = 1.0 - w1 - w2;
    const double eps = 1e-9;
    Vec3 pseudo;
    int on_vertex = w0 > 1.0 - eps ? 0 : w1 > 1.0 - eps ? 1 : w2 > 1.0 - eps ? 2 : -1;
    if (on_vertex >= 0) {
        pseudo = vertex_pseudonormal_[tri[on_vertex]];
    } else if (w0 < eps) {
        pseudo = edge_normal(tri[1], tri[2]);
    } else if (w1 < eps) {
        pseudo = edge_normal(tri[0], tri[2]);
    } else if (w2 < eps) {
        pseudo = edge_normal(tri[0], tri[1]);
    } else {
        pseudo = mesh_.face_normal(cp.tri);
    }
    double d = std::sqrt(cp.distance_sq);
    return dot(p - cp.point, pseudo) >= 0.0 ? d : -d;
}

TriangleMesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open mesh: " + path);
    std::vector<Vec3> pos, nrm;
    std::vector<Vec2> tex;
    // OBJ faces may index position/uv/normal separately; rebuild unified verts.
    std::map<std::array<int, 3>, int> remap;
    TriangleMesh mesh;
    bool any_normals = false, any_uvs = false;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "v") {
            Vec3 p;
            ss >> p.x >> p.y >> p.z;
            pos.push_back(p);
        } else if (tag == "vn") {
            Vec3 n;
            ss >> n.x >> n.y >> n.z;
            nrm.push_back(n);
            any_normals = true;
        } else if (tag == "vt") {
            Vec2 t;
            ss >> t.x >> t.y;
            tex.push_back(t);
            any_uvs = true;
        } else if (tag == "f") {
            std::vector<int> face;
            std::string vert;
            while (ss >> vert) {
                int vi = 0, ti = 0, ni = 0;
                std::sscanf(vert.c_str(), "%d/%d/%d", &vi, &ti, &ni);
                if (ti == 0 && ni == 0) {
                    std::sscanf(vert.c_str(), "%d//%d", &vi, &ni);
                    std::sscanf(vert.c_str(), "%d", &vi);
                }
                auto fix = [](int idx, size_t n) { return idx > 0 ? idx - 1 : int(n) + idx; };
                std::array<int, 3> key{fix(vi, pos.size()), ti ? fix(ti, tex.size()) : -1,
                                       ni ? fix(ni, nrm.size()) : -1};
                auto it = remap.find(key);
                if (it == remap.end()) {
                    int id = int(mesh.positions.size());
                    mesh.positions.push_back(pos.at(key[0]));
                    mesh.uvs.push_back(key[1] >= 0 ? tex.at(key[1]) : Vec2{0, 0});
                    mesh.normals.push_back(key[2] >= 0 ? nrm.at(key[2]) : Vec3{0, 0, 0});
                    it = remap.emplace(key, id).first;
                }
                face.push_back(it->second);
            }
            for (size_t k = 2; k < face.size(); ++k)  // fan triangulation
                mesh.indices.push_back({face[0], int(face[k - 1]), int(face[k])});
        }
    }
    if (!any_uvs) mesh.uvs.assign(mesh.positions.size(), Vec2{0, 0});
    if (!any_normals)
        mesh.compute_vertex_normals();
    else
        for (auto& n : mesh.normals) n = length(n) > 1e-18 ? normalize(n) : Vec3{0, 0, 1};
    mesh.validate();
    return mesh;
}

void save_obj(const TriangleMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write mesh: " + path);
    out.precision(9);
    for (const auto& p : mesh.positions) out << "v " << p.x << " " << p.y << " " << p.z << "\n";
    for (const auto& t : mesh.uvs) out << "vt " << t.x << " " << t.y << "\n";
    for (const auto& n : mesh.normals) out << "vn " << n.x << " " << n.y << " " << n.z << "\n";
    for (const auto& f : mesh.indices)
        out << "f " << f[0] + 1 << "/" << f[0] + 1 << "/" << f[0] + 1 << " " << f[1] + 1 << "/"
            << f[1] + 1 << "/" << f[1] + 1 << " " << f[2] + 1 << "/" << f[2] + 1 << "/" << f[2] + 1
            << "\n";
}

double box_sdf(const Vec3& p, const Vec3& he) {
    Vec3 q = abs(p) - he;
    Vec3 outside = max(q, Vec3{0, 0, 0});
    double inside = std::min(0.0, max_component(q));
    return length(outside) + inside;
}

TriangleMesh make_box_mesh(const Vec3& he) {
    TriangleMesh m;
    // 24 vertices (4 per face) so each face gets flat normals and its own UV tile.
    const int axes[6][3] = {{0, 1, 2}, {0, 1, 2}, {1, 2, 0}, {1, 2, 0}, {2, 0, 1}, {2, 0, 1}};
    for (int f = 0; f < 6; ++f) {
        int a = axes[f][0], b = axes[f][1], c = axes[f][2];
        double sign = f % 2 == 0 ? 1.0 : -1.0;
        Vec3 n{0, 0, 0};
        n[c] = sign;
        int base = int(m.positions.size());
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                Vec3 p;
                p[c] = sign * he[c];
                p[a] = (i ? 1.0 : -1.0) * he[a];
                p[b] = (j ? 1.0 : -1.0) * he[b];
                m.positions.push_back(p);
                m.normals.push_back(n);
                // Tile the 6 faces in a 3x2 UV atlas.
                double u0 = (f % 3) / 3.0, v0 = (f / 3) / 2.0;
                m.uvs.push_back({u0 + (i ? 0.98 : 0.02) / 3.0, v0 + (j ? 0.98 : 0.02) / 2.0});
            }
        if (sign > 0) {
            m.indices.push_back({base, base + 3, base + 1});
            m.indices.push_back({base, base + 2, base + 3});
        } else {
            m.indices.push_back({base, base + 1, base + 3});
            m.indices.push_back({base, base + 3, base + 2});
        }
    }
    return m;
}

}  // namespace texsg
