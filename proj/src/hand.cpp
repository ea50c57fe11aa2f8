// Copyright (c) 2026 The texsg authors.
// SPDX-License-Identifier: Apache-2.0

#include "texsg/hand.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

namespace texsg {

void SkinnedHand::validate() const {
    if (joint_count <= 0) throw InputError("hand has no joints");
    if (canonical_normals.size() != canonical_vertices.size())
        throw InputError("hand normals/vertices size mismatch");
    if (skinning_weights.size() != canonical_vertices.size() * size_t(joint_count))
        throw InputError("hand weight matrix has wrong shape");
    for (size_t v = 0; v < vertex_count(); ++v) {
        double sum = 0.0;
        for (int j = 0; j < joint_count; ++j) {
            double w = weights_of(v)[j];
            if (w < -1e-12) throw InputError("negative skinning weight");
            sum += w;
        }
        if (std::fabs(sum - 1.0) > 1e-6) throw InputError("skinning weights must sum to 1");
        if (std::fabs(length(canonical_normals[v]) - 1.0) > 1e-5)
            throw InputError("hand normals must be unit length");
    }
}

HandPose HandPose::identity(int joint_count) {
    HandPose p;
    p.joint_transforms.assign(joint_count, Mat4::identity());
    return p;
}

void HandPose::validate() const {
    for (const auto& t : joint_transforms)
        if (!is_rotation(t.linear)) throw InputError("joint transform rotation block is not orthonormal");
}

void HandSphereSet::validate(size_t vertex_count) const {
    std::vector<char> seen(vertex_count, 0);
    for (const auto& cell : partition)
        for (int v : cell) {
            if (v < 0 || size_t(v) >= vertex_count || seen[v])
                throw InputError("sphere partition is not a disjoint cover");
            seen[v] = 1;
        }
    for (char s : seen)
        if (!s) throw InputError("sphere partition misses a vertex");
    for (const auto& s : spheres)
        if (!(s.radius > 0.0)) throw InputError("sphere radius must be positive");
}

Mat4 lbs_blend(const HandPose& pose, const double* weights, int joint_count) {
    Mat4 blend = Mat4::identity() * 0.0;
    for (int j = 0; j < joint_count; ++j)
        if (weights[j] != 0.0) blend = blend + pose.joint_transforms[j] * weights[j];
    return blend;
}

PosedHand lbs_forward(const SkinnedHand& hand, const HandPose& pose) {
    if (int(pose.joint_transforms.size()) != hand.joint_count)
        throw InputError("pose joint count mismatch");
    PosedHand out;
    out.vertices.resize(hand.vertex_count());
    out.normals.resize(hand.vertex_count());
    for (size_t v = 0; v < hand.vertex_count(); ++v) {
        Mat4 blend = lbs_blend(pose, hand.weights_of(v), hand.joint_count);
        out.vertices[v] = blend.transform_point(hand.canonical_vertices[v]);
        Vec3 n = blend.linear * hand.canonical_normals[v];
        double len = length(n);
        if (len < 1e-12) throw SkinningError("blended transform collapsed a normal");
        out.normals[v] = n / len;
    }
    return out;
}

namespace {

double frobenius(const Mat3& m) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) s += length_squared(m.col[c]);
    return std::sqrt(s);
}

}  // namespace

Vec3 lbs_inverse(const SkinnedHand& hand, const HandPose& pose, const Vec3& x_obs,
                 const std::vector<double>& weights) {
    if (int(weights.size()) != hand.joint_count) throw InputError("weight vector has wrong length");
    double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::fabs(sum - 1.0) > 1e-6) throw InputError("weights must sum to 1");
    for (double w : weights)
        if (w < -1e-12) throw InputError("weights must be nonnegative");

    Mat4 blend = lbs_blend(pose, weights.data(), hand.joint_count);
    double det = determinant(blend.linear);
    if (std::fabs(det) < 1e-30) throw SkinningError("blended transform is singular");
    Mat3 inv = inverse(blend.linear);
    double cond = frobenius(blend.linear) * frobenius(inv) / 3.0;
    if (cond > 1e8) throw SkinningError("blended transform is ill-conditioned");
    return inv * (x_obs - blend.translation);
}

std::vector<double> interpolate_weights(const SkinnedHand& hand, const Vec3& point, int k) {
    k = std::min<int>(k, int(hand.vertex_count()));
    std::vector<std::pair<double, int>> d2(hand.vertex_count());
    for (size_t v = 0; v < hand.vertex_count(); ++v)
        d2[v] = {length_squared(point - hand.canonical_vertices[v]), int(v)};
    std::partial_sort(d2.begin(), d2.begin() + k, d2.end());
    std::vector<double> w(hand.joint_count, 0.0);
    double wsum = 0.0;
    for (int i = 0; i < k; ++i) {
        if (d2[i].first < 1e-20) {  // exactly on a vertex
            const double* vw = hand.weights_of(d2[i].second);
            return std::vector<double>(vw, vw + hand.joint_count);
        }
        double wi = 1.0 / std::sqrt(d2[i].first);
        wsum += wi;
        const double* vw = hand.weights_of(d2[i].second);
        for (int j = 0; j < hand.joint_count; ++j) w[j] += wi * vw[j];
    }
    for (double& x : w) x /= wsum;
    return w;
}

HandSphereSet power_partition(const SkinnedHand& hand, const std::vector<SphereSeed>& seeds) {
    if (seeds.empty()) throw InputError("power_partition needs at least one seed");
    for (const auto& s : seeds)
        if (!(s.radius > 0.0)) throw InputError("seed radius must be positive");
    HandSphereSet out;
    out.spheres = seeds;
    out.partition.assign(seeds.size(), {});
    for (size_t v = 0; v < hand.vertex_count(); ++v) {
        const Vec3& x = hand.canonical_vertices[v];
        int best = 0;
        double best_d = length_squared(x - seeds[0].center) - seeds[0].radius * seeds[0].radius;
        for (size_t i = 1; i < seeds.size(); ++i) {
            double d = length_squared(x - seeds[i].center) - seeds[i].radius * seeds[i].radius;
            if (d < best_d) {  // strict: ties stay at the lowest index
                best_d = d;
                best = int(i);
            }
        }
        out.partition[best].push_back(int(v));
    }
    for (size_t i = 0; i < out.partition.size(); ++i)
        if (out.partition[i].empty()) out.empty_cells.push_back(int(i));
    return out;
}

HandSphereSet update_posed_spheres(const HandSphereSet& set,
                                   const std::vector<Vec3>& posed_vertices,
                                   const std::vector<Vec3>& posed_normals) {
    if (posed_vertices.size() != posed_normals.size())
        throw InputError("posed vertices/normals size mismatch");
    HandSphereSet out = set;
    for (size_t i = 0; i < set.spheres.size(); ++i) {
        const auto& cell = set.partition[i];
        if (cell.empty()) continue;  // keep previous parameters
        Vec3 center{0, 0, 0};
        for (int v : cell) center += posed_vertices[v];
        center = center / double(cell.size());
        double radius = 0.0;
        for (int v : cell) radius += std::fabs(dot(posed_normals[v], posed_vertices[v] - center));
        radius /= double(cell.size());
        out.spheres[i].center = center;
        out.spheres[i].radius = radius;
    }
    return out;
}

HandPose pose_from_local_rotations(const SkinnedHand& hand, const std::vector<Mat3>& local) {
    if (local.size() != hand.joints.size() || hand.joints.empty())
        throw InputError("local rotation count must match the joint tree");
    HandPose pose;
    pose.joint_transforms.resize(hand.joints.size());
    for (size_t j = 0; j < hand.joints.size(); ++j) {
        const Joint& joint = hand.joints[j];
        // Rotate about the joint head, then apply the parent's transform.
        Mat4 pivot{local[j], joint.head - local[j] * joint.head};
        if (joint.parent < 0) {
            pose.joint_transforms[j] = pivot;
        } else {
            if (size_t(joint.parent) >= j) throw InputError("joint tree must be topologically sorted");
            pose.joint_transforms[j] = pose.joint_transforms[joint.parent] * pivot;
        }
    }
    return pose;
}

namespace {

Vec3 parse_vec3(const nlohmann::json& j) { return {j.at(0), j.at(1), j.at(2)}; }

}  // namespace

SkinnedHand load_hand(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open hand asset: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InputError("bad hand JSON " + path + ": " + e.what());
    }
    SkinnedHand hand;
    for (const auto& v : j.at("vertices")) hand.canonical_vertices.push_back(parse_vec3(v));
    for (const auto& n : j.at("normals")) hand.canonical_normals.push_back(normalize(parse_vec3(n)));
    for (const auto& joint : j.at("joints")) {
        Joint jt;
        jt.name = joint.at("name");
        jt.parent = joint.at("parent");
        jt.head = parse_vec3(joint.at("head"));
        hand.joints.push_back(jt);
    }
    hand.joint_count = int(hand.joints.size());
    for (const auto& row : j.at("weights"))
        for (const auto& w : row) hand.skinning_weights.push_back(double(w));
    if (j.contains("triangles"))
        for (const auto& t : j.at("triangles"))
            hand.triangles.push_back({int(t.at(0)), int(t.at(1)), int(t.at(2))});
    hand.validate();
    return hand;
}

void save_hand(const SkinnedHand& hand, const std::string& path) {
    nlohmann::json j;
    for (const auto& v : hand.canonical_vertices) j["vertices"].push_back({v.x, v.y, v.z});
    for (const auto& n : hand.canonical_normals) j["normals"].push_back({n.x, n.y, n.z});
    for (const auto& joint : hand.joints)
        j["joints"].push_back({{"name", joint.name},
                               {"parent", joint.parent},
                               {"head", {joint.head.x, joint.head.y, joint.head.z}}});
    for (size_t v = 0; v < hand.vertex_count(); ++v) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < hand.joint_count; ++k) row.push_back(hand.weights_of(v)[k]);
        j["weights"].push_back(row);
    }
    for (const auto& t : hand.triangles) j["triangles"].push_back({t[0], t[1], t[2]});
    std::ofstream out(path);
    if (!out) throw InputError("cannot write hand asset: " + path);
    out << j.dump() << "\n";
}

std::vector<SphereSeed> load_sphere_seeds(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open sphere seeds: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InputError("bad sphere JSON " + path + ": " + e.what());
    }
    std::vector<SphereSeed> seeds;
    for (const auto& e : j)
        seeds.push_back({parse_vec3(e.at("center")), e.at("radius")});
    return seeds;
}

void save_sphere_seeds(const std::vector<SphereSeed>& seeds, const std::string& path) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& s : seeds)
        j.push_back({{"center", {s.center.x, s.center.y, s.center.z}}, {"radius", s.radius}});
    std::ofstream out(path);
    if (!out) throw InputError("cannot write sphere seeds: " + path);
    out << j.dump(1) << "\n";
}

}  // namespace texsg
