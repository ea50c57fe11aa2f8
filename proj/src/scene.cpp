// Copyright (c) 2026 The texsg authors.
// SPDX-License-Identifier: Apache-2.0

#include "texsg/scene.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace texsg {

void RigidPose::validate() const {
    if (!is_rotation(rotation)) throw InputError("object pose rotation must be a proper rotation");
}

Vec3 object_inverse_transform(const RigidPose& pose, const Vec3& x_world) {
    return transpose(pose.rotation) * (x_world - pose.translation);
}

void Camera::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0)) throw InputError("camera focal length must be positive");
    if (width <= 0 || height <= 0) throw InputError("camera reference resolution must be positive");
    if (!is_rotation(rotation)) throw InputError("camera rotation must be a proper rotation");
}

Ray Camera::primary_ray(double px, double py, int render_w, int render_h) const {
    double sx = double(render_w) / width, sy = double(render_h) / height;
    Vec3 dir_cam{(px - cx * sx) / (fx * sx), (py - cy * sy) / (fy * sy), 1.0};
    Ray ray;
    ray.origin = position;
    ray.dir = normalize(rotation * dir_cam);
    return ray;
}

void Scene::prepare() {
    if (!bvh && !object_mesh.indices.empty()) bvh = std::make_shared<Bvh>(object_mesh);
    if (has_hand()) {
        hand->validate();
        canonical_spheres = power_partition(*hand, sphere_seeds);
    }
}

void Scene::validate() const {
    if (object_mesh.indices.empty()) throw InputError("scene has no object mesh");
    environment.validate();
    material.validate();
    for (const auto& f : frames) {
        f.object_pose.validate();
        f.camera.validate();
        if (has_hand()) f.hand_pose.validate();
    }
}

double Scene::object_sdf(const Vec3& p) const {
    if (box_half_extents) return box_sdf(p, *box_half_extents);
    if (!bvh) throw InputError("scene has no distance field");
    return bvh->signed_distance(p);
}

HandSphereSet Scene::posed_spheres_world(int frame) const {
    if (!has_hand()) return {};
    if (frame < 0 || size_t(frame) >= frames.size()) throw InputError("frame index out of range");
    PosedHand posed = lbs_forward(*hand, frames[frame].hand_pose);
    return update_posed_spheres(canonical_spheres, posed.vertices, posed.normals);
}

HandSphereSet Scene::posed_spheres_canonical(int frame) const {
    HandSphereSet set = posed_spheres_world(frame);
    const RigidPose& pose = frames[frame].object_pose;
    for (auto& s : set.spheres) s.center = object_inverse_transform(pose, s.center);
    return set;
}

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

Vec3 parse_vec3(const json& j) { return {j.at(0), j.at(1), j.at(2)}; }

Mat3 parse_mat3(const json& j) {
    if (j.size() != 9) throw InputError("rotation must be 9 row-major numbers");
    return Mat3::from_rows({j.at(0), j.at(1), j.at(2)}, {j.at(3), j.at(4), j.at(5)},
                           {j.at(6), j.at(7), j.at(8)});
}

HandPose parse_hand_pose(const json& j) {
    HandPose pose;
    for (const auto& joint : j.at("joints")) {
        Mat4 t;
        t.linear = parse_mat3(joint.at("rotation"));
        t.translation = parse_vec3(joint.at("translation"));
        pose.joint_transforms.push_back(t);
    }
    return pose;
}

}  // namespace

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open scene: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InputError("bad scene JSON " + path + ": " + e.what());
    }
    fs::path base = fs::path(path).parent_path();
    auto resolve = [&](const std::string& rel) { return (base / rel).string(); };

    Scene scene;
    scene.object_mesh = load_obj(resolve(j.at("mesh")));
    if (j.contains("sdf")) {
        const auto& sdf = j.at("sdf");
        if (sdf.at("type") == "box")
            scene.box_half_extents = parse_vec3(sdf.at("half_extents"));
        else
            throw InputError("unknown sdf type in scene");
        if (sdf.contains("trace") && sdf.at("trace").get<bool>()) scene.trace_sdf = true;
    }
    scene.environment = load_environment(resolve(j.at("environment")));
    scene.material = load_material(resolve(j.at("material")));
    if (j.contains("hand")) {
        scene.hand = load_hand(resolve(j.at("hand")));
        scene.sphere_seeds = load_sphere_seeds(resolve(j.at("hand_spheres")));
    }
    if (j.contains("background")) scene.background = parse_vec3(j.at("background"));
    for (const auto& f : j.at("frames")) {
        FramePose frame;
        frame.object_pose.rotation = parse_mat3(f.at("object_pose").at("rotation"));
        frame.object_pose.translation = parse_vec3(f.at("object_pose").at("translation"));
        if (f.contains("hand_pose")) frame.hand_pose = parse_hand_pose(f.at("hand_pose"));
        const auto& c = f.at("camera");
        frame.camera.fx = c.at("fx");
        frame.camera.fy = c.at("fy");
        frame.camera.cx = c.at("cx");
        frame.camera.cy = c.at("cy");
        frame.camera.width = c.at("width");
        frame.camera.height = c.at("height");
        frame.camera.rotation = parse_mat3(c.at("rotation"));
        frame.camera.position = parse_vec3(c.at("position"));
        scene.frames.push_back(frame);
    }
    scene.prepare();
    scene.validate();
    return scene;
}

}  // namespace texsg
