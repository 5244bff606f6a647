#include "nlos/scene.hpp"

#include <cmath>
#include <string>

#include "nlos/errors.hpp"

namespace nlos {

namespace {
constexpr double kFrameTol = 1e-9;
}

LidarPose make_lidar_pose(const Vec3& origin, const Vec3& forward, const Vec3& up_hint) {
  require(norm(forward) > 0.0, "lidar.forward: zero vector");
  LidarPose pose;
  pose.origin = origin;
  pose.forward = normalized(forward);
  Vec3 up = up_hint - pose.forward * dot(up_hint, pose.forward);
  require(norm(up) > 1e-12, "lidar.up: parallel to forward");
  pose.up = normalized(up);
  pose.right = cross(pose.forward, pose.up);
  return pose;
}

void validate_pose(const LidarPose& pose) {
  const Vec3 axes[3] = {pose.forward, pose.up, pose.right};
  const char* names[3] = {"forward", "up", "right"};
  for (int a = 0; a < 3; ++a) {
    require(std::abs(norm(axes[a]) - 1.0) < kFrameTol,
            std::string("lidar.") + names[a] + ": not unit length");
    for (int b = a + 1; b < 3; ++b) {
      require(std::abs(dot(axes[a], axes[b])) < kFrameTol,
              std::string("lidar.") + names[a] + "/" + names[b] + ": not orthogonal");
    }
  }
  require(norm(cross(pose.forward, pose.up) - pose.right) < 1e-8,
          "lidar frame: right != forward x up");
}

void wall_axes(const WallPlane& wall, Vec3* u_axis, Vec3* v_axis) {
  const Vec3 n = wall.normal;
  Vec3 ref{0, 1, 0};
  if (std::abs(dot(n, ref)) > 0.9) ref = Vec3{0, 0, 1};
  const Vec3 v = normalized(ref - n * dot(ref, n));
  *v_axis = v;
  *u_axis = cross(v, n);
}

std::vector<WallPatch> sample_wall_patches(const WallPlane& wall) {
  require(wall.patches_u >= 1 && wall.patches_v >= 1, "wall.patches: must be >= 1");
  require(wall.extent_w > 0.0 && wall.extent_h > 0.0, "wall.extent: must be > 0");
  Vec3 u, v;
  wall_axes(wall, &u, &v);
  const int nu = wall.patches_u;
  const int nv = wall.patches_v;
  const double area = wall.extent_w * wall.extent_h / (static_cast<double>(nu) * nv);
  std::vector<WallPatch> patches;
  patches.reserve(static_cast<std::size_t>(nu) * nv);
  for (int b = 0; b < nv; ++b) {
    const double vc = ((b + 0.5) / nv - 0.5) * wall.extent_h;
    for (int a = 0; a < nu; ++a) {
      const double uc = ((a + 0.5) / nu - 0.5) * wall.extent_w;
      patches.push_back({wall.point + u * uc + v * vc, area});
    }
  }
  return patches;
}

void validate_object(const NlosObject& object) {
  require(!object.points.empty(), "object.points: empty");
  require(object.normals.size() == object.points.size(),
          "object.normals: size mismatch");
  require(object.albedos.size() == object.points.size(),
          "object.albedos: size mismatch");
  require(object.patch_area > 0.0, "object.patch_area: must be > 0");
  for (std::size_t i = 0; i < object.points.size(); ++i) {
    require(std::abs(norm(object.normals[i]) - 1.0) < 1e-6,
            "object.normals[" + std::to_string(i) + "]: not unit length");
    require(object.albedos[i] >= 0.0 && object.albedos[i] <= 1.0,
            "object.albedos[" + std::to_string(i) + "]: outside [0,1]");
  }
}

void validate_scene(const SceneConfig& scene) {
  validate_pose(scene.lidar);
  require(std::abs(norm(scene.wall.normal) - 1.0) < 1e-6, "wall.normal: not unit length");
  require(scene.wall.albedo >= 0.0 && scene.wall.albedo <= 1.0, "wall.albedo: outside [0,1]");
  require(scene.wall.extent_w > 0.0 && scene.wall.extent_h > 0.0, "wall.extent: must be > 0");
  require(scene.wall.patches_u >= 1 && scene.wall.patches_v >= 1, "wall.patches: must be >= 1");
  require(dot(scene.lidar.origin - scene.wall.point, scene.wall.normal) > 0.0,
          "wall.normal: must point toward the lidar side");
  require(scene.grid.width >= 1 && scene.grid.height >= 1, "grid: resolution must be >= 1");
  require(scene.grid.h_fov_deg > 0.0 && scene.grid.h_fov_deg < 180.0 &&
              scene.grid.v_fov_deg > 0.0 && scene.grid.v_fov_deg < 180.0,
          "grid: fov must lie in (0, 180) degrees");
  require(scene.render.bin_width > 0.0, "render.bin_width: must be > 0");
  require(scene.render.max_path_length > 0.0, "render.max_path_length: must be > 0");
  require(scene.render.min_total_intensity >= 0.0,
          "render.min_total_intensity: must be >= 0");
  const double bins = scene.render.max_path_length / scene.render.bin_width;
  require(bins <= 5e7, "render: too many histogram bins (max_path_length / bin_width)");
  if (scene.object) validate_object(*scene.object);
}

Vec3 pixel_ray(const FovGrid& grid, const LidarPose& lidar, int i, int j) {
  require(i >= 0 && i < grid.height && j >= 0 && j < grid.width,
          "pixel_ray: index out of range");
  const double az = deg_to_rad(grid.h_fov_deg) * ((j + 0.5) / grid.width - 0.5);
  const double el = deg_to_rad(grid.v_fov_deg) * (0.5 - (i + 0.5) / grid.height);
  const double ce = std::cos(el);
  return lidar.forward * (ce * std::cos(az)) + lidar.right * (ce * std::sin(az)) +
         lidar.up * std::sin(el);
}

NlosObject place_object(const NlosObject& object, const WallPlane& wall,
                        double altitude, double yaw_deg, double distance_to_wall) {
  require(distance_to_wall > 0.0, "place_object: distance_to_wall must be > 0");
  validate_object(object);
  Vec3 u, v;
  wall_axes(wall, &u, &v);

  Vec3 centroid{0, 0, 0};
  for (const Vec3& p : object.points) centroid += p;
  centroid = centroid / static_cast<double>(object.points.size());

  const double yaw = deg_to_rad(yaw_deg);
  const double u_offset = dot(centroid - wall.point, u);
  const Vec3 target = wall.point + u * u_offset + v * altitude + wall.normal * distance_to_wall;

  NlosObject placed = object;
  for (std::size_t i = 0; i < object.points.size(); ++i) {
    placed.points[i] = target + rotate_about_axis(object.points[i] - centroid, v, yaw);
    placed.normals[i] = rotate_about_axis(object.normals[i], v, yaw);
  }
  return placed;
}

}  // namespace nlos
