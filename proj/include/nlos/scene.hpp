#pragma once

#include <optional>
#include <vector>

#include "nlos/vec3.hpp"

namespace nlos {

// Scanner pose. (forward, up, right) is a right-handed orthonormal frame with
// right = forward x up.
struct LidarPose {
  Vec3 origin;
  Vec3 forward{0, 0, 1};
  Vec3 up{0, 1, 0};
  Vec3 right{-1, 0, 0};
};

// Builds a pose from a forward direction and an up hint (Gram-Schmidt).
LidarPose make_lidar_pose(const Vec3& origin, const Vec3& forward, const Vec3& up_hint);

// Throws ContractError unless the frame is orthonormal within 1e-9.
void validate_pose(const LidarPose& pose);

// Diffuse relay wall: a finite rectangle centered on `point`, spanning
// `extent_w` x `extent_h` meters along the in-plane axes from wall_axes().
// `normal` must point toward the Lidar side.
struct WallPlane {
  Vec3 point;
  Vec3 normal{0, 0, -1};
  double albedo = 0.7;
  double extent_w = 2.0;
  double extent_h = 2.0;
  int patches_u = 16;
  int patches_v = 16;
};

// Deterministic in-plane frame: v is the unit projection of world-up (or of
// world-z when the wall is nearly horizontal) onto the plane; u = v x normal.
void wall_axes(const WallPlane& wall, Vec3* u_axis, Vec3* v_axis);

struct WallPatch {
  Vec3 center;
  double area = 0.0;
};

// Tiles the wall rectangle into patches_u x patches_v equal cells, row-major
// over v then u. Areas sum to the wall area exactly up to rounding.
std::vector<WallPatch> sample_wall_patches(const WallPlane& wall);

// Hidden scene geometry as oriented surfels: one normal and albedo per point,
// a shared per-point patch area.
struct NlosObject {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;
  std::vector<double> albedos;
  double patch_area = 4e-4;
};

void validate_object(const NlosObject& object);

// Angular scan raster. Defaults match a 70x55 degree FOV at 80x64 pixels.
struct FovGrid {
  double h_fov_deg = 70.0;
  double v_fov_deg = 55.0;
  int width = 80;
  int height = 64;
};

struct RenderParams {
  double bin_width = 0.005;        // path-length histogram resolution, m
  double max_path_length = 20.0;   // bins beyond this are dropped, m
  double min_total_intensity = 0.0;
};

struct SceneConfig {
  LidarPose lidar;
  WallPlane wall;
  std::optional<NlosObject> object;
  FovGrid grid;
  RenderParams render;
};

void validate_scene(const SceneConfig& scene);

// Outgoing beam direction for pixel (i, j): equal-angle spacing, pixel-center
// convention, azimuth increasing with j, elevation decreasing with i.
Vec3 pixel_ray(const FovGrid& grid, const LidarPose& lidar, int i, int j);

// Rigid placement relative to the wall: rotate about the wall's vertical
// in-plane axis through the object's centroid by yaw_deg, then translate the
// centroid to wall.point + (original u-offset)*u + altitude*v + distance*n.
NlosObject place_object(const NlosObject& object, const WallPlane& wall,
                        double altitude, double yaw_deg, double distance_to_wall);

}  // namespace nlos
