#include "nlos/shapes.hpp"

#include <cmath>

#include "nlos/errors.hpp"

namespace nlos {

SceneConfig make_desk_scene() {
  SceneConfig s;
  s.lidar = make_lidar_pose({0, 0, 0}, {0, 0, 1}, {0, 1, 0});
  const double tilt = deg_to_rad(60.0);
  s.wall.normal = {-std::sin(tilt), 0.0, -std::cos(tilt)};
  s.wall.point = {0, 0, 0.5};
  s.wall.albedo = 0.95;
  s.wall.extent_w = 12.0;
  s.wall.extent_h = 5.0;
  s.wall.patches_u = 96;
  s.wall.patches_v = 40;
  s.grid.width = 32;
  s.grid.height = 32;
  s.grid.h_fov_deg = 70.0;
  s.grid.v_fov_deg = 55.0;
  s.render.bin_width = 0.04;
  s.render.max_path_length = 20.0;
  s.render.min_total_intensity = 0.0;
  return s;
}

WallWindow desk_target_window() { return {1.7, 0.0, 2.6, 1.6}; }

NlosObject make_plate(const WallPlane& wall, PlateShape shape, double width,
                      double height, double spacing, double albedo, double u_anchor) {
  require(width > 0 && height > 0 && spacing > 0, "make_plate: degenerate size");
  Vec3 u, v;
  wall_axes(wall, &u, &v);
  const Vec3 center = wall.point + u * u_anchor + wall.normal * 1.0;
  const Vec3 facing = -wall.normal;

  NlosObject obj;
  const int na = std::max(1, static_cast<int>(std::round(width / spacing)));
  const int nb = std::max(1, static_cast<int>(std::round(height / spacing)));
  for (int a = 0; a < na; ++a) {
    for (int b = 0; b < nb; ++b) {
      const double du = (a + 0.5) / na - 0.5;
      const double dv = (b + 0.5) / nb - 0.5;
      if (shape == PlateShape::Ellipse && du * du + dv * dv > 0.25) continue;
      obj.points.push_back(center + u * (du * width) + v * (dv * height));
      obj.normals.push_back(facing);
      obj.albedos.push_back(albedo);
    }
  }
  obj.patch_area = (width / na) * (height / nb);
  validate_object(obj);
  return obj;
}

namespace {

Vec3 spot_of_pixel(const SceneConfig& s, int i, int j) {
  const Vec3 d = pixel_ray(s.grid, s.lidar, i, j);
  const double denom = dot(d, s.wall.normal);
  require(denom < -1e-9, "spot_of_pixel: ray parallel to wall");
  const double t = dot(s.wall.point - s.lidar.origin, s.wall.normal) / denom;
  return s.lidar.origin + d * t;
}

}  // namespace

SceneConfig make_artifact_scene(double offset_from_spot, int spot_i, int spot_j) {
  SceneConfig s = make_desk_scene();
  const Vec3 spot = spot_of_pixel(s, spot_i, spot_j);
  Vec3 u, v;
  wall_axes(s.wall, &u, &v);

  // Keep the plate close to the wall: at most 0.08 m along the normal, the
  // rest of the offset along the in-plane horizontal.
  const double dn = std::min(0.08, offset_from_spot);
  const double lateral = std::sqrt(std::max(0.0, offset_from_spot * offset_from_spot - dn * dn));
  const Vec3 center = spot + s.wall.normal * dn + u * lateral;

  NlosObject obj;
  const double spacing = 0.025;
  const int side = 40;  // 1.0 m plate
  for (int a = 0; a < side; ++a) {
    for (int b = 0; b < side; ++b) {
      obj.points.push_back(center + u * ((a - side / 2) * spacing) +
                           v * ((b - side / 2) * spacing));
      obj.normals.push_back(-s.wall.normal);
      obj.albedos.push_back(1.0);
    }
  }
  obj.patch_area = spacing * spacing;
  s.object = std::move(obj);
  return s;
}

SceneConfig make_artifact_scene_far(double distance_to_wall) {
  SceneConfig s = make_artifact_scene(0.2);
  NlosObject moved = place_object(*s.object, s.wall, 0.0, 0.0, distance_to_wall);
  s.object = std::move(moved);
  return s;
}

ToyFamily make_toy_family(int sentinel_count) {
  const SceneConfig base = make_desk_scene();
  ToyFamily family;

  const PlateShape shapes[2] = {PlateShape::Rectangle, PlateShape::Ellipse};
  const char* shape_names[2] = {"rect", "ellipse"};
  const double sizes[5][2] = {{0.30, 0.30}, {0.45, 0.30}, {0.30, 0.50},
                              {0.55, 0.40}, {0.45, 0.60}};
  const double anchors[3] = {0.9, 1.5, 2.1};

  char id[64];
  for (int sh = 0; sh < 2; ++sh) {
    for (int sz = 0; sz < 5; ++sz) {
      for (int an = 0; an < 3; ++an) {
        std::snprintf(id, sizeof(id), "%s_w%02d_a%d", shape_names[sh], sz, an);
        family.sources.push_back(
            {id, make_plate(base.wall, shapes[sh], sizes[sz][0], sizes[sz][1], 0.022,
                            1.0, anchors[an])});
      }
    }
  }

  for (double altitude : {-0.18, 0.0, 0.18}) {
    for (double yaw : {-20.0, 0.0, 20.0}) {
      for (double dist : {0.05, 0.08}) {
        family.placements.push_back({altitude, yaw, dist});
      }
    }
  }
  // A couple of wilder placements to widen the depth range.
  family.placements.push_back({0.1, 10.0, 0.1});
  family.placements.push_back({-0.1, -10.0, 0.065});

  family.sentinel_count = sentinel_count;
  return family;
}

}  // namespace nlos
