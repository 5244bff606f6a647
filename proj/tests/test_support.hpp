#pragma once

// Shared helpers for unit and acceptance suites.

#include <cmath>
#include <string>

#include "nlos/render.hpp"
#include "nlos/rng.hpp"
#include "nlos/scene.hpp"

namespace nlos::testing {

// Randomized scene within the oracle size limits: <= 16x16 pixels, <= 50
// object points, <= 100 wall patches.
inline SceneConfig random_scene(std::uint64_t seed) {
  Rng rng(seed);
  SceneConfig s;
  s.lidar = make_lidar_pose(
      {rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)},
      {rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), 1.0},
      {rng.uniform(-0.2, 0.2), 1.0, rng.uniform(-0.2, 0.2)});
  s.wall.normal = normalized(Vec3{rng.uniform(-0.9, 0.9), rng.uniform(-0.5, 0.5), -1.0});
  s.wall.point = s.lidar.origin + s.lidar.forward * rng.uniform(0.8, 2.0);
  s.wall.albedo = rng.uniform(0.3, 0.9);
  s.wall.extent_w = rng.uniform(2.0, 5.0);
  s.wall.extent_h = rng.uniform(2.0, 5.0);
  s.wall.patches_u = 1 + static_cast<int>(rng.uniform_int(0, 9));
  s.wall.patches_v = 1 + static_cast<int>(rng.uniform_int(0, 9));
  s.grid.width = 4 + static_cast<int>(rng.uniform_int(0, 12));
  s.grid.height = 4 + static_cast<int>(rng.uniform_int(0, 12));
  s.grid.h_fov_deg = rng.uniform(30, 80);
  s.grid.v_fov_deg = rng.uniform(30, 70);
  s.render.bin_width = rng.uniform(0.003, 0.02);
  s.render.max_path_length = rng.uniform(8.0, 20.0);

  NlosObject obj;
  const int count = 1 + static_cast<int>(rng.uniform_int(0, 49));
  const Vec3 center = s.wall.point + s.wall.normal * rng.uniform(0.1, 0.8);
  for (int i = 0; i < count; ++i) {
    obj.points.push_back(center + Vec3{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3),
                                       rng.uniform(-0.3, 0.3)});
    obj.normals.push_back(normalized(
        Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1) - 0.2}));
    obj.albedos.push_back(rng.uniform(0.2, 1.0));
  }
  obj.patch_area = rng.uniform(1e-4, 4e-3);
  s.object = std::move(obj);
  return s;
}

struct MapComparison {
  bool equal = true;
  std::string detail;
};

// Oracle-equivalence comparison: depths and artifact flags exactly equal,
// intensities within rel_tol relative.
inline MapComparison compare_maps(const DetectionMaps& a, const DetectionMaps& b,
                                  double rel_tol) {
  if (a.width != b.width || a.height != b.height) return {false, "dimension mismatch"};
  for (std::size_t i = 0; i < a.depth.size(); ++i) {
    if (a.depth[i] != b.depth[i]) {
      return {false, "depth mismatch at " + std::to_string(i)};
    }
    if (a.artifact[i] != b.artifact[i]) {
      return {false, "artifact mismatch at " + std::to_string(i)};
    }
    const double denom = std::max(std::abs(a.intensity[i]), std::abs(b.intensity[i]));
    if (denom > 0.0 && std::abs(a.intensity[i] - b.intensity[i]) / denom > rel_tol) {
      return {false, "intensity mismatch at " + std::to_string(i)};
    }
  }
  return {true, ""};
}

}  // namespace nlos::testing
