// Temporary bring-up probe: oracle equivalence + artifact regime calibration.
#include <chrono>
#include <cmath>
#include <cstdio>

#include "nlos/render.hpp"
#include "nlos/rng.hpp"

using namespace nlos;

namespace {

SceneConfig random_scene(std::uint64_t seed) {
  Rng rng(seed);
  SceneConfig s;
  s.lidar = make_lidar_pose({rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)},
                            {rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), 1.0},
                            {rng.uniform(-0.2, 0.2), 1.0, rng.uniform(-0.2, 0.2)});
  // Wall roughly ahead, tilted randomly up to ~50 deg.
  Vec3 n = normalized(Vec3{rng.uniform(-0.9, 0.9), rng.uniform(-0.5, 0.5), -1.0});
  s.wall.normal = n;
  s.wall.point = s.lidar.origin + s.lidar.forward * rng.uniform(0.8, 2.0);
  s.wall.albedo = rng.uniform(0.3, 0.9);
  s.wall.extent_w = rng.uniform(2.0, 5.0);
  s.wall.extent_h = rng.uniform(2.0, 5.0);
  int np = 1 + static_cast<int>(rng.uniform_int(0, 9));
  s.wall.patches_u = np;
  s.wall.patches_v = 1 + static_cast<int>(rng.uniform_int(0, 9));
  s.grid.width = 4 + static_cast<int>(rng.uniform_int(0, 12));
  s.grid.height = 4 + static_cast<int>(rng.uniform_int(0, 12));
  s.grid.h_fov_deg = rng.uniform(30, 80);
  s.grid.v_fov_deg = rng.uniform(30, 70);
  s.render.bin_width = rng.uniform(0.003, 0.02);
  s.render.max_path_length = rng.uniform(8.0, 20.0);

  NlosObject obj;
  const int count = 1 + static_cast<int>(rng.uniform_int(0, 49));
  Vec3 center = s.wall.point + n * rng.uniform(0.1, 0.8);
  for (int i = 0; i < count; ++i) {
    obj.points.push_back(center + Vec3{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3),
                                       rng.uniform(-0.3, 0.3)});
    obj.normals.push_back(normalized(Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1),
                                          rng.uniform(-1, 1) - 0.2}));
    obj.albedos.push_back(rng.uniform(0.2, 1.0));
  }
  obj.patch_area = rng.uniform(1e-4, 4e-3);
  s.object = std::move(obj);
  return s;
}

bool maps_equivalent(const DetectionMaps& a, const DetectionMaps& b, double tol) {
  if (a.depth.size() != b.depth.size()) return false;
  for (std::size_t i = 0; i < a.depth.size(); ++i) {
    if (a.depth[i] != b.depth[i]) {
      std::printf("  depth mismatch at %zu: %.17g vs %.17g\n", i, a.depth[i], b.depth[i]);
      return false;
    }
    if (a.artifact[i] != b.artifact[i]) {
      std::printf("  artifact mismatch at %zu\n", i);
      return false;
    }
    double denom = std::max(std::abs(a.intensity[i]), std::abs(b.intensity[i]));
    if (denom > 0 && std::abs(a.intensity[i] - b.intensity[i]) / denom > tol) {
      std::printf("  intensity mismatch at %zu: rel %.3g\n", i,
                  std::abs(a.intensity[i] - b.intensity[i]) / denom);
      return false;
    }
  }
  return true;
}

}  // namespace

int main() {
  // Part 1: oracle equivalence over seeded random scenes.
  int fails = 0;
  std::size_t artifact_pixels = 0, total_pixels = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    SceneConfig s = random_scene(seed);
    DetectionMaps fast = render_scene(s, 2);
    DetectionMaps brute = render_scene_bruteforce(s);
    if (!maps_equivalent(fast, brute, 1e-9)) {
      std::printf("seed %llu FAILED\n", static_cast<unsigned long long>(seed));
      ++fails;
    }
    artifact_pixels += fast.artifact_count();
    total_pixels += fast.depth.size();
  }
  auto t1 = std::chrono::steady_clock::now();
  std::printf("equivalence: %d failures, %zu/%zu artifact pixels, %.2f s\n", fails,
              artifact_pixels, total_pixels,
              std::chrono::duration<double>(t1 - t0).count());

  // Part 2: artifact regime scene (Fig. 2b style), calibration sweep.
  auto regime = [](double tilt_deg, double wall_z, double dist, double plate_side,
                   double spacing, double wall_albedo, int patches, double bin_w) {
    SceneConfig s;
    s.lidar = make_lidar_pose({0, 0, 0}, {0, 0, 1}, {0, 1, 0});
    const double tilt = deg_to_rad(-tilt_deg);
    s.wall.normal = {std::sin(tilt), 0, -std::cos(tilt)};
    s.wall.point = {0, 0, wall_z};
    s.wall.albedo = wall_albedo;
    s.wall.extent_w = 8.0;
    s.wall.extent_h = 4.0;
    s.wall.patches_u = patches;
    s.wall.patches_v = patches / 2;
    s.grid.width = 32;
    s.grid.height = 32;
    s.render.bin_width = bin_w;

    // Oblique side: azimuth +30 deg => direction (-sin30, 0, cos30).
    Vec3 d{-0.5, 0, std::sqrt(3.0) / 2.0};
    double t = dot(s.wall.point - s.lidar.origin, s.wall.normal) / dot(d, s.wall.normal);
    Vec3 spot = s.lidar.origin + d * t;

    NlosObject obj;
    Vec3 u, v;
    wall_axes(s.wall, &u, &v);
    const int side = static_cast<int>(plate_side / spacing);
    for (int a = 0; a < side; ++a) {
      for (int b = 0; b < side; ++b) {
        Vec3 p = spot + s.wall.normal * dist + u * ((a - side / 2) * spacing) +
                 v * ((b - side / 2) * spacing);
        obj.points.push_back(p);
        obj.normals.push_back(-s.wall.normal);
        obj.albedos.push_back(1.0);
      }
    }
    obj.patch_area = spacing * spacing;
    s.object = std::move(obj);

    DetectionMaps m = render_scene(s, 2);
    // Max over sampled pixels of (max bin total / direct intensity).
    double best_ratio = 0.0;
    const int i = s.grid.height / 2;
    for (int j = s.grid.width / 2; j < s.grid.width; j += 2) {
      DirectReturn dr = trace_direct(s, i, j);
      if (!dr.hit || dr.intensity <= 0.0) continue;
      PathHistogram h = three_bounce_histogram(s, dr.hit_point, s.render);
      double mx = 0.0;
      for (double v2 : h.totals) mx = std::max(mx, v2);
      best_ratio = std::max(best_ratio, mx / dr.intensity);
    }
    std::printf(
        "tilt %.0f z %.2f dist %.2f plate %.2f spacing %.3f walb %.2f patches %d binw "
        "%.3f: artifacts %zu, best ratio %.3f\n",
        tilt_deg, wall_z, dist, plate_side, spacing, wall_albedo, patches, bin_w,
        m.artifact_count(), best_ratio);
  };
  for (double dist : {0.08, 0.12, 0.2, 3.0}) regime(55, 0.7, dist, 0.8, 0.025, 0.95, 96, 0.02);
  regime(56, 0.7, 0.1, 0.8, 0.025, 0.95, 96, 0.02);
  regime(57, 0.7, 0.1, 0.8, 0.025, 0.95, 96, 0.02);
  regime(57, 0.7, 0.1, 0.8, 0.025, 0.95, 96, 0.03);
  regime(57, 0.6, 0.08, 0.8, 0.025, 0.95, 96, 0.03);
  regime(57, 0.6, 0.08, 0.8, 0.025, 0.95, 128, 0.03);

  // Part 3: fast vs brute timing, 32x32 / 200 points / 1024 patches.
  {
    SceneConfig s = random_scene(7);
    s.grid.width = 32;
    s.grid.height = 32;
    s.wall.patches_u = 32;
    s.wall.patches_v = 32;
    NlosObject& obj = *s.object;
    Rng rng(99);
    obj.points.clear();
    obj.normals.clear();
    obj.albedos.clear();
    Vec3 center = s.wall.point + s.wall.normal * 0.4;
    for (int i = 0; i < 200; ++i) {
      obj.points.push_back(center + Vec3{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3),
                                         rng.uniform(-0.3, 0.3)});
      obj.normals.push_back(normalized(Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1),
                                            rng.uniform(-1, 1)}));
      obj.albedos.push_back(0.8);
    }
    auto ta = std::chrono::steady_clock::now();
    DetectionMaps fast = render_scene(s, 0);
    auto tb = std::chrono::steady_clock::now();
    DetectionMaps brute = render_scene_bruteforce(s);
    auto tc = std::chrono::steady_clock::now();
    double ft = std::chrono::duration<double>(tb - ta).count();
    double bt = std::chrono::duration<double>(tc - tb).count();
    std::printf("fast %.4f s, brute %.4f s, speedup %.1fx, equal=%d\n", ft, bt, bt / ft,
                maps_equivalent(fast, brute, 1e-9));
  }

  // Part 4: big render timing, 80x64 / 1000 points / 4096 patches.
  {
    SceneConfig s = random_scene(11);
    s.grid.width = 80;
    s.grid.height = 64;
    s.wall.patches_u = 64;
    s.wall.patches_v = 64;
    NlosObject& obj = *s.object;
    Rng rng(5);
    obj.points.clear();
    obj.normals.clear();
    obj.albedos.clear();
    Vec3 center = s.wall.point + s.wall.normal * 0.4;
    for (int i = 0; i < 1000; ++i) {
      obj.points.push_back(center + Vec3{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3),
                                         rng.uniform(-0.3, 0.3)});
      obj.normals.push_back(normalized(Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1),
                                            rng.uniform(-1, 1)}));
      obj.albedos.push_back(0.8);
    }
    auto ta = std::chrono::steady_clock::now();
    DetectionMaps fast = render_scene(s, 0);
    auto tb = std::chrono::steady_clock::now();
    std::printf("80x64/1000pt/4096patch: %.3f s (artifacts %zu)\n",
                std::chrono::duration<double>(tb - ta).count(), fast.artifact_count());
  }
  return fails == 0 ? 0 : 1;
}
