#include <doctest.h>

#include <cmath>

#include "nlos/errors.hpp"
#include "nlos/rng.hpp"
#include "nlos/scene.hpp"

using namespace nlos;

namespace {

double azimuth_of(const LidarPose& lidar, const Vec3& d) {
  return std::atan2(dot(d, lidar.right), dot(d, lidar.forward));
}

}  // namespace

TEST_CASE("pixel_ray: center pixel of an odd grid is the forward axis") {
  LidarPose pose = make_lidar_pose({0, 0, 0}, {0, 0, 1}, {0, 1, 0});
  FovGrid grid{70.0, 55.0, 5, 5};
  Vec3 d = pixel_ray(grid, pose, 2, 2);
  CHECK(norm(d - pose.forward) < 1e-9);
}

TEST_CASE("pixel_ray: extreme columns are symmetric with magnitude (fov/2)*(w-1)/w") {
  LidarPose pose = make_lidar_pose({0, 0, 0}, {0.1, -0.2, 1}, {0, 1, 0.3});
  FovGrid grid{70.0, 55.0, 80, 64};
  const int i = 31;
  const double az_first = azimuth_of(pose, pixel_ray(grid, pose, i, 0));
  const double az_last = azimuth_of(pose, pixel_ray(grid, pose, i, grid.width - 1));
  CHECK(az_first == doctest::Approx(-az_last).epsilon(1e-12));
  const double expect = deg_to_rad(35.0) * (grid.width - 1) / grid.width;
  CHECK(std::abs(az_last - expect) < 1e-9);
}

TEST_CASE("pixel_ray: azimuth strictly increasing in j, unit norms, elevation decreasing in i") {
  LidarPose pose = make_lidar_pose({1, 2, 3}, {0.3, 0.1, 0.9}, {0.05, 1, 0});
  FovGrid grid{70.0, 55.0, 17, 9};
  for (int i = 0; i < grid.height; ++i) {
    double prev = -10.0;
    for (int j = 0; j < grid.width; ++j) {
      Vec3 d = pixel_ray(grid, pose, i, j);
      CHECK(std::abs(norm(d) - 1.0) < 1e-9);
      const double az = azimuth_of(pose, d);
      CHECK(az > prev);
      prev = az;
    }
  }
  // Elevation decreases with i in any fixed column.
  double prev_el = 10.0;
  for (int i = 0; i < grid.height; ++i) {
    Vec3 d = pixel_ray(grid, pose, i, 4);
    const double el = std::asin(dot(d, pose.up));
    CHECK(el < prev_el);
    prev_el = el;
  }
}

TEST_CASE("pixel_ray: out-of-range index is a contract violation") {
  LidarPose pose;
  FovGrid grid;
  CHECK_THROWS_AS(pixel_ray(grid, pose, -1, 0), ContractError);
  CHECK_THROWS_AS(pixel_ray(grid, pose, 0, grid.width), ContractError);
}

TEST_CASE("make_lidar_pose orthonormalizes and validate_pose accepts it") {
  LidarPose pose = make_lidar_pose({0, 0, 0}, {1, 1, 0.2}, {0, 1, 0});
  validate_pose(pose);
  LidarPose broken = pose;
  broken.up = normalized(broken.up + Vec3{0.1, 0, 0});
  CHECK_THROWS_AS(validate_pose(broken), ContractError);
}

TEST_CASE("sample_wall_patches: 1x1 wall is a single patch at the center") {
  WallPlane wall;
  wall.point = {0.5, -1, 3};
  wall.normal = normalized(Vec3{0.2, 0.1, -1});
  wall.extent_w = 2.0;
  wall.extent_h = 1.0;
  wall.patches_u = 1;
  wall.patches_v = 1;
  auto patches = sample_wall_patches(wall);
  REQUIRE(patches.size() == 1);
  CHECK(norm(patches[0].center - wall.point) < 1e-12);
  CHECK(patches[0].area == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("sample_wall_patches: 2x2 quarters and partition property") {
  WallPlane wall;
  wall.normal = {0, 0, -1};
  wall.extent_w = 3.0;
  wall.extent_h = 2.0;
  wall.patches_u = 2;
  wall.patches_v = 2;
  auto patches = sample_wall_patches(wall);
  REQUIRE(patches.size() == 4);
  for (const auto& p : patches) CHECK(p.area == doctest::Approx(1.5).epsilon(1e-12));

  // Random resolutions: areas sum to the extent product, centers on the plane.
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    WallPlane w2;
    w2.point = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(1, 3)};
    w2.normal = normalized(Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), -1.5});
    w2.extent_w = rng.uniform(0.5, 4);
    w2.extent_h = rng.uniform(0.5, 4);
    w2.patches_u = 1 + static_cast<int>(rng.uniform_int(0, 12));
    w2.patches_v = 1 + static_cast<int>(rng.uniform_int(0, 12));
    auto ps = sample_wall_patches(w2);
    CHECK(ps.size() == static_cast<std::size_t>(w2.patches_u) * w2.patches_v);
    double total = 0.0;
    for (const auto& p : ps) {
      total += p.area;
      CHECK(std::abs(dot(p.center - w2.point, w2.normal)) < 1e-9);
    }
    CHECK(total == doctest::Approx(w2.extent_w * w2.extent_h).epsilon(1e-9));
  }
}

namespace {

NlosObject test_blob(Rng& rng, int count) {
  NlosObject obj;
  for (int i = 0; i < count; ++i) {
    obj.points.push_back({rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3),
                          rng.uniform(1.0, 1.4)});
    obj.normals.push_back(normalized(Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1),
                                          rng.uniform(-1, 1)}));
    obj.albedos.push_back(rng.uniform(0.1, 1.0));
  }
  obj.patch_area = 1e-3;
  return obj;
}

WallPlane test_wall() {
  WallPlane wall;
  wall.point = {0, 0, 2};
  wall.normal = {0, 0, -1};
  return wall;
}

}  // namespace

TEST_CASE("place_object: identity placement leaves points unchanged") {
  WallPlane wall = test_wall();
  Vec3 u, v;
  wall_axes(wall, &u, &v);

  Rng rng(7);
  NlosObject obj = test_blob(rng, 20);
  // Rebase so the centroid sits at v-offset 0 and a known distance.
  Vec3 c{0, 0, 0};
  for (const Vec3& p : obj.points) c += p;
  c = c / 20.0;
  const double d0 = 0.75;
  const Vec3 target = wall.point + u * dot(c - wall.point, u) + wall.normal * d0;
  for (Vec3& p : obj.points) p = p - c + target;

  NlosObject placed = place_object(obj, wall, 0.0, 0.0, d0);
  for (std::size_t i = 0; i < obj.points.size(); ++i) {
    CHECK(norm(placed.points[i] - obj.points[i]) < 1e-9);
    CHECK(norm(placed.normals[i] - obj.normals[i]) < 1e-9);
  }
}

TEST_CASE("place_object: full turn reproduces points; rigid transform properties") {
  WallPlane wall = test_wall();
  Rng rng(11);
  NlosObject obj = test_blob(rng, 25);

  NlosObject turn = place_object(obj, wall, 0.1, 360.0, 0.5);
  NlosObject zero = place_object(obj, wall, 0.1, 0.0, 0.5);
  for (std::size_t i = 0; i < obj.points.size(); ++i) {
    CHECK(norm(turn.points[i] - zero.points[i]) < 1e-9);
  }

  // Isometry: pairwise distances preserved under arbitrary placements.
  for (int trial = 0; trial < 10; ++trial) {
    NlosObject placed = place_object(obj, wall, rng.uniform(-0.5, 0.5),
                                     rng.uniform(-180, 180), rng.uniform(0.1, 2.0));
    CHECK(placed.points.size() == obj.points.size());
    CHECK(placed.patch_area == obj.patch_area);
    for (int pair = 0; pair < 20; ++pair) {
      const auto a = static_cast<std::size_t>(rng.uniform_int(0, 24));
      const auto b = static_cast<std::size_t>(rng.uniform_int(0, 24));
      CHECK(std::abs(distance(placed.points[a], placed.points[b]) -
                     distance(obj.points[a], obj.points[b])) < 1e-9);
    }
    for (std::size_t i = 0; i < placed.normals.size(); ++i) {
      CHECK(std::abs(norm(placed.normals[i]) - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("place_object: non-positive distance rejected") {
  Rng rng(3);
  NlosObject obj = test_blob(rng, 4);
  CHECK_THROWS_AS(place_object(obj, test_wall(), 0, 0, 0.0), ContractError);
}

TEST_CASE("validate_scene rejects out-of-range fields") {
  SceneConfig s;
  s.lidar = make_lidar_pose({0, 0, 0}, {0, 0, 1}, {0, 1, 0});
  s.wall = test_wall();
  validate_scene(s);

  SceneConfig bad = s;
  bad.wall.albedo = 1.5;
  CHECK_THROWS_AS(validate_scene(bad), ContractError);
  bad = s;
  bad.render.bin_width = 0.0;
  CHECK_THROWS_AS(validate_scene(bad), ContractError);
  bad = s;
  bad.wall.normal = {0, 0, 1};  // facing away from the lidar
  CHECK_THROWS_AS(validate_scene(bad), ContractError);
}
