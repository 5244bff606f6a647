#include "nlos/scene_io.hpp"

#include <filesystem>
#include <fstream>

#include "nlos/binio.hpp"
#include "nlos/errors.hpp"

namespace nlos {

namespace {

using nlohmann::json;

Vec3 vec3_field(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
      !j[2].is_number()) {
    throw ContractError(ctx + ": expected an array of 3 numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

const json& field(const json& j, const char* name, const std::string& ctx) {
  auto it = j.find(name);
  if (it == j.end()) throw ContractError(ctx + ": missing field '" + name + "'");
  return *it;
}

double num_field(const json& j, const char* name, const std::string& ctx) {
  const json& f = field(j, name, ctx);
  if (!f.is_number()) throw ContractError(ctx + "." + name + ": expected a number");
  return f.get<double>();
}

double num_or(const json& j, const char* name, double fallback) {
  auto it = j.find(name);
  return it == j.end() ? fallback : it->get<double>();
}

}  // namespace

SceneConfig scene_from_json(const json& j, const std::string& base_dir) {
  SceneConfig scene;

  const json& lidar = field(j, "lidar", "scene");
  scene.lidar = make_lidar_pose(vec3_field(field(lidar, "origin", "scene.lidar"), "scene.lidar.origin"),
                                vec3_field(field(lidar, "forward", "scene.lidar"), "scene.lidar.forward"),
                                lidar.contains("up") ? vec3_field(lidar["up"], "scene.lidar.up")
                                                     : Vec3{0, 1, 0});

  const json& wall = field(j, "wall", "scene");
  scene.wall.point = vec3_field(field(wall, "point", "scene.wall"), "scene.wall.point");
  scene.wall.normal = normalized(vec3_field(field(wall, "normal", "scene.wall"), "scene.wall.normal"));
  scene.wall.albedo = num_or(wall, "albedo", 0.7);
  const json& extent = field(wall, "extent", "scene.wall");
  scene.wall.extent_w = extent.at(0).get<double>();
  scene.wall.extent_h = extent.at(1).get<double>();
  if (wall.contains("patches")) {
    scene.wall.patches_u = wall["patches"].at(0).get<int>();
    scene.wall.patches_v = wall["patches"].at(1).get<int>();
  }

  if (j.contains("grid") && !j["grid"].is_null()) {
    const json& grid = j["grid"];
    scene.grid.width = static_cast<int>(num_or(grid, "width", 80));
    scene.grid.height = static_cast<int>(num_or(grid, "height", 64));
    scene.grid.h_fov_deg = num_or(grid, "hfov_deg", 70.0);
    scene.grid.v_fov_deg = num_or(grid, "vfov_deg", 55.0);
  }

  if (j.contains("render") && !j["render"].is_null()) {
    const json& render = j["render"];
    scene.render.bin_width = num_or(render, "bin_width", 0.005);
    scene.render.max_path_length = num_or(render, "max_path_length", 20.0);
    scene.render.min_total_intensity = num_or(render, "min_total_intensity", 0.0);
  }

  if (j.contains("object") && !j["object"].is_null()) {
    const json& obj = j["object"];
    const std::string rel = field(obj, "pointcloud", "scene.object").get<std::string>();
    const std::filesystem::path path = std::filesystem::path(base_dir) / rel;
    NlosObject cloud = load_pointcloud(path.string());
    cloud.patch_area = num_or(obj, "patch_area", 4e-4);
    if (obj.contains("placement") && !obj["placement"].is_null()) {
      const json& pl = obj["placement"];
      cloud = place_object(cloud, scene.wall, num_or(pl, "altitude", 0.0),
                           num_or(pl, "yaw_deg", 0.0),
                           num_field(pl, "distance", "scene.object.placement"));
    }
    scene.object = std::move(cloud);
  }

  validate_scene(scene);
  return scene;
}

SceneConfig load_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open scene file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ContractError(path + ": " + e.what());
  }
  const std::string dir = std::filesystem::path(path).parent_path().string();
  try {
    return scene_from_json(j, dir.empty() ? "." : dir);
  } catch (const json::exception& e) {
    throw ContractError(path + ": " + e.what());
  }
}

nlohmann::json scene_to_json(const SceneConfig& scene) {
  json j;
  j["schema"] = "nlos-scene-v1";
  j["lidar"] = {{"origin", {scene.lidar.origin.x, scene.lidar.origin.y, scene.lidar.origin.z}},
                {"forward", {scene.lidar.forward.x, scene.lidar.forward.y, scene.lidar.forward.z}},
                {"up", {scene.lidar.up.x, scene.lidar.up.y, scene.lidar.up.z}}};
  j["wall"] = {{"point", {scene.wall.point.x, scene.wall.point.y, scene.wall.point.z}},
               {"normal", {scene.wall.normal.x, scene.wall.normal.y, scene.wall.normal.z}},
               {"albedo", scene.wall.albedo},
               {"extent", {scene.wall.extent_w, scene.wall.extent_h}},
               {"patches", {scene.wall.patches_u, scene.wall.patches_v}}};
  j["grid"] = {{"width", scene.grid.width},
               {"height", scene.grid.height},
               {"hfov_deg", scene.grid.h_fov_deg},
               {"vfov_deg", scene.grid.v_fov_deg}};
  j["render"] = {{"bin_width", scene.render.bin_width},
                 {"max_path_length", scene.render.max_path_length},
                 {"min_total_intensity", scene.render.min_total_intensity}};
  if (scene.object) {
    j["object"] = {{"points", scene.object->points.size()},
                   {"patch_area", scene.object->patch_area}};
  } else {
    j["object"] = nullptr;
  }
  return j;
}

void save_pointcloud(const std::string& path, const NlosObject& object) {
  validate_object(object);
  BinWriter w(path);
  w.magic("NLOSPC01");
  w.u32(static_cast<std::uint32_t>(object.points.size()));
  for (const Vec3& p : object.points) {
    w.f32(static_cast<float>(p.x));
    w.f32(static_cast<float>(p.y));
    w.f32(static_cast<float>(p.z));
  }
  for (const Vec3& n : object.normals) {
    w.f32(static_cast<float>(n.x));
    w.f32(static_cast<float>(n.y));
    w.f32(static_cast<float>(n.z));
  }
  for (double a : object.albedos) w.f32(static_cast<float>(a));
  w.close();
}

NlosObject load_pointcloud(const std::string& path) {
  BinReader r(path);
  r.expect_magic("NLOSPC01");
  const std::uint32_t n = r.u32();
  if (n == 0) throw ContractError(path + ": empty point cloud");
  NlosObject obj;
  obj.points.resize(n);
  obj.normals.resize(n);
  obj.albedos.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    obj.points[i] = {r.f32(), r.f32(), r.f32()};
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    // Renormalize: float32 storage loses a few bits of unit length.
    obj.normals[i] = normalized(Vec3{r.f32(), r.f32(), r.f32()});
  }
  for (std::uint32_t i = 0; i < n; ++i) obj.albedos[i] = r.f32();
  return obj;
}

}  // namespace nlos
