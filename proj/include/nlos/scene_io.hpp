#pragma once

#include <string>

#include <json.hpp>

#include "nlos/scene.hpp"

namespace nlos {

// Scene files are JSON (schema "nlos-scene-v1", all lengths in meters, angles
// in degrees). Point clouds are referenced by path relative to the scene file.
SceneConfig load_scene_file(const std::string& path);
SceneConfig scene_from_json(const nlohmann::json& j, const std::string& base_dir);
nlohmann::json scene_to_json(const SceneConfig& scene);

// Oriented point cloud, binary: magic "NLOSPC01", uint32 count, float32
// positions xyz, float32 normals xyz, float32 albedos. patch_area lives in
// the scene file, not here.
void save_pointcloud(const std::string& path, const NlosObject& object);
NlosObject load_pointcloud(const std::string& path);

}  // namespace nlos
