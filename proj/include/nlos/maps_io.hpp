#pragma once

#include <string>

#include "nlos/render.hpp"

namespace nlos {

// Detection maps, binary: magic "NLOSDM01", uint32 width/height, float32
// depth plane, float32 intensity plane, uint8 artifact plane.
void save_detection_maps(const std::string& path, const DetectionMaps& maps);
DetectionMaps load_detection_maps(const std::string& path);

// Bare depth plane (targets and predictions): magic "NLOSDT01", uint32
// width/height, float32 plane.
void save_depth_map(const std::string& path, const NlosDepthMap& map);
NlosDepthMap load_depth_map(const std::string& path);

// 16-bit binary PGM preview, values normalized to the plane's maximum
// (all-zero plane writes all-zero samples).
void save_pgm16(const std::string& path, int width, int height,
                const std::vector<double>& values);

}  // namespace nlos
