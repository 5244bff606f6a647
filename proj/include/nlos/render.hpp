#pragma once

#include <cstdint>
#include <vector>

#include "nlos/scene.hpp"

namespace nlos {

// What the Lidar reports per pixel. Depth/intensity are 0 where the beam
// misses the wall (no-return); artifact marks pixels where the three-bounce
// return overwrote the direct one.
struct DetectionMaps {
  int width = 0;
  int height = 0;
  std::vector<double> depth;
  std::vector<double> intensity;
  std::vector<std::uint8_t> artifact;

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * width + j;
  }
  std::size_t artifact_count() const;
};

bool operator==(const DetectionMaps& a, const DetectionMaps& b);

// Per-pixel accumulation of three-bounce throughput over path-length bins.
// Bin b covers [b*bin_width, (b+1)*bin_width); see three_bounce_histogram for
// the per-leg quantization rule that assigns a path to its bin.
struct PathHistogram {
  double bin_width = 0.0;
  std::vector<double> totals;

  double edge(std::size_t b) const { return static_cast<double>(b) * bin_width; }
  double center(std::size_t b) const { return (static_cast<double>(b) + 0.5) * bin_width; }
};

struct DirectReturn {
  bool hit = false;
  double ortho_depth = 0.0;  // (hit - origin) . forward
  double intensity = 0.0;
  double range = 0.0;        // |hit - origin|
  Vec3 hit_point;
};

// Single-bounce wall return for pixel (i, j). A miss yields the no-return
// marker (hit = false, depth and intensity 0).
DirectReturn trace_direct(const SceneConfig& scene, int i, int j);

// Sums Lidar-wall-object-wall-Lidar transport into path-length bins for the
// beam that hit the wall at wall_hit. The forward leg (|Lw| + |wp|) and the
// return leg (|pw'| + |w'L|) are binned separately and the indices added, so
// the factored renderer and this reference sum place every path in the same
// bin. Empty object or no object reachable -> all-zero totals.
PathHistogram three_bounce_histogram(const SceneConfig& scene, const Vec3& wall_hit,
                                     const RenderParams& params);

struct PixelResolution {
  double depth = 0.0;
  double intensity = 0.0;
  bool artifact = false;
};

// The Lidar's per-pixel decision: the strongest histogram bin (ties: smallest
// path length) wins over the direct return only when strictly stronger and at
// least min_total_intensity; the reported depth is then half the bin center.
PixelResolution resolve_pixel(const DirectReturn& direct, const PathHistogram& hist,
                              const RenderParams& params);

// Full detection render using the factored fast path: per object point, a
// precomputed return-leg sub-histogram, shifted per pixel by the forward-leg
// bin offset and scaled by the forward throughput. Pixels run in parallel;
// output is thread-count invariant.
DetectionMaps render_scene(const SceneConfig& scene, int threads = 0);

// Reference oracle: serial quadruple loop (pixels x object points x wall
// patches) through trace_direct / three_bounce_histogram / resolve_pixel.
// Same contract as render_scene.
DetectionMaps render_scene_bruteforce(const SceneConfig& scene);

// Ground-truth hidden-scene depth map: perpendicular wall-to-object distances
// (0 = background).
struct NlosDepthMap {
  int width = 0;
  int height = 0;
  std::vector<double> depth;

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * width + j;
  }
};

// Rasterization window on the wall plane, in wall (u, v) coordinates relative
// to wall.point. Non-positive size means the full wall extent.
struct WallWindow {
  double center_u = 0.0;
  double center_v = 0.0;
  double width = 0.0;
  double height = 0.0;
};

// Projects object points orthogonally onto the wall and rasterizes their
// perpendicular distances into the window grid; nearest point wins per pixel,
// empty pixels are exactly 0.
NlosDepthMap render_target_depth(const SceneConfig& scene, int res_w, int res_h,
                                 const WallWindow& window = {});

}  // namespace nlos
