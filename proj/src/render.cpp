#include "nlos/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlos/errors.hpp"
#include "nlos/parallel.hpp"

namespace nlos {

namespace {

// Shared transport primitives. The fast path and the brute-force oracle must
// evaluate these through the same expressions so that bin indices and skip
// decisions agree bit-for-bit.

inline int leg_bin(double length, double inv_bin_width) {
  return static_cast<int>(std::floor(length * inv_bin_width));
}

inline int histogram_bins(const RenderParams& params) {
  return static_cast<int>(std::ceil(params.max_path_length / params.bin_width));
}

// Lambertian transfer a -> b: albedo_a * cos_out * cos_in * area_b / (pi r^2).
// Zero when either cosine is non-positive or the points coincide.
inline double lambert_segment(const Vec3& a, const Vec3& a_normal, double a_albedo,
                              const Vec3& b, const Vec3& b_normal, double b_area) {
  const Vec3 d = b - a;
  const double r2 = norm2(d);
  if (r2 < 1e-18) return 0.0;
  const double r = std::sqrt(r2);
  const double cos_out = dot(a_normal, d) / r;
  if (cos_out <= 0.0) return 0.0;
  const double cos_in = -dot(b_normal, d) / r;
  if (cos_in <= 0.0) return 0.0;
  return a_albedo * cos_out * cos_in * b_area / (kPi * r2);
}

inline PixelResolution choose_pixel(const DirectReturn& direct, double best_total,
                                    int best_bin, const RenderParams& params) {
  if (best_bin >= 0 && best_total > direct.intensity &&
      best_total >= params.min_total_intensity) {
    const double center = (best_bin + 0.5) * params.bin_width;
    return {center * 0.5, best_total, true};
  }
  if (!direct.hit) return {0.0, 0.0, false};
  return {direct.ortho_depth, direct.intensity, false};
}

// Per object point: return-leg transport (p -> w' -> Lidar) binned over
// |pw'| + |w'L|. Independent of the pixel, so computed once per scene.
struct ReturnSubHist {
  int base_bin = 0;
  std::vector<double> mass;
};

std::vector<ReturnSubHist> build_return_subhists(const SceneConfig& scene,
                                                 const std::vector<WallPatch>& patches,
                                                 int num_bins, int threads) {
  const NlosObject& obj = *scene.object;
  const double inv_bw = 1.0 / scene.render.bin_width;
  const Vec3 origin = scene.lidar.origin;
  const Vec3 receiver_normal = scene.lidar.forward;
  const Vec3 wall_n = scene.wall.normal;
  const double wall_albedo = scene.wall.albedo;

  std::vector<ReturnSubHist> sub(obj.points.size());
  std::vector<int> bins_scratch;  // unused; per-point scratch lives in the lambda

  parallel_chunks(obj.points.size(), threads, [&](std::size_t kb, std::size_t ke) {
    std::vector<int> bin_of(patches.size());
    std::vector<double> mass_of(patches.size());
    for (std::size_t k = kb; k < ke; ++k) {
      const Vec3 p = obj.points[k];
      const Vec3 pn = obj.normals[k];
      const double pa = obj.albedos[k];
      int lo = std::numeric_limits<int>::max();
      int hi = -1;
      for (std::size_t l = 0; l < patches.size(); ++l) {
        const Vec3 c = patches[l].center;
        const double t = lambert_segment(p, pn, pa, c, wall_n, patches[l].area) *
                         lambert_segment(c, wall_n, wall_albedo, origin, receiver_normal, 1.0);
        mass_of[l] = t;
        if (t <= 0.0) {
          bin_of[l] = -1;
          continue;
        }
        const double ret_len = distance(p, c) + distance(c, origin);
        const int rb = leg_bin(ret_len, inv_bw);
        bin_of[l] = rb < num_bins ? rb : -1;
        if (bin_of[l] >= 0) {
          lo = std::min(lo, rb);
          hi = std::max(hi, rb);
        }
      }
      if (hi < 0) continue;  // nothing reachable from this point
      sub[k].base_bin = lo;
      sub[k].mass.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
      for (std::size_t l = 0; l < patches.size(); ++l) {
        if (bin_of[l] >= 0) sub[k].mass[bin_of[l] - lo] += mass_of[l];
      }
    }
  });
  return sub;
}

}  // namespace

std::size_t DetectionMaps::artifact_count() const {
  std::size_t n = 0;
  for (std::uint8_t a : artifact) n += a != 0;
  return n;
}

bool operator==(const DetectionMaps& a, const DetectionMaps& b) {
  return a.width == b.width && a.height == b.height && a.depth == b.depth &&
         a.intensity == b.intensity && a.artifact == b.artifact;
}

DirectReturn trace_direct(const SceneConfig& scene, int i, int j) {
  const Vec3 d = pixel_ray(scene.grid, scene.lidar, i, j);
  const Vec3 n = scene.wall.normal;
  const double denom = dot(d, n);
  DirectReturn out;
  if (denom >= -1e-12) return out;  // parallel or hits the back face
  const double t = dot(scene.wall.point - scene.lidar.origin, n) / denom;
  if (t <= 0.0) return out;
  const Vec3 hit = scene.lidar.origin + d * t;

  Vec3 u, v;
  wall_axes(scene.wall, &u, &v);
  const Vec3 rel = hit - scene.wall.point;
  if (std::abs(dot(rel, u)) > 0.5 * scene.wall.extent_w ||
      std::abs(dot(rel, v)) > 0.5 * scene.wall.extent_h) {
    return out;
  }

  out.hit = true;
  out.hit_point = hit;
  out.range = norm(hit - scene.lidar.origin);
  out.ortho_depth = dot(hit - scene.lidar.origin, scene.lidar.forward);
  const double cos_i = -denom;  // d is unit, n is unit
  out.intensity = scene.wall.albedo * cos_i * cos_i / (kPi * out.range * out.range);
  return out;
}

PathHistogram three_bounce_histogram(const SceneConfig& scene, const Vec3& wall_hit,
                                     const RenderParams& params) {
  const int num_bins = histogram_bins(params);
  PathHistogram hist;
  hist.bin_width = params.bin_width;
  hist.totals.assign(static_cast<std::size_t>(num_bins), 0.0);
  if (!scene.object || scene.object->points.empty()) return hist;

  const NlosObject& obj = *scene.object;
  const std::vector<WallPatch> patches = sample_wall_patches(scene.wall);
  const double inv_bw = 1.0 / params.bin_width;
  const Vec3 origin = scene.lidar.origin;
  const Vec3 receiver_normal = scene.lidar.forward;
  const Vec3 wall_n = scene.wall.normal;

  for (std::size_t k = 0; k < obj.points.size(); ++k) {
    const Vec3 p = obj.points[k];
    const double fwd_len = distance(origin, wall_hit) + distance(wall_hit, p);
    const double fwd = lambert_segment(wall_hit, wall_n, scene.wall.albedo, p,
                                       obj.normals[k], obj.patch_area);
    if (fwd <= 0.0) continue;
    const int fb = leg_bin(fwd_len, inv_bw);
    for (std::size_t l = 0; l < patches.size(); ++l) {
      const Vec3 c = patches[l].center;
      const double contrib =
          fwd * lambert_segment(p, obj.normals[k], obj.albedos[k], c, wall_n,
                                patches[l].area) *
          lambert_segment(c, wall_n, scene.wall.albedo, origin, receiver_normal, 1.0);
      if (contrib <= 0.0) continue;
      const double ret_len = distance(p, c) + distance(c, origin);
      const int q = fb + leg_bin(ret_len, inv_bw);
      if (q >= 0 && q < num_bins) hist.totals[q] += contrib;
    }
  }
  return hist;
}

PixelResolution resolve_pixel(const DirectReturn& direct, const PathHistogram& hist,
                              const RenderParams& params) {
  int best_bin = -1;
  double best_total = 0.0;
  for (std::size_t b = 0; b < hist.totals.size(); ++b) {
    if (hist.totals[b] > best_total) {
      best_total = hist.totals[b];
      best_bin = static_cast<int>(b);
    }
  }
  return choose_pixel(direct, best_total, best_bin, params);
}

DetectionMaps render_scene(const SceneConfig& scene, int threads) {
  validate_scene(scene);
  const int w = scene.grid.width;
  const int h = scene.grid.height;
  DetectionMaps maps;
  maps.width = w;
  maps.height = h;
  maps.depth.assign(static_cast<std::size_t>(w) * h, 0.0);
  maps.intensity.assign(static_cast<std::size_t>(w) * h, 0.0);
  maps.artifact.assign(static_cast<std::size_t>(w) * h, 0);

  const bool with_object = scene.object && !scene.object->points.empty();
  const int num_bins = histogram_bins(scene.render);
  const double inv_bw = 1.0 / scene.render.bin_width;

  std::vector<WallPatch> patches;
  std::vector<ReturnSubHist> sub;
  if (with_object) {
    patches = sample_wall_patches(scene.wall);
    sub = build_return_subhists(scene, patches, num_bins, threads);
  }

  const Vec3 origin = scene.lidar.origin;
  const Vec3 wall_n = scene.wall.normal;
  const double wall_albedo = scene.wall.albedo;
  const NlosObject* obj = with_object ? &*scene.object : nullptr;

  parallel_chunks(static_cast<std::size_t>(w) * h, threads, [&](std::size_t pb, std::size_t pe) {
    std::vector<double> bins(static_cast<std::size_t>(num_bins), 0.0);
    for (std::size_t px = pb; px < pe; ++px) {
      const int i = static_cast<int>(px) / w;
      const int j = static_cast<int>(px) % w;
      const DirectReturn direct = trace_direct(scene, i, j);
      PixelResolution res{direct.hit ? direct.ortho_depth : 0.0,
                          direct.hit ? direct.intensity : 0.0, false};
      if (direct.hit && obj != nullptr) {
        int lo = num_bins;
        int hi = -1;
        for (std::size_t k = 0; k < obj->points.size(); ++k) {
          if (sub[k].mass.empty()) continue;
          const Vec3 p = obj->points[k];
          const double fwd_len = direct.range + distance(direct.hit_point, p);
          const double fwd = lambert_segment(direct.hit_point, wall_n, wall_albedo, p,
                                             obj->normals[k], obj->patch_area);
          if (fwd <= 0.0) continue;
          const int off = leg_bin(fwd_len, inv_bw) + sub[k].base_bin;
          if (off >= num_bins) continue;
          const int nb = std::min(static_cast<int>(sub[k].mass.size()), num_bins - off);
          const double* mass = sub[k].mass.data();
          double* out = bins.data() + off;
          for (int b = 0; b < nb; ++b) out[b] += fwd * mass[b];
          lo = std::min(lo, off);
          hi = std::max(hi, off + nb - 1);
        }
        int best_bin = -1;
        double best_total = 0.0;
        for (int q = lo; q <= hi; ++q) {
          if (bins[q] > best_total) {
            best_total = bins[q];
            best_bin = q;
          }
        }
        res = choose_pixel(direct, best_total, best_bin, scene.render);
        for (int q = lo; q <= hi; ++q) bins[q] = 0.0;
      }
      maps.depth[px] = res.depth;
      maps.intensity[px] = res.intensity;
      maps.artifact[px] = res.artifact ? 1 : 0;
    }
  });
  return maps;
}

DetectionMaps render_scene_bruteforce(const SceneConfig& scene) {
  validate_scene(scene);
  const int w = scene.grid.width;
  const int h = scene.grid.height;
  DetectionMaps maps;
  maps.width = w;
  maps.height = h;
  maps.depth.assign(static_cast<std::size_t>(w) * h, 0.0);
  maps.intensity.assign(static_cast<std::size_t>(w) * h, 0.0);
  maps.artifact.assign(static_cast<std::size_t>(w) * h, 0);

  const bool with_object = scene.object && !scene.object->points.empty();
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const DirectReturn direct = trace_direct(scene, i, j);
      PixelResolution res{direct.hit ? direct.ortho_depth : 0.0,
                          direct.hit ? direct.intensity : 0.0, false};
      if (direct.hit && with_object) {
        const PathHistogram hist =
            three_bounce_histogram(scene, direct.hit_point, scene.render);
        res = resolve_pixel(direct, hist, scene.render);
      }
      const std::size_t px = maps.index(i, j);
      maps.depth[px] = res.depth;
      maps.intensity[px] = res.intensity;
      maps.artifact[px] = res.artifact ? 1 : 0;
    }
  }
  return maps;
}

NlosDepthMap render_target_depth(const SceneConfig& scene, int res_w, int res_h,
                                 const WallWindow& window) {
  require(res_w >= 1 && res_h >= 1, "render_target_depth: resolution must be >= 1");
  double win_w = window.width;
  double win_h = window.height;
  if (win_w <= 0.0 || win_h <= 0.0) {
    win_w = scene.wall.extent_w;
    win_h = scene.wall.extent_h;
  }
  require(win_w > 0.0 && win_h > 0.0, "render_target_depth: degenerate window");

  NlosDepthMap map;
  map.width = res_w;
  map.height = res_h;
  map.depth.assign(static_cast<std::size_t>(res_w) * res_h, 0.0);
  if (!scene.object) return map;

  Vec3 u, v;
  wall_axes(scene.wall, &u, &v);
  const double u0 = window.center_u - 0.5 * win_w;
  const double v1 = window.center_v + 0.5 * win_h;

  for (const Vec3& p : scene.object->points) {
    const Vec3 rel = p - scene.wall.point;
    const double dist = dot(rel, scene.wall.normal);
    if (dist <= 0.0) continue;  // behind the wall
    const int col = static_cast<int>(std::floor((dot(rel, u) - u0) / win_w * res_w));
    const int row = static_cast<int>(std::floor((v1 - dot(rel, v)) / win_h * res_h));
    if (col < 0 || col >= res_w || row < 0 || row >= res_h) continue;
    double& cell = map.depth[map.index(row, col)];
    if (cell == 0.0 || dist < cell) cell = dist;
  }
  return map;
}

}  // namespace nlos
