#include "nlos/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "nlos/digest.hpp"
#include "nlos/errors.hpp"
#include "nlos/parallel.hpp"
#include "nlos/rng.hpp"

namespace nlos {

StackedInput split_and_stack(const DetectionMaps& maps) {
  require(maps.width % 2 == 0, "split_and_stack: map width must be even");
  const int half = maps.width / 2;
  StackedInput out;
  out.height = maps.height;
  out.half_width = half;
  for (auto& c : out.channels) c.resize(out.plane_size());
  for (int i = 0; i < maps.height; ++i) {
    for (int j = 0; j < half; ++j) {
      const std::size_t dst = static_cast<std::size_t>(i) * half + j;
      const std::size_t right = maps.index(i, j + half);
      const std::size_t left = maps.index(i, j);
      out.channels[0][dst] = maps.depth[right];
      out.channels[1][dst] = maps.intensity[right];
      out.channels[2][dst] = maps.depth[left];
      out.channels[3][dst] = maps.intensity[left];
    }
  }
  return out;
}

DetectionMaps unstack(const StackedInput& input) {
  DetectionMaps maps;
  maps.height = input.height;
  maps.width = input.half_width * 2;
  const std::size_t n = static_cast<std::size_t>(maps.width) * maps.height;
  maps.depth.assign(n, 0.0);
  maps.intensity.assign(n, 0.0);
  maps.artifact.assign(n, 0);
  const int half = input.half_width;
  for (int i = 0; i < maps.height; ++i) {
    for (int j = 0; j < half; ++j) {
      const std::size_t src = static_cast<std::size_t>(i) * half + j;
      maps.depth[maps.index(i, j + half)] = input.channels[0][src];
      maps.intensity[maps.index(i, j + half)] = input.channels[1][src];
      maps.depth[maps.index(i, j)] = input.channels[2][src];
      maps.intensity[maps.index(i, j)] = input.channels[3][src];
    }
  }
  return maps;
}

StackedInput normalize_channels(StackedInput input) {
  for (int c = 0; c < 4; ++c) {
    auto& plane = input.channels[c];
    const auto [mn_it, mx_it] = std::minmax_element(plane.begin(), plane.end());
    const double mn = *mn_it;
    const double mx = *mx_it;
    if (mx == mn) {
      std::fill(plane.begin(), plane.end(), 0.0);
      input.norm[c] = {mn, 0.0};
      continue;
    }
    const double scale = mx - mn;
    for (double& v : plane) v = (v - mn) / scale;
    input.norm[c] = {mn, scale};
  }
  return input;
}

std::vector<double> denormalize_channel(const std::vector<double>& values,
                                        const NormStats& stats) {
  std::vector<double> out = values;
  for (double& v : out) v = v * stats.scale + stats.offset;
  return out;
}

StackedInput add_left_noise(StackedInput input, double sigma, std::uint64_t seed) {
  require(sigma >= 0.0, "add_left_noise: sigma must be >= 0");
  Rng rng(mix_seed(seed, 0xA02Eull));
  for (int c = 2; c < 4; ++c) {
    for (double& v : input.channels[c]) {
      v = std::clamp(v + sigma * rng.normal(), 0.0, 1.0);
    }
  }
  return input;
}

GenerationResult generate_dataset(const std::vector<SourceObject>& objects,
                                  const std::vector<Placement>& placements,
                                  const SceneConfig& base_scene,
                                  const DatasetConfig& cfg, std::uint64_t seed) {
  require(!objects.empty() && !placements.empty(),
          "generate_dataset: objects and placements must be non-empty");
  const std::size_t total = objects.size() * placements.size();

  struct Slot {
    DatasetRecord record;
    bool ok = false;
    std::string error;
  };
  std::vector<Slot> slots(total);

  parallel_for(total, cfg.threads, [&](std::size_t idx) {
    const std::size_t oi = idx / placements.size();
    const std::size_t pi = idx % placements.size();
    const SourceObject& src = objects[oi];
    const Placement& pl = placements[pi];
    Slot& slot = slots[idx];
    slot.record.scene_id = src.id + "_p" + std::to_string(pi);
    slot.record.placement = pl;
    slot.record.empty_scene = !src.cloud.has_value();
    try {
      SceneConfig scene = base_scene;
      if (src.cloud) {
        scene.object = place_object(*src.cloud, scene.wall, pl.altitude, pl.yaw_deg,
                                    pl.distance);
      } else {
        scene.object.reset();
      }
      const DetectionMaps maps = render_scene(scene, 1);
      slot.record.target =
          render_target_depth(scene, cfg.target_w, cfg.target_h, cfg.window);
      slot.record.input = add_left_noise(
          normalize_channels(split_and_stack(maps)), cfg.noise_sigma,
          mix_seed(seed, idx));
      slot.ok = true;
    } catch (const std::exception& e) {
      slot.error = e.what();
    }
  });

  GenerationResult out;
  out.records.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    if (slots[i].ok) {
      out.records.push_back(std::move(slots[i].record));
    } else {
      out.failures.push_back({i, slots[i].record.scene_id, slots[i].error});
    }
  }
  return out;
}

SplitIndices split_train_test(std::size_t count, double fraction, std::uint64_t seed) {
  require(fraction > 0.0 && fraction < 1.0, "split_train_test: fraction must be in (0,1)");
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  Rng rng(mix_seed(seed, 0x51D7ull));
  for (std::size_t i = count; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
    std::swap(order[i - 1], order[j]);
  }
  const auto n_train = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(count)));
  SplitIndices split;
  split.train.assign(order.begin(), order.begin() + std::min(n_train, count));
  split.test.assign(order.begin() + std::min(n_train, count), order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::uint64_t digest_record(const DatasetRecord& record) {
  Digest d;
  d.update_string(record.scene_id);
  d.update_value(record.placement.altitude);
  d.update_value(record.placement.yaw_deg);
  d.update_value(record.placement.distance);
  d.update_value<std::uint8_t>(record.empty_scene ? 1 : 0);
  d.update_value(record.input.height);
  d.update_value(record.input.half_width);
  for (int c = 0; c < 4; ++c) {
    d.update_value(record.input.norm[c].offset);
    d.update_value(record.input.norm[c].scale);
    d.update_vector(record.input.channels[c]);
  }
  d.update_value(record.target.width);
  d.update_value(record.target.height);
  d.update_vector(record.target.depth);
  return d.value();
}

}  // namespace nlos
