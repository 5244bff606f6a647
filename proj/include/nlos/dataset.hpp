#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlos/render.hpp"
#include "nlos/scene.hpp"

namespace nlos {

struct NormStats {
  double offset = 0.0;
  double scale = 0.0;  // 0 marks a degenerate (constant) channel
};

// 4-channel network input: right-depth, right-intensity, left-depth,
// left-intensity, each height x (width/2). The channel order is a wire
// contract; tests pin it.
struct StackedInput {
  int height = 0;
  int half_width = 0;
  std::array<std::vector<double>, 4> channels;
  std::array<NormStats, 4> norm;

  std::size_t plane_size() const {
    return static_cast<std::size_t>(height) * half_width;
  }
};

// Splits detection maps into left/right halves and stacks them; values are
// copied unmodified. Requires an even map width.
StackedInput split_and_stack(const DetectionMaps& maps);

// Inverse of split_and_stack for the depth/intensity planes (the artifact
// plane is not part of the stacked input and comes back zeroed).
DetectionMaps unstack(const StackedInput& input);

// Per-channel min-max to [0,1]; constant channels become all zeros with
// scale 0. Records offset/scale so the mapping inverts.
StackedInput normalize_channels(StackedInput input);

std::vector<double> denormalize_channel(const std::vector<double>& values,
                                        const NormStats& stats);

// Additive Gaussian noise on the two left channels only, clipped to [0,1].
// Deterministic given the seed.
StackedInput add_left_noise(StackedInput input, double sigma, std::uint64_t seed);

struct Placement {
  double altitude = 0.0;
  double yaw_deg = 0.0;
  double distance = 0.08;
};

struct SourceObject {
  std::string id;
  std::optional<NlosObject> cloud;  // nullopt = empty-scene sentinel
};

struct DatasetRecord {
  std::string scene_id;
  Placement placement;
  bool empty_scene = false;
  StackedInput input;
  NlosDepthMap target;
};

struct DatasetConfig {
  double noise_sigma = 0.01;
  int target_w = 64;
  int target_h = 64;
  WallWindow window;  // default: full wall extent
  int threads = 0;
};

struct GenerationFailure {
  std::size_t index = 0;
  std::string scene_id;
  std::string error;
};

struct GenerationResult {
  std::vector<DatasetRecord> records;
  std::vector<GenerationFailure> failures;
};

// Renders |objects| x |placements| records (object-major order), each through
// render_scene + render_target_depth + split/normalize/noise. Deterministic
// given the seed and thread-count invariant; failed records are reported, not
// silently dropped.
GenerationResult generate_dataset(const std::vector<SourceObject>& objects,
                                  const std::vector<Placement>& placements,
                                  const SceneConfig& base_scene,
                                  const DatasetConfig& cfg, std::uint64_t seed);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Disjoint, exhaustive, deterministic shuffle split; train gets
// round(fraction * count) elements. Indices are returned sorted.
SplitIndices split_train_test(std::size_t count, double fraction, std::uint64_t seed);

std::uint64_t digest_record(const DatasetRecord& record);

}  // namespace nlos
