#pragma once

#include <chrono>
#include <map>
#include <string>
#include <vector>

#include "nlos/compressor.hpp"
#include "nlos/dataset.hpp"
#include "nlos/vae.hpp"

namespace nlos {

// Training-set latent dictionary: scene_id -> posterior mean of the target.
using LatentRegistry = std::map<std::string, std::vector<double>>;

// Tensor conversions. Targets are scaled by 1/depth_scale so they fit the
// decoder's [0,1] output range; predictions are scaled back.
nn::Tensor tensor_from_target(const NlosDepthMap& map, double depth_scale);
NlosDepthMap target_from_tensor(const nn::Tensor& t, double depth_scale);
nn::Tensor tensor_from_input(const StackedInput& input);

LatentRegistry build_latent_registry(const nn::VaeModel& vae,
                                     const std::vector<DatasetRecord>& train_records);

// Registry files: magic "NLOSLR01", uint32 count and latent dim, then per
// entry the id and float32 latent values.
void save_registry(const std::string& path, const LatentRegistry& registry);
LatentRegistry load_registry(const std::string& path);

struct ReconstructResult {
  NlosDepthMap map;
  double millis = 0.0;
};

// The two-step inference: decode(compress(y)), scaled to meters. Latent
// dimensions are validated at model-pairing time via check_model_pair.
ReconstructResult reconstruct(const nn::VaeModel& vae,
                              const nn::CompressorModel& compressor,
                              const StackedInput& input);

// Throws ContractError when the two parameter sets cannot be composed.
void check_model_pair(const nn::VaeModel& vae, const nn::CompressorModel& compressor);

}  // namespace nlos
